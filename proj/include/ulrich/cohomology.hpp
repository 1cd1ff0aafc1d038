#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulrich/matrix.hpp"

namespace ulrich {

// G = coker(alpha : O(-shift)^m -> O^m) on P^(num_vars - 1).
struct CokerPresentation {
    PolyMatrix alpha;
    std::size_t m = 0;
    std::size_t num_vars = 0;
    int shift = 1;
    int dimX = 0;  // dimension of the support of G

    int ambient() const { return static_cast<int>(num_vars) - 1; }
};

// Presentation with the validity checks: square, all variable weights 1,
// every nonzero entry homogeneous of degree `shift`.
CokerPresentation make_presentation(const PolyMatrix& alpha, int shift = 1, std::optional<int> dimX = std::nullopt);

// dim H^i(P^N, O(j)).
long long line_cohomology(int N, int i, int j);

// Rank of H^0(O(t - shift))^m -> H^0(O(t))^m induced by alpha.
std::size_t graded_rank(const PolyMatrix& alpha, int t, int shift = 1);
// Rank of H^N(O(t - shift))^m -> H^N(O(t))^m, N = ambient dimension, using
// the inverse-monomial basis x^(-1-b) of top cohomology.
std::size_t top_graded_rank(const PolyMatrix& alpha, int t, int shift = 1);

// True iff det(alpha) != 0.
bool is_injective(const PolyMatrix& alpha, int shift = 1);

struct CohomologyTable {
    int ambient = 0;
    std::size_t m = 0;
    int t_min = 0, t_max = 0;
    std::map<std::pair<int, int>, long long> h;  // (i, t) -> dimension

    long long at(int i, int t) const;
    // Sum_i (-1)^i h^i(G(t)) compared with m (chi(O(t)) - chi(O(t - shift))).
    bool euler_identity_holds(int shift = 1) const;
};

CohomologyTable coker_cohomology_table(const CokerPresentation& pres, int t_min, int t_max);

struct UlrichCertificate {
    bool injective = false;
    bool d1 = false;
    bool d2 = false;
    bool euler = false;
    std::pair<int, int> window;  // twists checked for the all-twist conditions
    CohomologyTable table;
    std::vector<std::string> failures;
};

// D2 is checked exactly; D1 quantifies over all twists and is checked on
// `window` (default [-dimX-3, 3]) as a finite proxy.
UlrichCertificate certify_ulrich(const CokerPresentation& pres,
                                 std::optional<std::pair<int, int>> window = std::nullopt);

struct PushforwardCheck {
    bool trivial = false;
    std::size_t rank = 0;
    long long h0 = 0;
};
PushforwardCheck check_pushforward_trivial(const CokerPresentation& pres);

nlohmann::json table_to_json(const CohomologyTable& table, const UlrichCertificate* cert = nullptr);

}  // namespace ulrich
