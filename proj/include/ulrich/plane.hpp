#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ulrich/poly.hpp"
#include "ulrich/ranks.hpp"
#include "ulrich/upoly.hpp"

namespace ulrich {

// x -> x + a z, y -> y + b z.
struct Shear {
    Rational a, b;
};

MultiPoly apply_shear(const MultiPoly& F, const Shear& s);

// A binary form R(x, y) of degree `degree`, stored as R(x, 1). The root at
// y = 0 has multiplicity degree - affine.degree().
struct BinaryForm {
    UPoly affine;
    int degree = 0;

    bool is_zero() const { return affine.is_zero(); }
    int multiplicity_at_infinity() const { return degree - affine.degree(); }
    bool is_squarefree() const;
};

// Res_z(F, G) for ternary forms whose z^deg coefficients are nonzero
// constants; homogeneous of degree deg F * deg G in the first two variables.
BinaryForm resultant_z(const MultiPoly& F, const MultiPoly& G);

// Copies a ternary form with rational coefficients into Q[x, y, z] order of
// its own ring; throws InputError otherwise.
MultiPoly require_ternary_form(const MultiPoly& F, const std::string& what);

struct SmoothnessCertificate {
    bool smooth = false;
    std::string method;  // linear, zero-partial, resultant, common-component, macaulay
    std::vector<Shear> shears;
    std::string detail;
};

// Jacobian criterion: the three partials have no common projective zero.
// Resultants after a seeded shear decide most cases; when their gcd is not
// constant the answer comes from the rank of the partials' ideal in degree
// 3 deg F - 5, which is full exactly when the partials have no common zero.
SmoothnessCertificate is_smooth_plane_curve(const MultiPoly& F, std::uint64_t seed = 1, int retries = 8);

// Rank test alone, exposed for cross-checks.
bool partials_generate_in_degree(const MultiPoly& F);

struct TransversalityCertificate {
    bool transversal = false;
    int bezout = 0;  // deg F1 * deg H
    int distinct_points = 0;
    std::vector<Shear> shears;
    std::string resultant;  // Res_z after the last shear, as R(x, 1)
};

// True iff F1 and H meet in deg F1 * deg H distinct points. Throws
// InputError when they share a component.
TransversalityCertificate is_transversal(const MultiPoly& F1, const MultiPoly& H, std::uint64_t seed = 1,
                                         int retries = 6);

struct DecompositionChecks {
    SmoothnessCertificate f1_smooth;
    bool f1_f2 = false, f1_g2 = false, f1_f2g2 = false;
    bool all() const { return f1_smooth.smooth && f1_f2 && f1_g2 && f1_f2g2; }
};

struct Decomposition {
    MultiPoly F, F1, G1, F2, G2;
    int d1 = 0, d2 = 0;
    int attempts = 0;
    std::string strategy;                                   // "points-line", "points-conic" or "generic"
    std::vector<std::vector<Integer>> points;               // rational points of F used for F1
    std::optional<MultiPoly> f2_restricted, g2_restricted;  // on the parametrized F1, in (u, v)
    std::optional<DecompositionChecks> checks;

    bool identity_holds() const { return F == F1 * G1 + F2 * G2; }
};

struct DecomposeOptions {
    std::uint64_t seed = 1;
    int budget = 32;
    long coeff_range = 9;         // coefficients in [-range, range]; also the point-search box
    bool require_checks = false;  // count failed smoothness/transversality as a failed attempt
};

// F = F1 G1 + F2 G2 with deg F1 = d1, deg F2 = d2. When F1 can be a line or
// conic through rational points of F, the restriction of F to F1 is split
// into F2|F1 * G2|F1 and lifted; otherwise F1, F2 are sampled and G1, G2
// solved for. Throws BudgetExhausted after `budget` failed attempts.
Decomposition carlini_decompose(const MultiPoly& F, int d1, int d2, const DecomposeOptions& opt = {});

// Primitive integer points of F = 0 with coordinates in [-box, box], first
// nonzero coordinate positive.
std::vector<std::vector<Integer>> rational_points(const MultiPoly& F, long box);

struct SplittingType {
    int d = 0;
    int m = 0;
    std::vector<int> a;  // descending

    long staircase(int t) const;  // sum_i max(0, a_i + t + 1)
};

// f_* O(m) for f = (f0 : f1): P^1 -> P^1 of degree d, read off from the
// degrees of minimal generators of the degree = m (mod d) part of k[x, y]
// over k[f0, f1].
SplittingType splitting_type_p1(const MultiPoly& f0, const MultiPoly& f1, int m);

// h^0(P^1, O(m + d t)).
long expected_staircase(int d, int m, int t);

struct CoverDescriptor {
    int n = 2;
    int d = 2;
    int k = 1;
    MultiPoly branch;

    void validate() const;
};

// pi_* O_Y = O + O(-k) + ... + O(-(d-1)k).
LineBundleLedger pushforward_structure(const CoverDescriptor& cov);

struct PipelineReport {
    std::string pipeline;  // "even" or "odd"
    int d = 0, k = 0;
    long p = 0, r = 0;
    int d1 = 0, d2 = 0;
    bool ok = false;
    bool branch_smooth = false;
    bool f1_smooth = false;
    bool transversal = false;
    std::optional<Decomposition> decomposition;
    std::optional<Integer> rank;
    std::optional<RankReport> ranks;
    std::vector<std::string> trace;
    std::string failure;
};

PipelineReport even_parity_pipeline(const CoverDescriptor& cov, const DecomposeOptions& opt = {});
PipelineReport odd_parity_pipeline(const CoverDescriptor& cov, const DecomposeOptions& opt = {});

nlohmann::json decomposition_to_json(const Decomposition& d);
nlohmann::json splitting_to_json(const SplittingType& s);
nlohmann::json pipeline_to_json(const PipelineReport& r);
nlohmann::json smoothness_to_json(const SmoothnessCertificate& c);
nlohmann::json transversality_to_json(const TransversalityCertificate& c);

}  // namespace ulrich
