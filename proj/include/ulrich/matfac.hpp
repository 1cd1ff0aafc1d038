#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulrich/matrix.hpp"

namespace ulrich {

struct CokerPresentation;

struct VerificationReport {
    bool ok = false;
    // For factorizations: entry of the product that differs from f * Id.
    std::optional<std::pair<std::size_t, std::size_t>> first_failure;
    std::string detail;
};

// alpha_1 * ... * alpha_d == target * Id, all factors m x m.
struct MatrixFactorization {
    std::vector<PolyMatrix> factors;
    MultiPoly target;
    bool verified = false;
    std::string construction;

    std::size_t size() const { return factors.front().rows(); }
    std::size_t length() const { return factors.size(); }
};

// matrix^exponent == target * Id.
struct MatrixRoot {
    PolyMatrix matrix;
    unsigned exponent = 0;
    MultiPoly target;
    bool verified = false;
    std::string construction;

    std::size_t size() const { return matrix.rows(); }
};

using Summand = std::vector<MultiPoly>;  // the product of these forms

VerificationReport verify_mf(const MatrixFactorization& mf);
VerificationReport verify_root(const MatrixRoot& root);

// Verify and return; throws MathFailure carrying the report on failure.
MatrixFactorization make_verified_mf(std::vector<PolyMatrix> factors, const MultiPoly& target,
                                     std::string construction);
MatrixRoot make_verified_root(PolyMatrix matrix, unsigned exponent, const MultiPoly& target, std::string construction);

MatrixFactorization mf_from_linear_product(const std::vector<MultiPoly>& forms);
MatrixRoot cyclic_root(const std::vector<MultiPoly>& forms);
MatrixFactorization root_to_constant_mf(const MatrixRoot& root);
// beta_j = t * Id - zeta^(j-1) * M over Q(zeta_lcm(D, d)), target t^d - g.
MatrixFactorization split_t_power(const MatrixRoot& root, const std::string& t);
// Block (i, i+1 mod d) = alpha_{i+1}; C^d has the cyclic rotations of the
// factor product on its diagonal.
MatrixRoot companion_root(const MatrixFactorization& mf);
MatrixFactorization clifford_combine_two_factor(const MatrixFactorization& a, const MatrixFactorization& b);
// Square root P = [[M x I, I x B1], [I x B2, -M x I]] of g + h from a square
// root M of g and a length-2 factorization (B1, B2) of h. Size 2 m m'.
MatrixRoot clifford_root_combine(const MatrixRoot& root, const MatrixFactorization& mf);
// P = M x I x D + I x N x S with D = diag(zeta^j), S the cyclic shift.
MatrixRoot zeta_tensor_combine(const MatrixRoot& a, const MatrixRoot& b);

struct HerzogResult {
    MatrixFactorization mf;
    std::size_t achieved_size = 0;
    std::size_t target_size = 0;  // d^(s-1)
    std::string route;
};
HerzogResult herzog_sum_mf(const std::vector<Summand>& summands, unsigned d);

MatrixFactorization rotate_mf(const MatrixFactorization& mf, long k);

// Matrix d-th root of a sum of products. Summands that are a d-th power
// c * l^d with c a d-th power in the field give size-1 roots; the others give
// cyclic roots. d = 2 folds with clifford_root_combine, d >= 3 with
// zeta_tensor_combine.
MatrixRoot root_of_sum(const std::vector<Summand>& summands, unsigned d);
// Size of the matrix root_of_sum would return, without building it.
std::size_t root_of_sum_size(const std::vector<Summand>& summands, unsigned d);

CokerPresentation mf_to_coker_presentation(const PolyMatrix& factor, std::optional<int> dimX = std::nullopt);

nlohmann::json matrix_to_json(const PolyMatrix& m);
PolyMatrix matrix_from_json(const nlohmann::json& j, const Ring& ring);
nlohmann::json mf_to_json(const MatrixFactorization& mf);
// Parses without trusting the "verified" flag; call verify_mf on the result.
MatrixFactorization mf_from_json(const nlohmann::json& j);
nlohmann::json root_to_json(const MatrixRoot& root);

// Smallest ring containing both (same variables, field orders combined).
Ring common_ring(const Ring& a, const Ring& b, unsigned extra_order = 1);

}  // namespace ulrich
