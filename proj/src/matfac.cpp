#include "ulrich/matfac.hpp"

#include <numeric>

#include "ulrich/cohomology.hpp"
#include "ulrich/errors.hpp"
#include "ulrich/polyio.hpp"

namespace ulrich {

namespace {

std::string entry_label(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

void require_square_common(const std::vector<PolyMatrix>& factors, const MultiPoly& target) {
    if (factors.empty()) throw InputError("a factorization needs at least one factor");
    const std::size_t m = factors.front().rows();
    for (const auto& f : factors) {
        if (!f.is_square() || f.rows() != m) throw InputError("factors must be square of a common size");
        if (f.ring() != target.ring()) throw InputError("factors and target live in different rings");
    }
}

MultiPoly product_of(const std::vector<MultiPoly>& forms) {
    MultiPoly p = MultiPoly::constant(forms.front().ring(), Rational(1));
    for (const auto& f : forms) p *= f;
    return p;
}

void require_forms(const std::vector<MultiPoly>& forms) {
    if (forms.empty()) throw InputError("empty list of forms");
    const Ring& r = forms.front().ring();
    for (const auto& f : forms) {
        if (f.ring() != r) throw InputError("forms live in different rings");
        if (f.is_zero()) throw InputError("zero form in product");
        if (!f.is_homogeneous()) throw InputError("form " + f.str() + " is not homogeneous");
    }
}

// t * Id for matrices
PolyMatrix diag_zeta(const Ring& ring, unsigned d) {
    const unsigned order = ring.field_order();
    PolyMatrix D(ring, d, d);
    for (unsigned j = 0; j < d; ++j)
        D(j, j) = MultiPoly::constant(ring, FieldElement::zeta(ring.field(), static_cast<long>(j * (order / d))));
    return D;
}

PolyMatrix cycle_shift(const Ring& ring, unsigned d) {
    // S e_j = e_{j+1}
    PolyMatrix S(ring, d, d);
    for (unsigned j = 0; j < d; ++j) S((j + 1) % d, j) = MultiPoly::constant(ring, Rational(1));
    return S;
}

}  // namespace

Ring common_ring(const Ring& a, const Ring& b, unsigned extra_order) {
    if (a.vars() != b.vars()) throw InputError("operands use different variables");
    unsigned order = lcm_order(lcm_order(a.field_order(), b.field_order()), extra_order);
    return a.with_field_order(order);
}

VerificationReport verify_mf(const MatrixFactorization& mf) {
    require_square_common(mf.factors, mf.target);
    PolyMatrix prod = mf.factors.front();
    for (std::size_t k = 1; k < mf.factors.size(); ++k) prod = prod * mf.factors[k];
    VerificationReport rep;
    auto bad = prod.first_mismatch_with_scalar(mf.target);
    if (!bad) {
        rep.ok = true;
        rep.detail = "product equals (" + mf.target.str() + ") * Id";
        return rep;
    }
    rep.first_failure = bad;
    const MultiPoly& got = prod(bad->first, bad->second);
    MultiPoly want = bad->first == bad->second ? mf.target : MultiPoly(mf.target.ring());
    rep.detail =
        "product entry " + entry_label(bad->first, bad->second) + " is " + got.str() + ", expected " + want.str();
    return rep;
}

VerificationReport verify_root(const MatrixRoot& root) {
    if (!root.matrix.is_square()) throw InputError("matrix root must be square");
    if (root.exponent < 1) throw InputError("root exponent must be positive");
    if (root.matrix.ring() != root.target.ring()) throw InputError("root and target live in different rings");
    PolyMatrix p = root.matrix.pow(root.exponent);
    VerificationReport rep;
    auto bad = p.first_mismatch_with_scalar(root.target);
    if (!bad) {
        rep.ok = true;
        rep.detail = "M^" + std::to_string(root.exponent) + " equals (" + root.target.str() + ") * Id";
        return rep;
    }
    rep.first_failure = bad;
    rep.detail = "M^" + std::to_string(root.exponent) + " entry " + entry_label(bad->first, bad->second) + " is " +
                 p(bad->first, bad->second).str();
    return rep;
}

MatrixFactorization make_verified_mf(std::vector<PolyMatrix> factors, const MultiPoly& target,
                                     std::string construction) {
    MatrixFactorization mf{std::move(factors), target, false, std::move(construction)};
    auto rep = verify_mf(mf);
    if (!rep.ok) throw MathFailure(mf.construction + ": verification failed: " + rep.detail);
    mf.verified = true;
    return mf;
}

MatrixRoot make_verified_root(PolyMatrix matrix, unsigned exponent, const MultiPoly& target, std::string construction) {
    MatrixRoot root{std::move(matrix), exponent, target, false, std::move(construction)};
    auto rep = verify_root(root);
    if (!rep.ok) throw MathFailure(root.construction + ": verification failed: " + rep.detail);
    root.verified = true;
    return root;
}

MatrixFactorization mf_from_linear_product(const std::vector<MultiPoly>& forms) {
    require_forms(forms);
    const int deg = forms.front().weighted_degree();
    for (const auto& f : forms)
        if (f.weighted_degree() != deg) throw InputError("forms must share a common degree");
    std::vector<PolyMatrix> factors;
    for (const auto& f : forms) factors.push_back(PolyMatrix::scalar(f.ring(), 1, f));
    return make_verified_mf(std::move(factors), product_of(forms), "linear_product");
}

MatrixRoot cyclic_root(const std::vector<MultiPoly>& forms) {
    if (forms.size() < 2) throw InputError("cyclic_root needs at least two forms");
    require_forms(forms);
    const int deg = forms.front().weighted_degree();
    for (const auto& f : forms)
        if (f.weighted_degree() != deg) throw InputError("forms must share a common degree");
    const std::size_t d = forms.size();
    PolyMatrix M(forms.front().ring(), d, d);
    // row j carries form_j in column j-1 (mod d)
    for (std::size_t j = 0; j < d; ++j) M(j, (j + d - 1) % d) = forms[j];
    return make_verified_root(std::move(M), static_cast<unsigned>(d), product_of(forms),
                              "cyclic_root(" + std::to_string(d) + ")");
}

MatrixFactorization root_to_constant_mf(const MatrixRoot& root) {
    if (!root.verified) throw InputError("root_to_constant_mf needs a verified root");
    std::vector<PolyMatrix> factors(root.exponent, root.matrix);
    return make_verified_mf(std::move(factors), root.target, root.construction + " -> constant");
}

MatrixFactorization split_t_power(const MatrixRoot& root, const std::string& t) {
    if (!root.verified) throw InputError("split_t_power needs a verified root");
    const unsigned d = root.exponent;
    const Ring& base = root.target.ring();
    if (auto idx = base.vars().index_of(t); idx && root.target.involves(*idx))
        throw InputError("variable '" + t + "' occurs in the root's target");
    int weight = 1;
    if (!root.target.is_zero()) {
        const int deg = root.target.weighted_degree();
        if (deg % static_cast<int>(d) != 0) throw InputError("target degree is not divisible by the exponent");
        weight = deg / static_cast<int>(d);
    }
    Ring ring = base.with_variable(t, weight, true).with_field_order(lcm_order(base.field_order(), d));
    if (ring.vars().weights[*ring.vars().index_of(t)] != weight)
        throw InputError("variable '" + t + "' has the wrong weight for this target");
    PolyMatrix M = root.matrix.to_ring(ring);
    MultiPoly tv = MultiPoly::variable(ring, t);
    PolyMatrix tI = PolyMatrix::scalar(ring, M.rows(), tv);
    const unsigned step = ring.field_order() / d;
    std::vector<PolyMatrix> factors;
    for (unsigned j = 0; j < d; ++j)
        factors.push_back(tI - FieldElement::zeta(ring.field(), static_cast<long>(j * step)) * M);
    MultiPoly target = tv.pow(d) - root.target.to_ring(ring);
    return make_verified_mf(std::move(factors), target, root.construction + " -> split_t_power");
}

MatrixRoot companion_root(const MatrixFactorization& mf) {
    if (!mf.verified) throw InputError("companion_root needs a verified factorization");
    const std::size_t d = mf.length(), m = mf.size();
    const Ring& ring = mf.target.ring();
    if (d == 1) return make_verified_root(mf.factors[0], 1, mf.target, mf.construction + " -> companion");
    std::vector<std::vector<PolyMatrix>> blocks(d, std::vector<PolyMatrix>(d, PolyMatrix(ring, m, m)));
    for (std::size_t i = 0; i < d; ++i) blocks[i][(i + 1) % d] = mf.factors[i];
    return make_verified_root(block_matrix(blocks), static_cast<unsigned>(d), mf.target,
                              mf.construction + " -> companion");
}

MatrixFactorization clifford_combine_two_factor(const MatrixFactorization& a, const MatrixFactorization& b) {
    if (a.length() != 2 || b.length() != 2) throw InputError("clifford combine needs length-2 factorizations");
    if (!a.verified || !b.verified) throw InputError("clifford combine needs verified inputs");
    Ring ring = common_ring(a.target.ring(), b.target.ring());
    MatrixFactorization ar = rotate_mf(a, 1), br = rotate_mf(b, 1);  // checks A2 A1 and B2 B1
    (void)ar;
    (void)br;
    PolyMatrix A1 = a.factors[0].to_ring(ring), A2 = a.factors[1].to_ring(ring);
    PolyMatrix B1 = b.factors[0].to_ring(ring), B2 = b.factors[1].to_ring(ring);
    PolyMatrix Im = PolyMatrix::identity(ring, a.size()), In = PolyMatrix::identity(ring, b.size());
    PolyMatrix beta1 = block_matrix({{kron(A1, In), kron(Im, B1)}, {-kron(Im, B2), kron(A2, In)}});
    PolyMatrix beta2 = block_matrix({{kron(A2, In), -kron(Im, B1)}, {kron(Im, B2), kron(A1, In)}});
    MultiPoly target = a.target.to_ring(ring) + b.target.to_ring(ring);
    return make_verified_mf({beta1, beta2}, target, "clifford[" + a.construction + " + " + b.construction + "]");
}

MatrixRoot clifford_root_combine(const MatrixRoot& root, const MatrixFactorization& mf) {
    if (root.exponent != 2) throw InputError("clifford_root_combine needs a square root");
    if (mf.length() != 2) throw InputError("clifford_root_combine needs a length-2 factorization");
    if (!root.verified || !mf.verified) throw InputError("clifford_root_combine needs verified inputs");
    rotate_mf(mf, 1);  // B2 B1 = h Id as well
    Ring ring = common_ring(root.target.ring(), mf.target.ring());
    PolyMatrix M = root.matrix.to_ring(ring);
    PolyMatrix B1 = mf.factors[0].to_ring(ring), B2 = mf.factors[1].to_ring(ring);
    PolyMatrix Im = PolyMatrix::identity(ring, root.size()), In = PolyMatrix::identity(ring, mf.size());
    PolyMatrix P = block_matrix({{kron(M, In), kron(Im, B1)}, {kron(Im, B2), -kron(M, In)}});
    MultiPoly target = root.target.to_ring(ring) + mf.target.to_ring(ring);
    return make_verified_root(std::move(P), 2, target,
                              "clifford_root[" + root.construction + " + " + mf.construction + "]");
}

MatrixRoot zeta_tensor_combine(const MatrixRoot& a, const MatrixRoot& b) {
    if (a.exponent != b.exponent) throw InputError("zeta_tensor_combine needs a common exponent");
    if (a.exponent < 2) throw InputError("zeta_tensor_combine needs exponent at least 2");
    if (!a.verified || !b.verified) throw InputError("zeta_tensor_combine needs verified roots");
    const unsigned d = a.exponent;
    Ring ring = common_ring(a.target.ring(), b.target.ring(), d);
    PolyMatrix M = a.matrix.to_ring(ring), N = b.matrix.to_ring(ring);
    PolyMatrix Im = PolyMatrix::identity(ring, M.rows()), In = PolyMatrix::identity(ring, N.rows());
    PolyMatrix X = kron(kron(M, In), diag_zeta(ring, d));
    PolyMatrix Y = kron(kron(Im, N), cycle_shift(ring, d));
    FieldElement zeta = FieldElement::zeta(ring.field(), static_cast<long>(ring.field_order() / d));
    if (!(X * Y == zeta * (Y * X))) throw MathFailure("zeta_tensor_combine: XY = zeta YX fails");
    MultiPoly target = a.target.to_ring(ring) + b.target.to_ring(ring);
    return make_verified_root(X + Y, d, target, "zeta_tensor[" + a.construction + " + " + b.construction + "]");
}

MatrixFactorization rotate_mf(const MatrixFactorization& mf, long k) {
    if (!mf.verified) throw InputError("rotate_mf needs a verified factorization");
    const long d = static_cast<long>(mf.length());
    const long s = ((k % d) + d) % d;
    std::vector<PolyMatrix> f;
    for (long i = 0; i < d; ++i) f.push_back(mf.factors[static_cast<std::size_t>((i + s) % d)]);
    if (s == 0) return mf;
    return make_verified_mf(std::move(f), mf.target, mf.construction + " -> rotate(" + std::to_string(s) + ")");
}

HerzogResult herzog_sum_mf(const std::vector<Summand>& summands, unsigned d) {
    if (summands.empty()) throw InputError("herzog_sum_mf needs at least one summand");
    if (d < 1) throw InputError("length must be positive");
    int deg = -1;
    for (const auto& s : summands) {
        if (s.size() != d) throw InputError("every summand must have exactly d forms");
        require_forms(s);
        int e = product_of(s).weighted_degree();
        if (deg < 0)
            deg = e;
        else if (e != deg)
            throw InputError("inconsistent degrees across summands");
    }
    std::size_t target_size = 1;
    for (std::size_t i = 1; i < summands.size(); ++i) target_size *= d;
    auto build = [&]() -> std::pair<MatrixFactorization, std::string> {
        if (summands.size() == 1) return {mf_from_linear_product(summands[0]), "single product"};
        if (d == 2) {
            MatrixFactorization acc = mf_from_linear_product(summands[0]);
            for (std::size_t i = 1; i < summands.size(); ++i)
                acc = clifford_combine_two_factor(acc, mf_from_linear_product(summands[i]));
            return {acc, "iterated clifford combine"};
        }
        MatrixRoot acc = cyclic_root(summands[0]);
        for (std::size_t i = 1; i < summands.size(); ++i) acc = zeta_tensor_combine(acc, cyclic_root(summands[i]));
        return {root_to_constant_mf(acc), "cyclic roots + zeta tensor combine + constant factorization"};
    };
    auto [mf, route] = build();
    const std::size_t size = mf.size();
    return HerzogResult{std::move(mf), size, target_size, route};
}

namespace {

// r with r^d = c in the given field, if one is found among rational roots
// and (for negative c) zeta_{2d} multiples.
std::optional<FieldElement> dth_root(const FieldElement& c, unsigned d) {
    if (!c.is_rational()) return std::nullopt;
    Rational q = c.rational();
    if (q == 0) return std::nullopt;
    Rational a = abs(q);
    Integer num, den;
    if (!mpz_root(num.get_mpz_t(), a.get_num_mpz_t(), d)) return std::nullopt;
    if (!mpz_root(den.get_mpz_t(), a.get_den_mpz_t(), d)) return std::nullopt;
    Rational r(num, den);
    const CyclotomicField& f = c.field();
    if (q > 0) return FieldElement(f, r);
    if (d % 2 == 1) return FieldElement(f, Rational(-r));
    if (f.order() % (2 * d) != 0) return std::nullopt;
    return FieldElement::zeta(f, static_cast<long>(f.order() / (2 * d))) * FieldElement(f, r);
}

// If the product of the forms is c * l^d, return a d-th root of it.
std::optional<MultiPoly> power_root(const Summand& s, unsigned d) {
    const MultiPoly& l = s.back();
    const auto& [lm, lc] = *l.terms().begin();
    FieldElement c(l.ring().field(), Rational(1));
    for (const auto& f : s) {
        if (f.term_count() != l.term_count()) return std::nullopt;
        FieldElement ratio = f.coeff(lm) / lc;
        if (ratio.is_zero() || !(f == l * ratio)) return std::nullopt;
        c *= ratio;
    }
    auto r = dth_root(c, d);
    if (!r) return std::nullopt;
    return l * *r;
}

}  // namespace

MatrixRoot root_of_sum(const std::vector<Summand>& summands, unsigned d) {
    if (summands.empty()) throw InputError("root_of_sum needs at least one summand");
    if (d < 2) throw InputError("root_of_sum needs d >= 2");
    for (const auto& s : summands) {
        if (s.size() != d) throw InputError("every summand must have exactly d forms");
        require_forms(s);
    }
    std::vector<MatrixRoot> seeds;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        auto r = power_root(summands[i], d);
        if (r && (d >= 3 || seeds.empty())) {
            MultiPoly tgt = product_of(summands[i]);
            seeds.push_back(make_verified_root(PolyMatrix::scalar(r->ring(), 1, *r), d, tgt, "power_root"));
        } else {
            rest.push_back(i);
        }
    }
    std::optional<MatrixRoot> acc;
    if (!seeds.empty()) {
        acc = seeds[0];
        for (std::size_t i = 1; i < seeds.size(); ++i) acc = zeta_tensor_combine(*acc, seeds[i]);
    }
    for (std::size_t i : rest) {
        if (!acc) {
            acc = cyclic_root(summands[i]);
        } else if (d == 2) {
            acc = clifford_root_combine(*acc, mf_from_linear_product(summands[i]));
        } else {
            acc = zeta_tensor_combine(*acc, cyclic_root(summands[i]));
        }
    }
    return *acc;
}

std::size_t root_of_sum_size(const std::vector<Summand>& summands, unsigned d) {
    if (summands.empty() || d < 2) throw InputError("root_of_sum_size needs summands and d >= 2");
    std::size_t seeds = 0, rest = 0;
    for (const auto& s : summands) {
        if (s.size() != d) throw InputError("every summand must have exactly d forms");
        if (power_root(s, d) && (d >= 3 || seeds == 0))
            ++seeds;
        else
            ++rest;
    }
    std::size_t size = 0;
    if (seeds > 0) {
        size = 1;
        for (std::size_t i = 1; i < seeds; ++i) size *= d;
    }
    for (std::size_t i = 0; i < rest; ++i) {
        if (size == 0)
            size = d;
        else
            size *= d == 2 ? 2 : d * d;
    }
    return size;
}

CokerPresentation mf_to_coker_presentation(const PolyMatrix& factor, std::optional<int> dimX) {
    return make_presentation(factor, 1, dimX);
}

nlohmann::json matrix_to_json(const PolyMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

PolyMatrix matrix_from_json(const nlohmann::json& j, const Ring& ring) {
    try {
        std::size_t rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
        const auto& e = j.at("entries");
        if (!e.is_array() || e.size() != rows) throw InputError("matrix \"entries\" does not match \"rows\"");
        std::vector<std::vector<std::string>> cells;
        for (const auto& row : e) {
            if (!row.is_array() || row.size() != cols) throw InputError("matrix row does not match \"cols\"");
            cells.emplace_back();
            for (const auto& c : row) cells.back().push_back(c.get<std::string>());
        }
        return PolyMatrix::parse(ring, cells);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed matrix JSON: ") + e.what());
    }
}

nlohmann::json mf_to_json(const MatrixFactorization& mf) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : mf.factors) factors.push_back(matrix_to_json(f));
    return {{"size", mf.size()},  {"length", mf.length()},   {"target", poly_to_json(mf.target)},
            {"factors", factors}, {"verified", mf.verified}, {"construction", mf.construction}};
}

MatrixFactorization mf_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("factorization JSON must be an object");
    for (const char* key : {"size", "length", "target", "factors"})
        if (!j.contains(key)) throw InputError(std::string("factorization JSON lacks \"") + key + "\"");
    try {
        MultiPoly target = poly_from_json(j.at("target"));
        std::vector<PolyMatrix> factors;
        for (const auto& f : j.at("factors")) factors.push_back(matrix_from_json(f, target.ring()));
        if (factors.size() != j.at("length").get<std::size_t>())
            throw InputError("\"length\" disagrees with the number of factors");
        for (const auto& f : factors)
            if (!f.is_square() || f.rows() != j.at("size").get<std::size_t>())
                throw InputError("factor shape disagrees with \"size\"");
        MatrixFactorization mf{std::move(factors), target, false, j.value("construction", std::string("file"))};
        return mf;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed factorization JSON: ") + e.what());
    }
}

nlohmann::json root_to_json(const MatrixRoot& root) {
    // Same layout as a factorization; the single factor is the root itself.
    return {{"kind", "root"},
            {"size", root.size()},
            {"length", root.exponent},
            {"target", poly_to_json(root.target)},
            {"factors", nlohmann::json::array({matrix_to_json(root.matrix)})},
            {"verified", root.verified},
            {"construction", root.construction}};
}

}  // namespace ulrich
