#pragma once
// Hand-rolled random generators shared by the property tests.

#include <algorithm>
#include <numeric>
#include <vector>

#include "ulrich/linalg.hpp"
#include "ulrich/poly.hpp"
#include "ulrich/rng.hpp"

namespace gen {

inline ulrich::Rational small_rational(ulrich::SeededRng& rng, long range = 9) {
    long num = rng.uniform(-range, range);
    long den = rng.uniform(1, 3);
    ulrich::Rational q(num, den);
    q.canonicalize();
    return q;
}

inline ulrich::FieldElement field_element(ulrich::SeededRng& rng, const ulrich::CyclotomicField& f) {
    std::vector<ulrich::Rational> c(f.degree());
    for (auto& x : c) x = small_rational(rng);
    return ulrich::FieldElement(f, c);
}

// All exponent vectors of weighted degree `deg`.
inline void monomials_of_degree(const std::vector<int>& w, int deg, std::size_t i, ulrich::Monomial& cur,
                                std::vector<ulrich::Monomial>& out) {
    if (i == w.size()) {
        if (deg == 0) out.push_back(cur);
        return;
    }
    for (int e = 0; e * w[i] <= deg; ++e) {
        cur[i] = e;
        monomials_of_degree(w, deg - e * w[i], i + 1, cur, out);
    }
    cur[i] = 0;
}

inline std::vector<ulrich::Monomial> monomials_of_degree(const ulrich::Ring& r, int deg) {
    std::vector<ulrich::Monomial> out;
    ulrich::Monomial cur(r.nvars(), 0);
    monomials_of_degree(r.vars().weights, deg, 0, cur, out);
    return out;
}

// Random homogeneous polynomial with roughly `density` fraction of monomials.
inline ulrich::MultiPoly homogeneous(ulrich::SeededRng& rng, const ulrich::Ring& r, int deg, int max_terms = 6,
                                     bool cyclotomic = false, long range = 9) {
    auto monos = monomials_of_degree(r, deg);
    ulrich::MultiPoly p(r);
    int terms = static_cast<int>(rng.uniform(1, max_terms));
    for (int k = 0; k < terms && !monos.empty(); ++k) {
        const auto& m = monos[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(monos.size()) - 1))];
        ulrich::FieldElement c =
            cyclotomic ? field_element(rng, r.field()) : ulrich::FieldElement(r.field(), small_rational(rng, range));
        p += ulrich::MultiPoly::monomial(r, m, c);
    }
    return p;
}

// Random nonzero linear form.
inline ulrich::MultiPoly linear(ulrich::SeededRng& rng, const ulrich::Ring& r, long range = 5) {
    while (true) {
        ulrich::MultiPoly p(r);
        for (std::size_t i = 0; i < r.nvars(); ++i)
            p += ulrich::MultiPoly::variable(r, i) *
                 ulrich::FieldElement(r.field(), ulrich::Rational(static_cast<long>(rng.uniform(-range, range))));
        if (!p.is_zero()) return p;
    }
}

using Point3 = std::vector<long>;

// Distinct primitive integer points with coordinates in [-box, box].
inline std::vector<Point3> small_points(ulrich::SeededRng& rng, std::size_t n, long box = 3) {
    std::vector<Point3> out;
    while (out.size() < n) {
        Point3 p{static_cast<long>(rng.uniform(-box, box)), static_cast<long>(rng.uniform(-box, box)),
                 static_cast<long>(rng.uniform(-box, box))};
        long g = std::gcd(std::gcd(std::labs(p[0]), std::labs(p[1])), std::labs(p[2]));
        if (g != 1) continue;
        long first = p[0] != 0 ? p[0] : (p[1] != 0 ? p[1] : p[2]);
        if (first < 0)
            for (auto& c : p) c = -c;
        bool seen = false;
        for (const auto& q : out) seen = seen || q == p;
        if (!seen) out.push_back(p);
    }
    return out;
}

inline ulrich::Rational value_at(const ulrich::Monomial& m, const Point3& p) {
    ulrich::Rational v = 1;
    for (std::size_t i = 0; i < 3; ++i)
        for (int e = 0; e < m[i]; ++e) v *= p[i];
    return v;
}

// Random ternary form of degree `deg` with integer coefficients in
// [-range, range] away from a few corrected monomials, vanishing at `pts`.
inline ulrich::MultiPoly form_through_points(ulrich::SeededRng& rng, const ulrich::Ring& r, int deg,
                                             const std::vector<Point3>& pts, long range = 9) {
    const auto& Q = ulrich::CyclotomicField::of(1);
    auto monos = monomials_of_degree(r, deg);
    while (true) {
        ulrich::MultiPoly g = homogeneous(rng, r, deg, static_cast<int>(monos.size()), false, range);
        std::vector<ulrich::Monomial> fix;
        while (fix.size() < pts.size()) {
            const auto& m = monos[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(monos.size()) - 1))];
            if (std::find(fix.begin(), fix.end(), m) == fix.end()) fix.push_back(m);
        }
        ulrich::DenseMatrix A;
        std::vector<ulrich::FieldElement> b;
        for (const auto& p : pts) {
            std::vector<ulrich::FieldElement> row;
            for (const auto& m : fix) row.emplace_back(Q, value_at(m, p));
            A.push_back(row);
            ulrich::Rational gp = 0;
            for (const auto& [m, c] : g.terms()) gp += c.rational() * value_at(m, p);
            b.emplace_back(Q, -gp);
        }
        auto sol = ulrich::solve_linear(A, b, fix.size(), Q);
        if (!sol) continue;
        for (std::size_t i = 0; i < fix.size(); ++i) g += ulrich::MultiPoly::monomial(r, fix[i], (*sol)[i]);
        bool ok = !g.is_zero();
        for (const auto& p : pts) {
            ulrich::Rational v = 0;
            for (const auto& [m, c] : g.terms()) v += c.rational() * value_at(m, p);
            ok = ok && v == 0;
        }
        if (ok) return g;
    }
}

// Rank of a dense rational matrix by plain Gaussian elimination.
inline std::size_t dense_rank(std::vector<std::vector<ulrich::Rational>> a) {
    std::size_t rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == rank || a[r][c] == 0) continue;
            ulrich::Rational f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Oracle: F is smooth iff its partials span every form of degree 3 deg F - 5.
inline bool smooth_oracle(const ulrich::MultiPoly& F) {
    const int D = F.total_degree();
    if (D == 1) return true;
    auto target = monomials_of_degree(F.ring(), 3 * D - 5);
    std::vector<std::vector<ulrich::Rational>> rows;
    for (std::size_t v = 0; v < 3; ++v) {
        ulrich::MultiPoly P = F.partial_derivative(v);
        for (const auto& m : monomials_of_degree(F.ring(), 2 * D - 4)) {
            ulrich::MultiPoly prod =
                P * ulrich::MultiPoly::monomial(F.ring(), m, ulrich::FieldElement(F.ring().field(), 1));
            std::vector<ulrich::Rational> row;
            for (const auto& t : target) row.push_back(prod.coeff(t).rational());
            rows.push_back(row);
        }
    }
    return dense_rank(rows) == target.size();
}

}  // namespace gen
