#include "ulrich/veronese.hpp"

#include "ulrich/errors.hpp"
#include "ulrich/polyio.hpp"

namespace ulrich {

std::vector<Monomial> monomial_basis(int n, int k) {
    if (n < 1 || k < 1) throw InputError("monomial_basis needs n >= 1 and k >= 1");
    return monomials_of_degree(static_cast<std::size_t>(n) + 1, k);
}

VeroneseChart VeroneseChart::make(const Ring& base, int k) {
    if (base.nvars() < 2) throw InputError("Veronese chart needs at least two variables");
    for (int w : base.vars().weights)
        if (w != 1) throw InputError("Veronese chart needs weight-1 variables");
    const int n = static_cast<int>(base.nvars()) - 1;
    auto basis = monomial_basis(n, k);
    std::vector<std::string> names;
    if (k == 1) {
        names = base.vars().names;
    } else {
        for (std::size_t i = 0; i < basis.size(); ++i) names.push_back("z" + std::to_string(i + 1));
    }
    Ring z = Ring::make(names, base.field_order());
    const std::size_t N = basis.size() - 1;
    return VeroneseChart{n, k, std::move(basis), N, base, z};
}

std::size_t VeroneseChart::index_of(const Monomial& m) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == m) return i;
    throw InputError("monomial is not in the Veronese basis");
}

std::vector<MultiPoly> VeroneseChart::substitution() const {
    std::vector<MultiPoly> images;
    for (const auto& m : basis) images.push_back(MultiPoly::monomial(base, m, FieldElement(base.field(), 1)));
    return images;
}

RewriteCertificate veronese_rewrite(const MultiPoly& g, const VeroneseChart& chart, unsigned d) {
    if (g.ring().vars().names != chart.base.vars().names)
        throw InputError("branch polynomial is not in the chart's ring");
    if (g.is_zero() || !g.is_homogeneous()) throw InputError("branch polynomial must be a nonzero form");
    if (g.weighted_degree() != static_cast<int>(d) * chart.k)
        throw InputError("degree " + std::to_string(g.weighted_degree()) +
                         " is not d*k = " + std::to_string(static_cast<int>(d) * chart.k));
    const Ring zr = chart.zring.with_field_order(g.ring().field_order());
    MultiPoly gprime(zr);
    std::vector<MonomialSplit> splits;
    for (const auto& [m, c] : g.terms()) {
        Monomial rest = m;
        MonomialSplit sp{m, {}};
        Monomial zexp(zr.nvars(), 0);
        for (unsigned part = 0; part < d; ++part) {
            // lex-largest degree-k divisor of what is left
            Monomial piece(rest.size(), 0);
            int need = chart.k;
            for (std::size_t v = 0; v < rest.size() && need > 0; ++v) {
                int take = std::min(rest[v], need);
                piece[v] = take;
                rest[v] -= take;
                need -= take;
            }
            std::size_t idx = chart.index_of(piece);
            sp.parts.push_back(idx);
            zexp[idx] += 1;
        }
        gprime += MultiPoly::monomial(zr, zexp, c);
        splits.push_back(std::move(sp));
    }
    return RewriteCertificate{g, gprime, d, std::move(splits)};
}

bool verify_rewrite(const RewriteCertificate& cert, const VeroneseChart& chart) {
    Ring base = chart.base.with_field_order(cert.g.ring().field_order());
    std::vector<MultiPoly> images;
    for (const auto& im : chart.substitution()) images.push_back(im.to_ring(base));
    return cert.gprime.substitute(images, base) == cert.g;
}

std::vector<Summand> sum_of_products_presentation(const MultiPoly& gprime, unsigned d) {
    if (gprime.is_zero() || !gprime.is_homogeneous() || gprime.weighted_degree() != static_cast<int>(d))
        throw InputError("g' must be a form of degree d");
    const Ring& r = gprime.ring();
    std::vector<Summand> out;
    for (const auto& [m, c] : gprime.terms()) {
        Summand s;
        for (std::size_t v = 0; v < m.size(); ++v)
            for (int e = 0; e < m[v]; ++e) s.push_back(MultiPoly::variable(r, v));
        if (s.size() != d) throw InputError("g' has a variable of weight other than 1");
        s.front() *= c;
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

struct SquareInfo {
    std::size_t index;  // position in the product list
    Rational c;         // product is c * v^2
    std::size_t var;
};

std::optional<SquareInfo> as_square(const Summand& s, std::size_t index) {
    if (s.size() != 2) return std::nullopt;
    const MultiPoly& v = s[1];
    if (v.term_count() != 1 || !v.terms().begin()->second.is_one()) return std::nullopt;
    if (s[0].term_count() != 1 || s[0].terms().begin()->first != v.terms().begin()->first) return std::nullopt;
    const FieldElement& c = s[0].terms().begin()->second;
    if (!c.is_rational()) return std::nullopt;
    const Monomial& m = v.terms().begin()->first;
    std::size_t var = 0;
    while (m[var] == 0) ++var;
    return SquareInfo{index, c.rational(), var};
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q <= 0) return std::nullopt;
    Integer a, b;
    if (!mpz_root(a.get_mpz_t(), q.get_num_mpz_t(), 2)) return std::nullopt;
    if (!mpz_root(b.get_mpz_t(), q.get_den_mpz_t(), 2)) return std::nullopt;
    return Rational(a, b);
}

// Rewrites sums of two squares as products of two linear forms (over Q(i)
// when the ratio of coefficients is a positive square) and moves the square
// that will seed the root to the front. Returns the new list, lifted to the
// field of order `order`.
std::vector<Summand> pair_squares(const std::vector<Summand>& products, std::vector<std::string>& notes) {
    std::vector<SquareInfo> squares;
    for (std::size_t i = 0; i < products.size(); ++i)
        if (auto sq = as_square(products[i], i)) squares.push_back(*sq);

    bool need_i = false;
    std::optional<std::size_t> seed;  // index into squares
    for (std::size_t j = 0; j < squares.size() && !seed; ++j)
        if (rational_sqrt(squares[j].c)) seed = j;
    for (std::size_t j = 0; j < squares.size() && !seed; ++j)
        if (rational_sqrt(-squares[j].c)) {
            seed = j;
            need_i = true;
        }

    struct Pair {
        std::size_t a, b;  // indices into squares
        Rational q;
        bool imaginary;
    };
    std::vector<Pair> pairs;
    std::vector<bool> used(squares.size(), false);
    if (seed) used[*seed] = true;
    for (std::size_t j = 0; j < squares.size(); ++j) {
        if (used[j]) continue;
        for (std::size_t l = j + 1; l < squares.size(); ++l) {
            if (used[l]) continue;
            Rational ratio = squares[l].c / squares[j].c;
            if (auto q = rational_sqrt(-ratio)) {
                pairs.push_back({j, l, *q, false});
            } else if (auto q2 = rational_sqrt(ratio)) {
                pairs.push_back({j, l, *q2, true});
                need_i = true;
            } else {
                continue;
            }
            used[j] = used[l] = true;
            break;
        }
    }

    const Ring& r0 = products.front().front().ring();
    const Ring ring = need_i ? r0.with_field_order(lcm_order(r0.field_order(), 4)) : r0;
    auto lift = [&](const Summand& s) {
        Summand out;
        for (const auto& f : s) out.push_back(f.to_ring(ring));
        return out;
    };
    std::vector<Summand> out;
    std::vector<bool> consumed(products.size(), false);
    if (seed) {
        out.push_back(lift(products[squares[*seed].index]));
        consumed[squares[*seed].index] = true;
    }
    std::map<std::size_t, const Pair*> pair_at;
    for (const auto& p : pairs) pair_at[squares[p.a].index] = &p;
    for (std::size_t i = 0; i < products.size(); ++i) {
        if (consumed[i]) continue;
        auto it = pair_at.find(i);
        if (it == pair_at.end()) {
            bool partner = false;
            for (const auto& p : pairs)
                if (squares[p.b].index == i) partner = true;
            if (!partner) out.push_back(lift(products[i]));
            continue;
        }
        const Pair& p = *it->second;
        const SquareInfo& A = squares[p.a];
        const SquareInfo& B = squares[p.b];
        MultiPoly a = MultiPoly::variable(ring, A.var), b = MultiPoly::variable(ring, B.var);
        FieldElement qb(ring.field(), p.q);
        if (p.imaginary) qb *= FieldElement::zeta(ring.field(), static_cast<long>(ring.field_order() / 4));
        // c_a a^2 + c_b b^2 = (a + qb b) * c_a (a - qb b)
        MultiPoly u = a + b * qb;
        MultiPoly v = (a - b * qb) * FieldElement(ring.field(), A.c);
        out.push_back({u, v});
        notes.push_back("paired " + products[A.index][1].str() + "^2 with " + products[B.index][1].str() + "^2" +
                        (p.imaginary ? " over Q(i)" : ""));
    }
    return out;
}

}  // namespace

CoverBuild build_cover_mf(int n, int k, unsigned d, const MultiPoly& g, std::size_t max_size) {
    if (d < 2) throw InputError("covering degree must be at least 2");
    if (k < 1) throw InputError("k must be positive");
    if (static_cast<int>(g.ring().nvars()) != n + 1)
        throw InputError("branch polynomial must have n+1 = " + std::to_string(n + 1) + " variables");
    VeroneseChart chart = VeroneseChart::make(g.ring(), k);
    RewriteCertificate cert = veronese_rewrite(g, chart, d);
    if (!verify_rewrite(cert, chart)) throw MathFailure("Veronese rewrite failed its substitution check");
    std::vector<std::string> stages;
    stages.push_back("rewrite: g' has s = " + std::to_string(cert.gprime.term_count()) + " terms in " +
                     std::to_string(chart.basis.size()) + " Veronese coordinates");
    std::vector<Summand> products = sum_of_products_presentation(cert.gprime, d);
    if (d == 2) {
        std::vector<std::string> notes;
        products = pair_squares(products, notes);
        for (auto& s : notes) stages.push_back("pairing: " + s);
    }
    const std::size_t predicted = root_of_sum_size(products, d);
    if (predicted > max_size)
        throw MathFailure("matrix root of g' would have size " + std::to_string(predicted) + " > limit " +
                          std::to_string(max_size));
    MatrixRoot root = root_of_sum(products, d);
    stages.push_back("root of g': size " + std::to_string(root.size()) + " (" + root.construction + ")");
    std::string t = "t";
    while (chart.zring.vars().index_of(t)) t += "_";
    MatrixFactorization mf = split_t_power(root, t);
    stages.push_back("split t^" + std::to_string(d) + " - g': length " + std::to_string(mf.length()) + ", size " +
                     std::to_string(mf.size()) + " over Q(zeta_" + std::to_string(mf.target.ring().field_order()) +
                     ")");
    const std::size_t s = cert.gprime.term_count();
    std::size_t target = 1;
    for (std::size_t i = 0; i < s; ++i) target *= d;
    const std::size_t achieved = mf.size();
    return CoverBuild{std::move(chart), std::move(cert), std::move(products), std::move(root), std::move(mf), s,
                      target,           achieved,        std::move(stages)};
}

nlohmann::json cover_report_json(const CoverBuild& b) {
    nlohmann::json splitting = nlohmann::json::array();
    for (const auto& sp : b.certificate.splitting) {
        nlohmann::json parts = nlohmann::json::array();
        for (auto p : sp.parts) parts.push_back(b.chart.zring.vars().names[p]);
        splitting.push_back({{"monomial", sp.monomial}, {"parts", parts}});
    }
    nlohmann::json coords = nlohmann::json::array();
    for (std::size_t i = 0; i < b.chart.basis.size(); ++i)
        coords.push_back({{"z", b.chart.zring.vars().names[i]},
                          {"x", MultiPoly::monomial(b.chart.base, b.chart.basis[i], FieldElement()).str()}});
    return {{"n", b.chart.n},
            {"k", b.chart.k},
            {"d", b.certificate.d},
            {"s", b.s},
            {"bound_size", b.bound_size},
            {"achieved_size", b.achieved_size},
            {"certificate",
             {{"g", b.certificate.g.str()},
              {"gprime", b.certificate.gprime.str()},
              {"coordinates", coords},
              {"splitting", splitting},
              {"substitution_verified", verify_rewrite(b.certificate, b.chart)}}},
            {"stages", b.stages},
            {"root", root_to_json(b.root)},
            {"factorization", mf_to_json(b.mf)}};
}

}  // namespace ulrich
