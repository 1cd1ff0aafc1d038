#include "ulrich/plane.hpp"

#include <algorithm>
#include <numeric>

#include "ulrich/errors.hpp"
#include "ulrich/linalg.hpp"
#include "ulrich/rng.hpp"

namespace ulrich {

namespace {

const CyclotomicField& Q() { return CyclotomicField::of(1); }

FieldElement q(const Rational& r) { return FieldElement(Q(), r); }

using Point = std::vector<Integer>;

Shear next_shear(SeededRng& rng) {
    return Shear{Rational(static_cast<long>(rng.uniform(-4, 4))), Rational(static_cast<long>(rng.uniform(-4, 4)))};
}

// F(x0, 1, z) as a polynomial in z.
UPoly z_slice(const MultiPoly& F, const Rational& x0) {
    std::vector<Rational> c(static_cast<std::size_t>(F.total_degree()) + 1);
    for (const auto& [m, v] : F.terms()) {
        Rational xp = 1;
        for (int i = 0; i < m[0]; ++i) xp *= x0;
        c[static_cast<std::size_t>(m[2])] += v.rational() * xp;
    }
    return UPoly(c);
}

// Resultant of two univariate polynomials with nonzero leading
// coefficients, by the Euclidean remainder sequence.
Rational univariate_resultant(UPoly f, UPoly g) {
    Rational acc = 1;
    while (true) {
        const int m = f.degree(), n = g.degree();
        if (f.is_zero() || g.is_zero()) return 0;
        if (n == 0) {
            Rational p = 1;
            for (int i = 0; i < m; ++i) p *= g.leading();
            return acc * p;
        }
        UPoly r = f % g;
        if (r.is_zero()) return 0;
        if ((m * n) % 2 == 1) acc = -acc;
        for (int i = 0; i < m - r.degree(); ++i) acc *= g.leading();
        f = std::move(g);
        g = std::move(r);
    }
}

// Arithmetic modulo the Mersenne prime 2^61 - 1, used only as a one-sided
// filter: a constant gcd modulo p (with leading coefficients surviving the
// reduction) implies a constant gcd over Q.
constexpr std::uint64_t kPrime = 2305843009213693951ULL;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mulmod(a, a))
        if (e & 1) r = mulmod(r, a);
    return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }

std::optional<std::vector<std::uint64_t>> reduce_mod_p(const UPoly& a) {
    std::vector<std::uint64_t> out;
    for (const auto& c : a.coeffs()) {
        Integer n = c.get_num(), d = c.get_den();
        std::uint64_t dn = mpz_fdiv_ui(d.get_mpz_t(), kPrime);
        if (dn == 0) return std::nullopt;
        out.push_back(mulmod(mpz_fdiv_ui(n.get_mpz_t(), kPrime), invmod(dn)));
    }
    if (!out.empty() && out.back() == 0) return std::nullopt;
    return out;
}

int gcd_degree_mod_p(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    auto trim = [](std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        const std::uint64_t inv = invmod(b.back());
        while (a.size() >= b.size()) {
            const std::uint64_t f = mulmod(a.back(), inv);
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[shift + i] = (a[shift + i] + kPrime - mulmod(f, b[i])) % kPrime;
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

// True only when a and b are certainly coprime over Q.
bool certainly_coprime(const UPoly& a, const UPoly& b) {
    auto ra = reduce_mod_p(a), rb = reduce_mod_p(b);
    return ra && rb && gcd_degree_mod_p(*ra, *rb) == 0;
}

bool squarefree_affine(const UPoly& a) {
    if (a.degree() <= 0) return true;
    if (certainly_coprime(a, a.derivative())) return true;
    return ulrich::is_squarefree(a);
}

Rational leading_z(const MultiPoly& F) {
    Monomial m{0, 0, F.total_degree()};
    return F.coeff(m).rational();
}

// Binary forms in (u, v) as polynomials in u with v = 1.
UPoly dehomogenize(const MultiPoly& f) {
    if (f.is_zero()) return UPoly();
    std::vector<Rational> c(static_cast<std::size_t>(f.total_degree()) + 1);
    for (const auto& [m, v] : f.terms()) c[static_cast<std::size_t>(m[0])] = v.rational();
    return UPoly(c);
}

MultiPoly homogenize(const UPoly& p, int degree, const Ring& uv) {
    MultiPoly out(uv);
    for (int i = 0; i <= p.degree(); ++i)
        if (p.coeff(i) != 0) out += MultiPoly::monomial(uv, {i, degree - i}, q(p.coeff(i)));
    return out;
}

std::optional<MultiPoly> divide_binary(const MultiPoly& f, const MultiPoly& g) {
    const int df = f.total_degree(), dg = g.total_degree();
    if (dg > df) return std::nullopt;
    UPoly quo, rem;
    UPoly::divmod(dehomogenize(f), dehomogenize(g), quo, rem);
    if (!rem.is_zero() || quo.degree() > df - dg) return std::nullopt;
    MultiPoly out = homogenize(quo, df - dg, f.ring());
    if (!(out * g == f)) return std::nullopt;
    return out;
}

std::vector<Monomial> forms_basis(int deg) { return deg < 0 ? std::vector<Monomial>{} : monomials_of_degree(3, deg); }

MultiPoly random_form(SeededRng& rng, const Ring& r, int deg, long range) {
    MultiPoly out(r);
    if (deg < 0) return out;
    while (out.is_zero())
        for (const auto& m : monomials_of_degree(r.nvars(), deg))
            out += MultiPoly::monomial(r, m, q(Rational(static_cast<long>(rng.uniform(-range, range)))));
    return out;
}

MultiPoly form_from(const Ring& r, const std::vector<Monomial>& basis, const std::vector<FieldElement>& c,
                    std::size_t offset = 0) {
    MultiPoly out(r);
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!c[offset + i].is_zero()) out += MultiPoly::monomial(r, basis[i], c[offset + i]);
    return out;
}

// Solve sum_i c_i * cols[i] = target for forms; cols and target share a ring.
std::optional<std::vector<FieldElement>> solve_forms(const std::vector<MultiPoly>& cols, const MultiPoly& target) {
    std::map<Monomial, std::size_t> row_of;
    auto row = [&](const Monomial& m) {
        auto it = row_of.find(m);
        if (it != row_of.end()) return it->second;
        std::size_t k = row_of.size();
        row_of[m] = k;
        return k;
    };
    for (const auto& c : cols)
        for (const auto& [m, v] : c.terms()) row(m);
    for (const auto& [m, v] : target.terms()) row(m);
    DenseMatrix A(row_of.size(), std::vector<FieldElement>(cols.size(), q(0)));
    std::vector<FieldElement> b(row_of.size(), q(0));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [m, v] : cols[j].terms()) A[row_of[m]][j] = v;
    for (const auto& [m, v] : target.terms()) b[row_of[m]] = v;
    return solve_linear(A, b, cols.size(), Q());
}

Point cross(const Point& a, const Point& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Integer dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

bool proportional(const Point& a, const Point& b) {
    Point c = cross(a, b);
    return c[0] == 0 && c[1] == 0 && c[2] == 0;
}

// (u0, v0) with u0 A + v0 B = R, for R on the line through A and B.
std::pair<Rational, Rational> line_coords(const Point& A, const Point& B, const Point& R) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Rational det = Rational(A[i] * B[j] - A[j] * B[i]);
            if (det == 0) continue;
            Rational u0 = Rational(R[i] * B[j] - R[j] * B[i]) / det;
            Rational v0 = Rational(A[i] * R[j] - A[j] * R[i]) / det;
            return {u0, v0};
        }
    throw MathFailure("degenerate line in parametrization");
}

Point random_point(SeededRng& rng, long box) {
    while (true) {
        Point p{Integer(static_cast<long>(rng.uniform(-box, box))), Integer(static_cast<long>(rng.uniform(-box, box))),
                Integer(static_cast<long>(rng.uniform(-box, box)))};
        if (p[0] != 0 || p[1] != 0 || p[2] != 0) return p;
    }
}

std::string point_str(const Point& p) {
    return "(" + p[0].get_str() + ":" + p[1].get_str() + ":" + p[2].get_str() + ")";
}

// A parametrized line or conic F1 together with the parameters of the known
// points of F on it.
struct Curve {
    MultiPoly F1;
    std::vector<MultiPoly> phi;  // images of x, y, z in (u, v)
    std::vector<std::pair<Rational, Rational>> params;
    std::vector<Point> used;
};

void add_param(Curve& c, const Rational& u0, const Rational& v0) {
    for (const auto& [a, b] : c.params)
        if (a * v0 == b * u0) return;
    c.params.emplace_back(u0, v0);
}

std::optional<Curve> line_through(SeededRng& rng, const std::vector<Point>& pts, const Ring& r, const Ring& uv) {
    std::size_t i = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(pts.size()) - 1));
    std::size_t j = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(pts.size()) - 2));
    if (j >= i) ++j;
    const Point &P = pts[i], &R = pts[j];
    Point L = cross(P, R);
    Curve c{MultiPoly(r), {}, {}, {P, R}};
    for (int k = 0; k < 3; ++k) c.F1 += MultiPoly::variable(r, static_cast<std::size_t>(k)) * q(Rational(L[k]));
    MultiPoly u = MultiPoly::variable(uv, 0), v = MultiPoly::variable(uv, 1);
    for (int k = 0; k < 3; ++k) c.phi.push_back(u * q(Rational(P[k])) + v * q(Rational(R[k])));
    for (const auto& S : pts)
        if (dot(L, S) == 0) {
            auto [u0, v0] = line_coords(P, R, S);
            add_param(c, u0, v0);
        }
    return c;
}

std::optional<Curve> conic_through(SeededRng& rng, const std::vector<Point>& pts, const Ring& r, const Ring& uv,
                                   long box) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < 5; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(idx.size() - i) - 1));
        std::swap(idx[i], idx[j]);
    }
    const auto basis = forms_basis(2);
    DenseMatrix A;
    for (std::size_t i = 0; i < 5; ++i) {
        const Point& P = pts[idx[i]];
        std::vector<FieldElement> row;
        for (const auto& m : basis) {
            Integer v = 1;
            for (int k = 0; k < 3; ++k)
                for (int e = 0; e < m[static_cast<std::size_t>(k)]; ++e) v *= P[k];
            row.push_back(q(Rational(v)));
        }
        A.push_back(row);
    }
    auto ns = null_space(A, basis.size(), Q());
    if (ns.size() != 1) return std::nullopt;
    // symmetric matrix of the conic
    std::vector<std::vector<Rational>> M(3, std::vector<Rational>(3));
    for (std::size_t b = 0; b < basis.size(); ++b) {
        std::vector<int> at;
        for (int k = 0; k < 3; ++k)
            for (int e = 0; e < basis[b][static_cast<std::size_t>(k)]; ++e) at.push_back(k);
        Rational c = ns[0][b].rational();
        if (at[0] == at[1]) {
            M[at[0]][at[0]] = c;
        } else {
            M[at[0]][at[1]] = c / 2;
            M[at[1]][at[0]] = c / 2;
        }
    }
    if (determinant(M) == 0) return std::nullopt;
    const Point& P0 = pts[idx[0]];
    Point A1, B1;
    do {
        A1 = random_point(rng, box);
        B1 = random_point(rng, box);
    } while (dot(P0, cross(A1, B1)) == 0);

    Curve c{form_from(r, basis, ns[0]), {}, {}, {}};
    for (std::size_t i = 0; i < 5; ++i) c.used.push_back(pts[idx[i]]);
    MultiPoly u = MultiPoly::variable(uv, 0), v = MultiPoly::variable(uv, 1);
    std::vector<MultiPoly> W;
    for (int k = 0; k < 3; ++k) W.push_back(u * q(Rational(A1[k])) + v * q(Rational(B1[k])));
    MultiPoly CW(uv), BP(uv);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CW += W[i] * W[j] * q(M[i][j]);
            BP += W[j] * q(M[i][j] * Rational(P0[i]));
        }
    for (int k = 0; k < 3; ++k) c.phi.push_back(CW * q(Rational(P0[k])) - BP * W[k] * q(Rational(2)));
    auto polar = [&](const Point& X, const Point& Y) {
        Rational s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += M[i][j] * Rational(X[i] * Y[j]);
        return s;
    };
    add_param(c, polar(P0, B1), -polar(P0, A1));
    const Point AB = cross(A1, B1);
    for (const auto& S : pts) {
        if (proportional(S, P0) || polar(S, S) != 0) continue;
        Point WS = cross(cross(P0, S), AB);
        auto [u0, v0] = line_coords(A1, B1, WS);
        add_param(c, u0, v0);
    }
    return c;
}

MultiPoly lift(const Curve& c, const MultiPoly& target, int deg, const Ring& r) {
    const auto basis = forms_basis(deg);
    std::vector<MultiPoly> cols;
    for (const auto& m : basis) {
        MultiPoly img = MultiPoly::constant(target.ring(), Rational(1));
        for (int k = 0; k < 3; ++k)
            img *= c.phi[static_cast<std::size_t>(k)].pow(static_cast<unsigned>(m[static_cast<std::size_t>(k)]));
        cols.push_back(img);
    }
    auto sol = solve_forms(cols, target);
    if (!sol) throw MathFailure("restriction does not lift");
    return form_from(r, basis, *sol);
}

struct Attempt {
    MultiPoly F1, G1, F2, G2;
    std::string strategy;
    std::vector<Point> used;
    std::optional<MultiPoly> f2r, g2r;
};

std::optional<Attempt> attempt_on_curve(const Curve& c, const MultiPoly& F, int d1, int d2, SeededRng& rng, long range,
                                        const std::string& strategy) {
    const Ring& r = F.ring();
    const int D = F.total_degree();
    MultiPoly f = F.substitute(c.phi, c.phi[0].ring());
    if (f.is_zero()) return std::nullopt;
    const Ring& uv = f.ring();
    std::vector<MultiPoly> factors;
    for (const auto& [u0, v0] : c.params)
        factors.push_back(MultiPoly::variable(uv, 0) * q(v0) - MultiPoly::variable(uv, 1) * q(u0));
    for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(factors.size() - i) - 1));
        std::swap(factors[i], factors[j]);
    }
    MultiPoly known = MultiPoly::constant(uv, Rational(1));
    for (const auto& l : factors) known *= l;
    auto rest = divide_binary(f, known);
    if (!rest) return std::nullopt;
    const int need = d2 * (strategy == "points-line" ? 1 : 2);
    const int nk = static_cast<int>(factors.size());
    MultiPoly h = MultiPoly::constant(uv, Rational(1));
    if (need <= nk) {
        for (int i = 0; i < need; ++i) h *= factors[static_cast<std::size_t>(i)];
    } else if (need >= rest->total_degree() && need - rest->total_degree() <= nk) {
        h = *rest;
        for (int i = 0; i < need - rest->total_degree(); ++i) h *= factors[static_cast<std::size_t>(i)];
    } else {
        return std::nullopt;
    }
    auto cof = divide_binary(f, h);
    if (!cof) return std::nullopt;
    MultiPoly F2 = lift(c, h, d2, r);
    if (d2 >= d1) F2 += c.F1 * random_form(rng, r, d2 - d1, range);
    MultiPoly G2 = lift(c, *cof, D - d2, r);
    if (D - d2 >= d1) G2 += c.F1 * random_form(rng, r, D - d2 - d1, range);
    MultiPoly rem = F - F2 * G2;
    const auto gb = forms_basis(D - d1);
    std::vector<MultiPoly> cols;
    for (const auto& m : gb) cols.push_back(c.F1 * MultiPoly::monomial(r, m, q(1)));
    auto sol = solve_forms(cols, rem);
    if (!sol) return std::nullopt;
    return Attempt{c.F1, form_from(r, gb, *sol), F2, G2, strategy, c.used, h, *cof};
}

std::optional<Attempt> attempt_generic(const MultiPoly& F, int d1, int d2, SeededRng& rng, long range) {
    const Ring& r = F.ring();
    const int D = F.total_degree();
    MultiPoly F1 = random_form(rng, r, d1, range);
    MultiPoly F2 = random_form(rng, r, d2, range);
    const auto b1 = forms_basis(D - d1), b2 = forms_basis(D - d2);
    std::vector<MultiPoly> cols;
    for (const auto& m : b1) cols.push_back(F1 * MultiPoly::monomial(r, m, q(1)));
    for (const auto& m : b2) cols.push_back(F2 * MultiPoly::monomial(r, m, q(1)));
    auto sol = solve_forms(cols, F);
    if (!sol) return std::nullopt;
    return Attempt{F1, form_from(r, b1, *sol), F2, form_from(r, b2, *sol, b1.size()), "generic", {}, {}, {}};
}

}  // namespace

MultiPoly apply_shear(const MultiPoly& F, const Shear& s) {
    const Ring& r = F.ring();
    MultiPoly x = MultiPoly::variable(r, 0), y = MultiPoly::variable(r, 1), z = MultiPoly::variable(r, 2);
    return F.substitute({x + z * FieldElement(r.field(), s.a), y + z * FieldElement(r.field(), s.b), z}, r);
}

bool BinaryForm::is_squarefree() const {
    if (is_zero()) return false;
    return multiplicity_at_infinity() <= 1 && squarefree_affine(affine);
}

MultiPoly require_ternary_form(const MultiPoly& F, const std::string& what) {
    const Ring& r = F.ring();
    if (r.nvars() != 3) throw InputError(what + " must be a form in three variables");
    for (int w : r.vars().weights)
        if (w != 1) throw InputError(what + " must use weight-1 variables");
    if (F.is_zero()) throw InputError(what + " is zero");
    if (!F.is_homogeneous()) throw InputError(what + " is not homogeneous");
    Ring r1 = r.with_field_order(1);
    MultiPoly out(r1);
    for (const auto& [m, c] : F.terms()) {
        if (!c.is_rational()) throw InputError(what + " must have rational coefficients");
        out += MultiPoly::monomial(r1, m, q(c.rational()));
    }
    return out;
}

BinaryForm resultant_z(const MultiPoly& F, const MultiPoly& G) {
    const int df = F.total_degree(), dg = G.total_degree();
    if (df < 1 || dg < 1) throw InputError("resultant needs forms of positive degree");
    if (leading_z(F) == 0 || leading_z(G) == 0)
        throw InputError("resultant needs nonzero constant leading coefficients in z");
    const int e = df * dg;
    std::vector<Rational> xs, ys;
    for (int i = 0; i <= e; ++i) {
        Rational x0(i);
        xs.push_back(x0);
        ys.push_back(univariate_resultant(z_slice(F, x0), z_slice(G, x0)));
    }
    return BinaryForm{interpolate(xs, ys), e};
}

bool partials_generate_in_degree(const MultiPoly& F0) {
    MultiPoly F = require_ternary_form(F0, "curve");
    const int D = F.total_degree();
    if (D == 1) return true;
    const int e = 3 * D - 5;
    const auto target = forms_basis(e);
    std::map<Monomial, std::size_t> col;
    for (std::size_t i = 0; i < target.size(); ++i) col[target[i]] = i;
    EchelonBasis eb(Q());
    for (std::size_t v = 0; v < 3; ++v) {
        MultiPoly P = F.partial_derivative(v);
        if (P.is_zero()) continue;
        for (const auto& m : forms_basis(2 * D - 4)) {
            SparseRow row;
            for (const auto& [mm, c] : P.terms()) {
                Monomial s = mm;
                for (std::size_t k = 0; k < 3; ++k) s[k] += m[k];
                row[col.at(s)] = c;
            }
            eb.insert(std::move(row));
            if (eb.rank() == target.size()) return true;
        }
    }
    return eb.rank() == target.size();
}

SmoothnessCertificate is_smooth_plane_curve(const MultiPoly& F0, std::uint64_t seed, int retries) {
    MultiPoly F = require_ternary_form(F0, "curve");
    const int D = F.total_degree();
    SmoothnessCertificate cert;
    if (D == 1) {
        cert.smooth = true;
        cert.method = "linear";
        return cert;
    }
    for (std::size_t v = 0; v < 3; ++v)
        if (F.partial_derivative(v).is_zero()) {
            cert.method = "zero-partial";
            cert.detail = "dF/d" + F.ring().vars().names[v] + " = 0, the other two partials meet";
            return cert;
        }
    SeededRng rng = SeededRng(seed).split("smooth-shear");
    for (int attempt = 0; attempt < retries; ++attempt) {
        Shear s = next_shear(rng);
        cert.shears.push_back(s);
        MultiPoly H = apply_shear(F, s);
        std::vector<MultiPoly> P;
        bool degenerate = false;
        for (std::size_t v = 0; v < 3; ++v) {
            P.push_back(H.partial_derivative(v));
            if (P.back().is_zero() || leading_z(P.back()) == 0) degenerate = true;
        }
        if (degenerate) continue;
        BinaryForm r12 = resultant_z(P[0], P[1]), r13 = resultant_z(P[0], P[2]);
        if (r12.is_zero() || r13.is_zero()) {
            cert.method = "common-component";
            cert.detail = "two partials share a component, which meets the third";
            return cert;
        }
        bool at_inf = r12.multiplicity_at_infinity() > 0 && r13.multiplicity_at_infinity() > 0;
        if (!at_inf && certainly_coprime(r12.affine, r13.affine)) {
            cert.smooth = true;
            cert.method = "resultant";
            cert.detail = "gcd(Res_z(Fx, Fy), Res_z(Fx, Fz)) = 1";
            return cert;
        }
        break;
    }
    cert.method = "macaulay";
    cert.smooth = partials_generate_in_degree(F);
    cert.detail = std::string("partials ") + (cert.smooth ? "span" : "do not span") + " all forms of degree " +
                  std::to_string(3 * D - 5);
    return cert;
}

TransversalityCertificate is_transversal(const MultiPoly& F1_, const MultiPoly& H_, std::uint64_t seed, int retries) {
    MultiPoly F1 = require_ternary_form(F1_, "first curve");
    MultiPoly H = require_ternary_form(H_, "second curve").to_ring(F1.ring());
    TransversalityCertificate cert;
    cert.bezout = F1.total_degree() * H.total_degree();
    SeededRng rng = SeededRng(seed).split("transversal-shear");
    for (int attempt = 0; attempt < retries; ++attempt) {
        Shear s = next_shear(rng);
        MultiPoly A = apply_shear(F1, s), B = apply_shear(H, s);
        if (leading_z(A) == 0 || leading_z(B) == 0) continue;
        cert.shears.push_back(s);
        BinaryForm R = resultant_z(A, B);
        if (R.is_zero()) throw InputError("the curves share a component");
        cert.resultant = R.affine.str("x");
        if (R.is_squarefree()) {
            cert.transversal = true;
            cert.distinct_points = cert.bezout;
            return cert;
        }
        UPoly rad = R.affine.degree() > 0 ? R.affine / gcd(R.affine, R.affine.derivative()) : R.affine;
        cert.distinct_points = rad.degree() + (R.multiplicity_at_infinity() > 0 ? 1 : 0);
    }
    return cert;
}

std::vector<Point> rational_points(const MultiPoly& F0, long box) {
    MultiPoly F = require_ternary_form(F0, "curve");
    Integer den = 1;
    for (const auto& [m, c] : F.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.rational().get_den_mpz_t());
    std::vector<std::pair<Monomial, Integer>> terms;
    for (const auto& [m, c] : F.terms()) terms.emplace_back(m, Integer(c.rational() * den));
    const int D = F.total_degree();
    const std::size_t width = static_cast<std::size_t>(2 * box + 1);
    std::vector<std::vector<Integer>> pw(width, std::vector<Integer>(static_cast<std::size_t>(D) + 1));
    for (std::size_t i = 0; i < width; ++i) {
        pw[i][0] = 1;
        for (int e = 1; e <= D; ++e)
            pw[i][static_cast<std::size_t>(e)] = pw[i][static_cast<std::size_t>(e) - 1] * (static_cast<long>(i) - box);
    }
    std::vector<Point> out;
    for (long x = -box; x <= box; ++x)
        for (long y = -box; y <= box; ++y)
            for (long z = -box; z <= box; ++z) {
                long first = x != 0 ? x : (y != 0 ? y : z);
                if (first <= 0) continue;
                if (std::gcd(std::gcd(std::labs(x), std::labs(y)), std::labs(z)) != 1) continue;
                Integer s = 0;
                const std::size_t ix = static_cast<std::size_t>(x + box), iy = static_cast<std::size_t>(y + box),
                                  iz = static_cast<std::size_t>(z + box);
                for (const auto& [m, c] : terms)
                    s += c * pw[ix][static_cast<std::size_t>(m[0])] * pw[iy][static_cast<std::size_t>(m[1])] *
                         pw[iz][static_cast<std::size_t>(m[2])];
                if (s == 0) out.push_back({Integer(x), Integer(y), Integer(z)});
            }
    return out;
}

Decomposition carlini_decompose(const MultiPoly& F0, int d1, int d2, const DecomposeOptions& opt) {
    MultiPoly F = require_ternary_form(F0, "F");
    const int D = F.total_degree();
    if (!(1 <= d1 && d1 <= d2 && d2 < D))
        throw InputError("need 1 <= d1 <= d2 < deg F = " + std::to_string(D) + ", got (" + std::to_string(d1) + ", " +
                         std::to_string(d2) + ")");
    if (opt.budget < 1) throw InputError("budget must be positive");
    if (opt.coeff_range < 1) throw InputError("coefficient range must be positive");
    const Ring uv = Ring::make({"u", "v"});
    SeededRng rng = SeededRng(opt.seed).split("decompose");
    std::vector<Point> pts;
    if (d1 <= 2) pts = rational_points(F, opt.coeff_range);
    for (int attempt = 1; attempt <= opt.budget; ++attempt) {
        std::optional<Attempt> a;
        if (d1 == 1 && pts.size() >= 2) {
            if (auto c = line_through(rng, pts, F.ring(), uv))
                a = attempt_on_curve(*c, F, d1, d2, rng, opt.coeff_range, "points-line");
        } else if (d1 == 2 && pts.size() >= 5) {
            if (auto c = conic_through(rng, pts, F.ring(), uv, opt.coeff_range))
                a = attempt_on_curve(*c, F, d1, d2, rng, opt.coeff_range, "points-conic");
        }
        if (!a && !(d1 == 1 && pts.size() >= 2) && !(d1 == 2 && pts.size() >= 5))
            a = attempt_generic(F, d1, d2, rng, opt.coeff_range);
        if (!a) continue;
        Decomposition dec{F, a->F1, a->G1, a->F2, a->G2, d1, d2, attempt, a->strategy, a->used, a->f2r, a->g2r, {}};
        if (!dec.identity_holds()) continue;
        if (opt.require_checks) {
            DecompositionChecks ch;
            std::uint64_t s = rng.next();
            ch.f1_smooth = is_smooth_plane_curve(dec.F1, s);
            try {
                ch.f1_f2 = is_transversal(dec.F1, dec.F2, s).transversal;
                ch.f1_g2 = is_transversal(dec.F1, dec.G2, s).transversal;
                ch.f1_f2g2 = is_transversal(dec.F1, dec.F2 * dec.G2, s).transversal;
            } catch (const InputError&) {
                continue;
            }
            dec.checks = ch;
            if (!ch.all()) continue;
        }
        return dec;
    }
    throw BudgetExhausted("no decomposition with (d1, d2) = (" + std::to_string(d1) + ", " + std::to_string(d2) +
                              ") within budget " + std::to_string(opt.budget),
                          opt.budget);
}

long SplittingType::staircase(int t) const {
    long s = 0;
    for (int ai : a) s += std::max(0, ai + t + 1);
    return s;
}

long expected_staircase(int d, int m, int t) {
    return std::max(0L, static_cast<long>(m) + static_cast<long>(d) * t + 1);
}

SplittingType splitting_type_p1(const MultiPoly& f0, const MultiPoly& f1_, int m) {
    const Ring& r = f0.ring();
    if (r.nvars() != 2) throw InputError("splitting type needs binary forms");
    if (f0.is_zero() || f1_.is_zero() || !f0.is_homogeneous() || !f1_.is_homogeneous())
        throw InputError("f0 and f1 must be nonzero binary forms");
    const MultiPoly f1 = f1_.to_ring(r);
    const int d = f0.total_degree();
    if (f1.total_degree() != d) throw InputError("f0 and f1 must have the same degree");
    if (d < 1) throw InputError("the map must have positive degree");
    for (const auto* f : {&f0, &f1})
        for (const auto& [mm, c] : f->terms())
            if (!c.is_rational()) throw InputError("binary forms must have rational coefficients");
    // homogeneous resultant
    std::vector<Rational> a(static_cast<std::size_t>(d) + 1), b(a.size());
    for (int i = 0; i <= d; ++i) {
        a[static_cast<std::size_t>(i)] = f0.coeff({d - i, i}).rational();
        b[static_cast<std::size_t>(i)] = f1.coeff({d - i, i}).rational();
    }
    std::vector<std::vector<Rational>> s(2 * static_cast<std::size_t>(d),
                                         std::vector<Rational>(2 * static_cast<std::size_t>(d)));
    for (int row = 0; row < d; ++row)
        for (int i = 0; i <= d; ++i) {
            s[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + i)] = a[static_cast<std::size_t>(i)];
            s[static_cast<std::size_t>(d + row)][static_cast<std::size_t>(row + i)] = b[static_cast<std::size_t>(i)];
        }
    if (determinant(s) == 0) throw InputError("f0 and f1 have a common root: the map is not finite");

    SplittingType st{d, m, {}};
    for (int j = 0; j <= 2 * d - 2; ++j) {
        if (((j - m) % d + d) % d != 0) continue;
        const std::size_t dim = static_cast<std::size_t>(j) + 1;
        std::size_t rank = 0;
        if (j >= d) {
            std::map<Monomial, std::size_t> col;
            for (int i = 0; i <= j; ++i) col[Monomial{j - i, i}] = static_cast<std::size_t>(i);
            EchelonBasis eb(Q());
            for (const auto* f : {&f0, &f1})
                for (int i = 0; i <= j - d; ++i) {
                    SparseRow row;
                    for (const auto& [mm, c] : f->terms()) row[col.at(Monomial{mm[0] + j - d - i, mm[1] + i})] = c;
                    eb.insert(std::move(row));
                }
            rank = eb.rank();
        }
        for (std::size_t g = rank; g < dim; ++g) st.a.push_back((m - j) / d);
    }
    std::sort(st.a.rbegin(), st.a.rend());
    if (static_cast<int>(st.a.size()) != d)
        throw MathFailure("found " + std::to_string(st.a.size()) + " generators, expected " + std::to_string(d));
    long sum = std::accumulate(st.a.begin(), st.a.end(), 0L);
    if (sum != m + 1 - d) throw MathFailure("splitting degrees do not sum to m + 1 - d");
    const int lo = -st.a.front() - 2, hi = std::max(-st.a.back() + 1, lo + 9);
    for (int t = lo; t <= hi; ++t)
        if (st.staircase(t) != expected_staircase(d, m, t))
            throw MathFailure("staircase mismatch at twist " + std::to_string(t));
    return st;
}

void CoverDescriptor::validate() const {
    if (n < 1) throw InputError("base dimension must be positive");
    if (d < 1 || k < 1) throw InputError("d and k must be positive");
    if (static_cast<int>(branch.ring().nvars()) != n + 1)
        throw InputError("branch must be a form in n + 1 = " + std::to_string(n + 1) + " variables");
    if (branch.is_zero() || !branch.is_homogeneous()) throw InputError("branch must be a nonzero form");
    if (branch.total_degree() != d * k)
        throw InputError("branch has degree " + std::to_string(branch.total_degree()) +
                         ", expected d*k = " + std::to_string(d * k));
}

LineBundleLedger pushforward_structure(const CoverDescriptor& cov) {
    if (cov.d < 1 || cov.k < 1) throw InputError("d and k must be positive");
    LineBundleLedger l;
    l.symbol = "O";
    for (int j = 0; j < cov.d; ++j) l.summands[-j * cov.k] = 1;
    return l;
}

namespace {

void run_decomposition(PipelineReport& rep, const MultiPoly& F, const DecomposeOptions& opt0) {
    DecomposeOptions opt = opt0;
    opt.require_checks = true;
    auto smooth = is_smooth_plane_curve(F, opt.seed);
    rep.branch_smooth = smooth.smooth;
    rep.trace.push_back("branch " + F.str() + ": " + (smooth.smooth ? "smooth" : "singular") + " (" + smooth.method +
                        ")");
    if (!smooth.smooth) {
        rep.failure = "branch curve is singular";
        return;
    }
    try {
        Decomposition dec = carlini_decompose(F, rep.d1, rep.d2, opt);
        rep.f1_smooth = dec.checks->f1_smooth.smooth;
        rep.transversal = dec.checks->f1_f2 && dec.checks->f1_g2 && dec.checks->f1_f2g2;
        rep.trace.push_back("F = F1 G1 + F2 G2 with deg F1 = " + std::to_string(rep.d1) +
                            ", deg F2 = " + std::to_string(rep.d2) + " after " + std::to_string(dec.attempts) +
                            " attempt(s), " + dec.strategy);
        rep.trace.push_back("F1 = " + dec.F1.str() + " smooth; transversal to F2, G2 and F2 G2");
        if (dec.f2_restricted)
            rep.trace.push_back("map on F1: h = |" + dec.f2_restricted->str() + ", " + dec.g2_restricted->str() + "|");
        rep.decomposition = std::move(dec);
    } catch (const BudgetExhausted& e) {
        rep.failure = std::string(e.what()) + "; the instance may not be generic";
        rep.trace.push_back(rep.failure);
    }
}

void check_cover(const CoverDescriptor& cov) {
    cov.validate();
    if (cov.n != 2) throw InputError("the parity pipelines need a plane branch curve (n = 2)");
    if (cov.d < 2) throw InputError("covering degree must be at least 2");
}

}  // namespace

PipelineReport even_parity_pipeline(const CoverDescriptor& cov, const DecomposeOptions& opt) {
    check_cover(cov);
    if ((cov.d * cov.k) % 2 != 0) throw InputError("d*k is odd; use the odd pipeline");
    PipelineReport rep;
    rep.pipeline = "even";
    rep.d = cov.d;
    rep.k = cov.k;
    rep.p = 2;
    rep.r = cov.d * cov.k / 2;
    rep.d1 = cov.k;
    rep.d2 = cov.d * cov.k / 2;
    rep.trace.push_back("pi_* O_X = " + pushforward_structure(cov).str());
    run_decomposition(rep, require_ternary_form(cov.branch, "branch"), opt);
    if (rep.failure.empty()) {
        const Ring xy = Ring::make({"x", "y"});
        auto st = splitting_type_p1(MultiPoly::variable(xy, 0).pow(static_cast<unsigned>(cov.d)),
                                    MultiPoly::variable(xy, 1).pow(static_cast<unsigned>(cov.d)), cov.d - 1);
        bool trivial = std::all_of(st.a.begin(), st.a.end(), [](int a) { return a == 0; });
        rep.trace.push_back(std::string("f = (x^d : y^d): f_* O(d-1) ") + (trivial ? "is trivial" : "is NOT trivial"));
        rep.ranks = rank_report(cov.d, cov.k);
        if (trivial && rep.f1_smooth && rep.transversal) {
            rep.rank = cov.d;
            rep.ok = true;
            rep.trace.push_back("Ulrich bundle of rank " + std::to_string(cov.d) + " on X");
        }
    }
    return rep;
}

PipelineReport odd_parity_pipeline(const CoverDescriptor& cov, const DecomposeOptions& opt) {
    check_cover(cov);
    if ((cov.d * cov.k) % 2 == 0) throw InputError("d*k is even; use the even pipeline");
    PipelineReport rep;
    rep.pipeline = "odd";
    rep.d = cov.d;
    rep.k = cov.k;
    rep.p = smallest_prime_factor(cov.d * cov.k);
    rep.r = cov.d * cov.k / rep.p;
    rep.d1 = cov.k;
    rep.d2 = static_cast<int>(rep.r);
    rep.trace.push_back("p = " + std::to_string(rep.p) + ", r = d*k/p = " + std::to_string(rep.r));
    rep.trace.push_back("pi_* O_X = " + pushforward_structure(cov).str());
    run_decomposition(rep, require_ternary_form(cov.branch, "branch"), opt);
    rep.ranks = rank_report(cov.d, cov.k);
    const auto& m = rep.ranks->m->proof;
    if (m.chain_break) {
        if (rep.failure.empty()) rep.failure = "m_p undefined: " + m.break_reason;
        rep.trace.push_back("m_p undefined: " + m.break_reason);
    } else {
        rep.trace.push_back("m_" + std::to_string(rep.p) + " = " + m.value().get_str());
        if (rep.failure.empty() && rep.f1_smooth && rep.transversal) {
            rep.rank = rep.ranks->rank_bound;
            rep.ok = true;
            rep.trace.push_back("Ulrich bundle of rank d*m_p = " + rep.rank->get_str() + " on X");
        }
    }
    return rep;
}

nlohmann::json smoothness_to_json(const SmoothnessCertificate& c) {
    nlohmann::json sh = nlohmann::json::array();
    for (const auto& s : c.shears) sh.push_back({s.a.get_str(), s.b.get_str()});
    return {{"smooth", c.smooth}, {"method", c.method}, {"shears", sh}, {"detail", c.detail}};
}

nlohmann::json transversality_to_json(const TransversalityCertificate& c) {
    nlohmann::json sh = nlohmann::json::array();
    for (const auto& s : c.shears) sh.push_back({s.a.get_str(), s.b.get_str()});
    return {{"transversal", c.transversal},
            {"bezout", c.bezout},
            {"distinct_points", c.distinct_points},
            {"shears", sh},
            {"resultant", c.resultant}};
}

nlohmann::json decomposition_to_json(const Decomposition& d) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : d.points) pts.push_back(point_str(p));
    nlohmann::json j{{"F", d.F.str()},
                     {"F1", d.F1.str()},
                     {"G1", d.G1.str()},
                     {"F2", d.F2.str()},
                     {"G2", d.G2.str()},
                     {"d1", d.d1},
                     {"d2", d.d2},
                     {"attempts", d.attempts},
                     {"strategy", d.strategy},
                     {"points", pts},
                     {"identity", d.identity_holds()}};
    if (d.f2_restricted) {
        j["f2_restricted"] = d.f2_restricted->str();
        j["g2_restricted"] = d.g2_restricted->str();
    }
    if (d.checks)
        j["checks"] = {{"f1_smooth", smoothness_to_json(d.checks->f1_smooth)},
                       {"f1_transversal_f2", d.checks->f1_f2},
                       {"f1_transversal_g2", d.checks->f1_g2},
                       {"f1_transversal_f2g2", d.checks->f1_f2g2}};
    return j;
}

nlohmann::json splitting_to_json(const SplittingType& s) {
    nlohmann::json stair = nlohmann::json::array();
    for (int t = -s.a.front() - 2; t <= -s.a.back() + 1; ++t) stair.push_back({{"t", t}, {"h0", s.staircase(t)}});
    long sum = std::accumulate(s.a.begin(), s.a.end(), 0L);
    return {{"d", s.d}, {"m", s.m}, {"degrees", s.a}, {"sum", sum}, {"staircase", stair}};
}

nlohmann::json pipeline_to_json(const PipelineReport& r) {
    nlohmann::json j{{"pipeline", r.pipeline},
                     {"d", r.d},
                     {"k", r.k},
                     {"p", r.p},
                     {"r", r.r},
                     {"d1", r.d1},
                     {"d2", r.d2},
                     {"branch_smooth", r.branch_smooth},
                     {"smooth", r.f1_smooth},
                     {"transversal", r.transversal},
                     {"ok", r.ok},
                     {"trace", r.trace}};
    j["decomposition"] = r.decomposition ? decomposition_to_json(*r.decomposition) : nlohmann::json(nullptr);
    j["rank"] = r.rank ? integer_to_json(*r.rank) : nlohmann::json(nullptr);
    if (r.ranks) j["ranks"] = rank_report_to_json(*r.ranks);
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

}  // namespace ulrich
