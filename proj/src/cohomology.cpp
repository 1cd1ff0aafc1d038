#include "ulrich/cohomology.hpp"

#include <algorithm>

#include "ulrich/errors.hpp"
#include "ulrich/linalg.hpp"
#include "ulrich/rng.hpp"

namespace ulrich {

CokerPresentation make_presentation(const PolyMatrix& alpha, int shift, std::optional<int> dimX) {
    if (!alpha.is_square()) throw InputError("presentation matrix must be square");
    if (shift < 0) throw InputError("presentation shift must be non-negative");
    const Ring& ring = alpha.ring();
    if (ring.nvars() < 2) throw InputError("presentation needs at least two variables");
    for (std::size_t v = 0; v < ring.nvars(); ++v)
        if (ring.vars().weights[v] != 1)
            throw InputError("presentation needs standard grading; '" + ring.vars().names[v] + "' has weight " +
                             std::to_string(ring.vars().weights[v]));
    for (std::size_t i = 0; i < alpha.rows(); ++i)
        for (std::size_t j = 0; j < alpha.cols(); ++j) {
            const MultiPoly& e = alpha(i, j);
            if (e.is_zero()) continue;
            if (!e.is_homogeneous() || e.weighted_degree() != shift)
                throw InputError("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") = " + e.str() +
                                 " is not homogeneous of degree " + std::to_string(shift));
        }
    CokerPresentation p{alpha, alpha.rows(), ring.nvars(), shift, 0};
    p.dimX = dimX ? *dimX : p.ambient() - 1;
    if (p.dimX < 0 || p.dimX > p.ambient()) throw InputError("support dimension out of range");
    return p;
}

namespace {

long long binom(long long n, long long k) {
    if (k < 0 || n < k) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    if (!r.fits_slong_p()) throw InputError("cohomology dimension too large");
    return r.get_si();
}

std::map<Monomial, std::size_t> index_monomials(std::size_t nvars, int deg) {
    std::map<Monomial, std::size_t> idx;
    for (const auto& m : monomials_of_degree(nvars, deg)) idx.emplace(m, idx.size());
    return idx;
}

FieldElement det_at(const PolyMatrix& a, const std::vector<Rational>& pt) {
    const std::size_t n = a.rows();
    const CyclotomicField& f = a.ring().field();
    std::vector<std::vector<FieldElement>> m(n, std::vector<FieldElement>(n, FieldElement(f, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j).evaluate(pt);
    FieldElement det(f, 1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t s = c;
        while (s < n && m[s][c].is_zero()) ++s;
        if (s == n) return FieldElement(f, 0);
        if (s != c) {
            std::swap(m[s], m[c]);
            det = -det;
        }
        det *= m[c][c];
        FieldElement inv = m[c][c].inverse();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            FieldElement k = m[r][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[r][j] -= k * m[c][j];
        }
    }
    return det;
}

}  // namespace

long long line_cohomology(int N, int i, int j) {
    if (N < 1) throw InputError("projective dimension must be at least 1");
    if (i == 0) return j >= 0 ? binom(N + j, N) : 0;
    if (i == N) return j <= -N - 1 ? binom(-j - 1, N) : 0;
    return 0;
}

std::size_t graded_rank(const PolyMatrix& alpha, int t, int shift) {
    const int src = t - shift;
    if (src < 0 || t < 0) return 0;
    const std::size_t n = alpha.ring().nvars();
    auto target = index_monomials(n, t);
    const std::size_t block = target.size();
    EchelonBasis basis(alpha.ring().field());
    for (std::size_t k = 0; k < alpha.cols(); ++k)
        for (const auto& mu : monomials_of_degree(n, src)) {
            SparseRow col;
            for (std::size_t i = 0; i < alpha.rows(); ++i)
                for (const auto& [nu, c] : alpha(i, k).terms()) {
                    Monomial w = mu;
                    for (std::size_t v = 0; v < n; ++v) w[v] += nu[v];
                    auto it = target.find(w);
                    if (it == target.end()) throw InputError("presentation entries have the wrong degree");
                    const std::size_t key = i * block + it->second;
                    auto [pos, fresh] = col.emplace(key, c);
                    if (!fresh) pos->second += c;
                }
            basis.insert(std::move(col));
        }
    return basis.rank();
}

std::size_t top_graded_rank(const PolyMatrix& alpha, int t, int shift) {
    const std::size_t n = alpha.ring().nvars();
    const int N = static_cast<int>(n) - 1;
    const int src_size = -(t - shift) - N - 1;  // |b| for the domain basis
    const int dst_size = -t - N - 1;
    if (src_size < 0 || dst_size < 0) return 0;
    auto target = index_monomials(n, dst_size);
    const std::size_t block = target.size();
    EchelonBasis basis(alpha.ring().field());
    for (std::size_t k = 0; k < alpha.cols(); ++k)
        for (const auto& b : monomials_of_degree(n, src_size)) {
            SparseRow col;
            for (std::size_t i = 0; i < alpha.rows(); ++i)
                for (const auto& [a, c] : alpha(i, k).terms()) {
                    Monomial w = b;
                    bool alive = true;
                    for (std::size_t v = 0; v < n && alive; ++v) {
                        w[v] -= a[v];
                        alive = w[v] >= 0;
                    }
                    if (!alive) continue;
                    auto it = target.find(w);
                    if (it == target.end()) throw InputError("presentation entries have the wrong degree");
                    const std::size_t key = i * block + it->second;
                    auto [pos, fresh] = col.emplace(key, c);
                    if (!fresh) pos->second += c;
                }
            basis.insert(std::move(col));
        }
    return basis.rank();
}

bool is_injective(const PolyMatrix& alpha, int shift) {
    // A nonzero determinant at one point proves det != 0.
    SeededRng rng(0x1f2e3d4c5b6a7988ULL);
    const std::size_t n = alpha.ring().nvars();
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<Rational> pt(n);
        for (auto& x : pt) x = Rational(static_cast<long>(rng.uniform(-50, 50)));
        if (!det_at(alpha, pt).is_zero()) return true;
    }
    // det vanishes at every sample: decide exactly. If det = 0, a kernel vector
    // with entries of degree <= (m-1)*shift exists, visible at twist m*shift.
    const int t = static_cast<int>(alpha.rows()) * std::max(shift, 1);
    const long long dom = static_cast<long long>(alpha.rows()) * line_cohomology(static_cast<int>(n) - 1, 0, t - shift);
    return static_cast<long long>(graded_rank(alpha, t, shift)) == dom;
}

long long CohomologyTable::at(int i, int t) const {
    auto it = h.find({i, t});
    if (it == h.end())
        throw InputError("cohomology table has no entry for (" + std::to_string(i) + ", " + std::to_string(t) + ")");
    return it->second;
}

bool CohomologyTable::euler_identity_holds(int shift) const {
    const long long mm = static_cast<long long>(m);
    auto chi = [&](int j) {
        long long v = line_cohomology(ambient, 0, j);
        long long top = line_cohomology(ambient, ambient, j);
        return ambient % 2 == 0 ? v + top : v - top;
    };
    for (int t = t_min; t <= t_max; ++t) {
        long long sum = 0;
        for (int i = 0; i <= ambient; ++i) sum += (i % 2 == 0 ? 1 : -1) * at(i, t);
        if (sum != mm * (chi(t) - chi(t - shift))) return false;
    }
    return true;
}

CohomologyTable coker_cohomology_table(const CokerPresentation& pres, int t_min, int t_max) {
    if (t_min > t_max) throw InputError("empty twist range");
    const int A = pres.ambient();
    const long long m = static_cast<long long>(pres.m);
    CohomologyTable table{A, pres.m, t_min, t_max, {}};
    for (int t = t_min; t <= t_max; ++t) {
        const long long r0 = static_cast<long long>(graded_rank(pres.alpha, t, pres.shift));
        const long long rA = static_cast<long long>(top_graded_rank(pres.alpha, t, pres.shift));
        const long long h0 = m * line_cohomology(A, 0, t) - r0;
        const long long kerA = m * line_cohomology(A, A, t - pres.shift) - rA;
        const long long cokA = m * line_cohomology(A, A, t) - rA;
        for (int i = 0; i <= A; ++i) table.h[{i, t}] = 0;
        if (A == 1) {
            table.h[{0, t}] = h0 + kerA;
        } else {
            table.h[{0, t}] = h0;
            table.h[{A - 1, t}] = kerA;
        }
        table.h[{A, t}] = cokA;
    }
    return table;
}

UlrichCertificate certify_ulrich(const CokerPresentation& pres, std::optional<std::pair<int, int>> window) {
    const int k = pres.dimX;
    const int A = pres.ambient();
    UlrichCertificate cert;
    cert.window = window ? *window : std::make_pair(-k - 3, 3);
    const int lo = std::min(cert.window.first, -A - 1);
    const int hi = std::max(cert.window.second, 1);
    cert.table = coker_cohomology_table(pres, lo, hi);
    cert.injective = is_injective(pres.alpha, pres.shift);
    cert.euler = cert.table.euler_identity_holds(pres.shift);
    const auto& tab = cert.table;
    auto fail = [&](const std::string& s) { cert.failures.push_back(s); };
    auto hname = [](int i, int t) { return "h^" + std::to_string(i) + "(G(" + std::to_string(t) + "))"; };

    if (!cert.injective) fail("presentation is not injective (det = 0); the table does not describe coker");
    if (!cert.euler) fail("Euler characteristic identity fails");

    bool d2 = true;
    for (int i = 1; i <= A; ++i)
        if (tab.at(i, -i) != 0) {
            d2 = false;
            fail("D2: " + hname(i, -i) + " = " + std::to_string(tab.at(i, -i)));
        }
    for (int i = 0; i < k; ++i)
        if (tab.at(i, -i - 1) != 0) {
            d2 = false;
            fail("D2: " + hname(i, -i - 1) + " = " + std::to_string(tab.at(i, -i - 1)));
        }
    bool d1 = true;
    for (int t = cert.window.first; t <= cert.window.second; ++t) {
        for (int i = 1; i <= k - 1; ++i)
            if (tab.at(i, t) != 0) {
                d1 = false;
                fail("D1: " + hname(i, t) + " = " + std::to_string(tab.at(i, t)));
            }
        if (t < 0 && tab.at(0, t) != 0) {
            d1 = false;
            fail("D1: " + hname(0, t) + " = " + std::to_string(tab.at(0, t)));
        }
        if (t >= -k && tab.at(k, t) != 0) {
            d1 = false;
            fail("D1: " + hname(k, t) + " = " + std::to_string(tab.at(k, t)));
        }
    }
    cert.d1 = d1 && cert.injective;
    cert.d2 = d2 && cert.injective;
    return cert;
}

PushforwardCheck check_pushforward_trivial(const CokerPresentation& pres) {
    UlrichCertificate cert = certify_ulrich(pres);
    PushforwardCheck r;
    r.rank = pres.m;
    r.h0 = cert.table.at(0, 0);
    r.trivial = cert.injective && cert.d2 && r.h0 == static_cast<long long>(pres.m);
    return r;
}

nlohmann::json table_to_json(const CohomologyTable& table, const UlrichCertificate* cert) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [key, h] : table.h) rows.push_back({{"i", key.first}, {"t", key.second}, {"h", h}});
    nlohmann::json j{{"ambient", table.ambient}, {"m", table.m}, {"rows", rows}};
    if (cert) {
        j["D1"] = cert->d1;
        j["D2"] = cert->d2;
        j["window"] = {cert->window.first, cert->window.second};
        j["injective"] = cert->injective;
        j["euler"] = cert->euler;
        j["failures"] = cert->failures;
    } else {
        j["window"] = {table.t_min, table.t_max};
    }
    return j;
}

}  // namespace ulrich
