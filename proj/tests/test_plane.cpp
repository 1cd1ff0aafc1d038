#include <doctest.h>

#include "gen.hpp"
#include "instances.hpp"
#include "ulrich/errors.hpp"
#include "ulrich/plane.hpp"
#include "ulrich/polyio.hpp"

using namespace ulrich;

namespace {

// Random curve with a singular point at a random rational point: a form
// missing z^D, z^(D-1) x, z^(D-1) y, pulled back along a random integer
// change of coordinates.
MultiPoly singular_curve(SeededRng& rng, const Ring& r, int D) {
    while (true) {
        MultiPoly g = gen::homogeneous(rng, r, D, 12);
        MultiPoly h(r);
        for (const auto& [m, c] : g.terms())
            if (m[2] < D - 1) h += MultiPoly::monomial(r, m, c);
        if (h.is_zero()) continue;
        std::vector<MultiPoly> img;
        for (int i = 0; i < 3; ++i) img.push_back(gen::linear(rng, r, 3));
        std::vector<std::vector<Rational>> M(3, std::vector<Rational>(3));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                Monomial e(3, 0);
                e[j] = 1;
                M[i][j] = img[i].coeff(e).rational();
            }
        if (determinant(M) == 0) continue;
        return h.substitute(img, r);
    }
}

MultiPoly P(const std::string& s) { return parse_poly(s, inst::xyz()); }

}  // namespace

TEST_CASE("resultant_z on small forms") {
    auto R = resultant_z(P("z - x"), P("z - y"));
    CHECK(R.degree == 1);
    CHECK(R.affine == UPoly({Rational(-1), Rational(1)}));
    auto R2 = resultant_z(P("z^2 - x*y"), P("z - x"));
    CHECK(R2.degree == 2);
    CHECK(R2.affine == UPoly({Rational(0), Rational(-1), Rational(1)}));
    CHECK(R2.is_squarefree());
    auto R3 = resultant_z(P("z^2 - y^2"), P("z - x"));
    CHECK(R3.affine == UPoly({Rational(-1), Rational(0), Rational(1)}));
    CHECK_THROWS_AS(resultant_z(P("x*z"), P("z")), InputError);
}

TEST_CASE("property: resultant_z matches a Sylvester determinant at sample points") {
    SeededRng rng(12);
    auto r = inst::xyz();
    for (int trial = 0; trial < 20; ++trial) {
        int df = static_cast<int>(rng.uniform(1, 4)), dg = static_cast<int>(rng.uniform(1, 4));
        MultiPoly F = gen::homogeneous(rng, r, df, 8) + P("z").pow(df);
        MultiPoly G = gen::homogeneous(rng, r, dg, 8) + P("z").pow(dg) * FieldElement(r.field(), 2);
        if (F.coeff({0, 0, df}).is_zero() || G.coeff({0, 0, dg}).is_zero()) continue;
        auto R = resultant_z(F, G);
        CHECK(R.degree == df * dg);
        for (long x0 : {-3L, 5L, 11L}) {
            auto slice = [&](const MultiPoly& H, int deg) {
                std::vector<Rational> c(static_cast<std::size_t>(deg) + 1);
                for (const auto& [m, v] : H.terms()) {
                    Rational p = v.rational();
                    for (int i = 0; i < m[0]; ++i) p *= x0;
                    c[static_cast<std::size_t>(m[2])] += p;
                }
                return c;
            };
            auto a = slice(F, df), b = slice(G, dg);
            const std::size_t n = static_cast<std::size_t>(df + dg);
            std::vector<std::vector<Rational>> S(n, std::vector<Rational>(n));
            for (int i = 0; i < dg; ++i)
                for (int j = 0; j <= df; ++j)
                    S[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] =
                        a[static_cast<std::size_t>(df - j)];
            for (int i = 0; i < df; ++i)
                for (int j = 0; j <= dg; ++j)
                    S[static_cast<std::size_t>(dg + i)][static_cast<std::size_t>(i + j)] =
                        b[static_cast<std::size_t>(dg - j)];
            CHECK(R.affine.eval(Rational(x0)) == determinant(S));
        }
    }
}

TEST_CASE("smoothness on named curves") {
    CHECK(is_smooth_plane_curve(P(inst::legendre(2))).smooth);
    CHECK_FALSE(is_smooth_plane_curve(P("x*y*z")).smooth);
    CHECK(is_smooth_plane_curve(P("y^2 + x*z")).smooth);
    CHECK_FALSE(is_smooth_plane_curve(P("y^2*z - x^3")).smooth);
    CHECK_FALSE(is_smooth_plane_curve(P("y^2*z - x^2*(x + z)")).smooth);
    CHECK(is_smooth_plane_curve(P("x^4 + y^4 + z^4")).smooth);
    auto deg = is_smooth_plane_curve(P("x^2 + y^2"));
    CHECK_FALSE(deg.smooth);
    CHECK(deg.method == "zero-partial");
    CHECK(is_smooth_plane_curve(P("x + 2*y")).smooth);
    CHECK_FALSE(is_smooth_plane_curve(P(inst::legendre(1))).smooth);
    CHECK_FALSE(is_smooth_plane_curve(P(inst::legendre(0))).smooth);
    CHECK_THROWS_AS(is_smooth_plane_curve(P("x^2 + y")), InputError);
}

TEST_CASE("property: smoothness agrees with the rank oracle") {
    SeededRng rng(77);
    auto r = inst::xyz();
    int smooth = 0, singular = 0;
    for (int trial = 0; trial < 40; ++trial) {
        int D = static_cast<int>(rng.uniform(2, 5));
        MultiPoly F = trial % 2 ? singular_curve(rng, r, D) : gen::homogeneous(rng, r, D, 10);
        bool oracle = gen::smooth_oracle(F);
        auto cert = is_smooth_plane_curve(F, static_cast<std::uint64_t>(trial));
        CHECK(cert.smooth == oracle);
        CHECK(partials_generate_in_degree(F) == oracle);
        if (trial % 2) CHECK_FALSE(oracle);
        (oracle ? smooth : singular)++;
    }
    CHECK(smooth > 5);
    CHECK(singular >= 20);
}

TEST_CASE("transversality examples") {
    auto a = is_transversal(P("y"), P("y^2 + x*z"));
    CHECK(a.transversal);
    CHECK(a.bezout == 2);
    CHECK(a.distinct_points == 2);
    auto b = is_transversal(P("z"), P("y^2 + x*z"));  // tangent at (1:0:0)
    CHECK_FALSE(b.transversal);
    CHECK(b.distinct_points == 1);
    CHECK_THROWS_AS(is_transversal(P("x"), P("x*y")), InputError);
    CHECK(is_transversal(P("y"), P(inst::legendre(2))).transversal);
    CHECK_FALSE(is_transversal(P("x"), P(inst::legendre(2))).transversal);  // flex tangent at (0:1:0)
    CHECK(is_transversal(P("x - 3*z"), P(inst::legendre(2))).transversal);
}

TEST_CASE("property: transversal intersections have Bezout many distinct points") {
    SeededRng rng(5);
    auto r = inst::xyz();
    int yes = 0;
    for (int trial = 0; trial < 30; ++trial) {
        MultiPoly A = gen::homogeneous(rng, r, static_cast<int>(rng.uniform(1, 3)), 6);
        MultiPoly B = gen::homogeneous(rng, r, static_cast<int>(rng.uniform(1, 3)), 6);
        try {
            auto c = is_transversal(A, B, static_cast<std::uint64_t>(trial));
            if (c.transversal) {
                ++yes;
                CHECK(c.distinct_points == c.bezout);
            } else {
                CHECK(c.distinct_points <= c.bezout);
            }
        } catch (const InputError&) {
        }
    }
    CHECK(yes > 10);
}

TEST_CASE("rational_points") {
    auto pts = rational_points(P("y^2 + x*z"), 2);
    for (const auto& p : pts) CHECK(p[1] * p[1] + p[0] * p[2] == 0);
    bool has100 = false;
    for (const auto& p : pts) has100 = has100 || (p[0] == 1 && p[1] == 0 && p[2] == 0);
    CHECK(has100);
    CHECK(pts.size() >= 4);
}

TEST_CASE("carlini_decompose: conic, Legendre cubic, preconditions") {
    auto conic = P("y^2 + x*z");
    auto d = carlini_decompose(conic, 1, 1, {3, 32, 9, true});
    CHECK(d.identity_holds());
    CHECK(d.F1.total_degree() == 1);
    CHECK(d.F2.total_degree() == 1);
    CHECK(d.checks->all());
    auto leg = carlini_decompose(P(inst::legendre(2)), 1, 1, {11, 32, 9, true});
    CHECK(leg.identity_holds());
    CHECK(leg.strategy == "points-line");
    CHECK_THROWS_AS(carlini_decompose(P("x*y"), 3, 3), InputError);
    CHECK_THROWS_AS(carlini_decompose(P("x^3"), 2, 1), InputError);
    CHECK_THROWS_AS(carlini_decompose(MultiPoly(inst::xyz()), 1, 1), InputError);
    // generic sampling cannot hit a smooth quartic with (3, 3)
    try {
        carlini_decompose(P("x^4 + y^4 + z^4"), 3, 3, {1, 3, 9, false});
        CHECK(false);
    } catch (const BudgetExhausted& e) {
        CHECK(e.attempts() == 3);
    }
}

TEST_CASE("carlini_decompose: quartics through three points with (1, 2)") {
    auto r = inst::xyz();
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SeededRng rng(seed);
        MultiPoly F(r);
        do {
            F = gen::form_through_points(rng, r, 4, gen::small_points(rng, 3));
        } while (!gen::smooth_oracle(F));
        try {
            auto d = carlini_decompose(F, 1, 2, {seed, 32, 9, true});
            CHECK(d.identity_holds());
            CHECK(d.F2.total_degree() == 2);
            CHECK(d.G2.total_degree() == 2);
            CHECK(d.G1.total_degree() == 3);
            CHECK(d.checks->all());
            CHECK(d.F == F);
            ++ok;
        } catch (const BudgetExhausted&) {
        }
    }
    CHECK(ok >= 9);
}

TEST_CASE("carlini_decompose: conic strategy on a quartic through six points") {
    auto r = inst::xyz();
    SeededRng rng(4);
    MultiPoly F(r);
    do {
        F = gen::form_through_points(rng, r, 4, gen::small_points(rng, 6, 2));
    } while (!gen::smooth_oracle(F));
    auto d = carlini_decompose(F, 2, 2, {9, 32, 9, false});
    CHECK(d.identity_holds());
    CHECK(d.strategy == "points-conic");
    CHECK(d.F1.total_degree() == 2);
    CHECK(d.F2.total_degree() == 2);
}

TEST_CASE("carlini_decompose is deterministic in the seed") {
    auto F = P(inst::legendre(3));
    auto a = carlini_decompose(F, 1, 1, {42, 32, 9, true});
    auto b = carlini_decompose(F, 1, 1, {42, 32, 9, true});
    CHECK(decomposition_to_json(a).dump() == decomposition_to_json(b).dump());
}

TEST_CASE("splitting_type_p1: (x^d, y^d) and O(d-1)") {
    auto xy = Ring::make({"x", "y"});
    auto x = MultiPoly::variable(xy, 0), y = MultiPoly::variable(xy, 1);
    for (int d = 2; d <= 6; ++d) {
        auto st = splitting_type_p1(x.pow(d), y.pow(d), d - 1);
        CHECK(st.a == std::vector<int>(static_cast<std::size_t>(d), 0));
        auto minus = splitting_type_p1(x.pow(d), y.pow(d), -1);
        CHECK(minus.a == std::vector<int>(static_cast<std::size_t>(d), -1));
    }
    auto two = splitting_type_p1(parse_poly("x^2 + y^2", xy), parse_poly("x*y", xy), 0);
    CHECK(two.a == std::vector<int>{0, -1});
    CHECK_THROWS_AS(splitting_type_p1(parse_poly("x*y", xy), parse_poly("x^2 + x*y", xy), 0), InputError);
    CHECK_THROWS_AS(splitting_type_p1(parse_poly("x*y", xy), parse_poly("x^3", xy), 0), InputError);
}

TEST_CASE("property: splitting types match floor((m - i)/d) on random finite maps") {
    auto xy = Ring::make({"x", "y"});
    SeededRng rng(99);
    int finite = 0;
    for (int d = 1; d <= 6; ++d)
        for (int trial = 0; trial < 15; ++trial) {
            MultiPoly f0(xy), f1(xy);
            for (int i = 0; i <= d; ++i) {
                f0 += MultiPoly::monomial(xy, {d - i, i}, FieldElement(xy.field(), gen::small_rational(rng, 4)));
                f1 += MultiPoly::monomial(xy, {d - i, i}, FieldElement(xy.field(), gen::small_rational(rng, 4)));
            }
            if (f0.is_zero() || f1.is_zero()) continue;
            int m = static_cast<int>(rng.uniform(-5, 5));
            try {
                ++finite;
                auto st = splitting_type_p1(f0, f1, m);
                std::vector<int> expect;
                for (int i = 0; i < d; ++i) {
                    int num = m - i;
                    expect.push_back(num >= 0 ? num / d : -((-num + d - 1) / d));
                }
                std::sort(expect.rbegin(), expect.rend());
                CHECK(st.a == expect);
                long sum = 0;
                for (int a : st.a) sum += a;
                CHECK(sum == m + 1 - d);
                for (int t = -5; t < 5; ++t) CHECK(st.staircase(t) == expected_staircase(d, m, t));
            } catch (const InputError&) {
                // common root: not a finite map
                --finite;
            }
        }
    CHECK(finite > 60);
}

TEST_CASE("pushforward_structure") {
    auto r = inst::xyz();
    CHECK(pushforward_structure({2, 2, 1, P("y^2 + x*z")}).str() == "O + O(-1)");
    CHECK(pushforward_structure({2, 3, 1, P("x*y*z")}).str() == "O + O(-1) + O(-2)");
    CHECK(pushforward_structure({2, 1, 1, P("x")}).str() == "O");
    CHECK(pushforward_structure({2, 3, 2, P("x^6 + y^6 + z^6")}).str() == "O + O(-2) + O(-4)");
}

TEST_CASE("even pipeline: double cover branched along a conic") {
    auto rep = even_parity_pipeline({2, 2, 1, P("y^2 + x*z")}, {1, 32, 9, false});
    CHECK(rep.ok);
    CHECK(rep.rank == Integer(2));
    CHECK(rep.decomposition->identity_holds());
    CHECK(pipeline_to_json(rep)["rank"] == 2);
    CHECK_THROWS_AS(even_parity_pipeline({2, 3, 1, P(inst::legendre(2))}), InputError);
    CHECK_THROWS_AS(even_parity_pipeline({2, 2, 1, P("x^3")}), InputError);
}

TEST_CASE("even pipeline: triple cover branched along a sextic through six conic points") {
    auto r = inst::xyz();
    SeededRng rng(8);
    std::vector<gen::Point3> pts{{1, 0, 0}, {0, 0, 1}, {1, 1, 1}, {1, -1, 1}, {1, 2, 4}, {4, 2, 1}};
    MultiPoly F(r);
    do {
        F = gen::form_through_points(rng, r, 6, pts);
    } while (!is_smooth_plane_curve(F).smooth);
    auto rep = even_parity_pipeline({2, 3, 2, F}, {5, 32, 9, false});
    CHECK(rep.d1 == 2);
    CHECK(rep.d2 == 3);
    if (rep.ok) {
        CHECK(rep.rank == Integer(3));
        CHECK(rep.decomposition->identity_holds());
        CHECK(rep.decomposition->checks->all());
    } else {
        CHECK_FALSE(rep.failure.empty());
    }
    MESSAGE("sextic pipeline ok = " << rep.ok);
}

TEST_CASE("odd pipeline: Legendre cubic gives rank 6") {
    for (long lambda : {2L, 3L, -1L}) {
        auto rep = odd_parity_pipeline({2, 3, 1, P(inst::legendre(lambda))}, {7, 32, 9, false});
        CHECK(rep.ok);
        CHECK(rep.p == 3);
        CHECK(rep.rank == Integer(6));
    }
    CHECK_THROWS_AS(odd_parity_pipeline({2, 2, 1, P("y^2 + x*z")}), InputError);
}

TEST_CASE("odd pipeline: degree-9 branch reports its outcome") {
    auto r = inst::xyz();
    auto rep = odd_parity_pipeline({2, 3, 3, P("x^9 + y^9 + z^9")}, {1, 2, 9, false});
    CHECK(rep.p == 3);
    CHECK(rep.r == 3);
    CHECK(rep.ranks->rank_bound == 6);
    if (!rep.ok) CHECK_FALSE(rep.failure.empty());
}
