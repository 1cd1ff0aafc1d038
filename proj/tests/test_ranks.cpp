#include <doctest.h>

#include "ulrich/errors.hpp"
#include "ulrich/ranks.hpp"

using namespace ulrich;

namespace {

// Closed-form oracle for the proof variant along the chain: recomputed
// directly from the definitions with plain integers (values fit below p = 11).
long long m_proof_oracle(long p, long long* primed) {
    if (p == 2) {
        *primed = 2;
        return 1;
    }
    if (p == 3) {
        *primed = 12;
        return 2;
    }
    long long qprimed = 0;
    m_proof_oracle((p - 1) / 2, &qprimed);
    long long m = (p - 1) * qprimed * qprimed;
    *primed = p * m * m;
    return m;
}

}  // namespace

TEST_CASE("m recursion: pinned values") {
    CHECK(m_sequence(2, MVariant::Proof).value() == 1);
    CHECK(m_sequence(3, MVariant::Proof).value() == 2);
    CHECK(m_sequence(3, MVariant::Statement).value() == 2);
    CHECK(m_sequence(5, MVariant::Proof).value() == 16);
    CHECK(m_sequence(7, MVariant::Proof).value() == 864);
    CHECK(m_sequence(5, MVariant::Statement).value() == 4);
    CHECK(m_sequence(7, MVariant::Statement).value() == 24);
    CHECK(m_sequence(5, MVariant::Proof).primed() == 1280);
    CHECK(m_sequence(3, MVariant::Proof).primed() == 12);
}

TEST_CASE("m recursion agrees with an independent closed form") {
    for (long p : {2L, 3L, 5L, 7L}) {
        long long primed = 0;
        long long m = m_proof_oracle(p, &primed);
        auto t = m_sequence(p, MVariant::Proof);
        CHECK(t.value() == Integer(std::to_string(m)));
        CHECK(t.primed() == Integer(std::to_string(primed)));
    }
    // p = 11 -> 5 -> 2 overflows 64 bits at m'_11; check the step rule instead
    auto t = m_sequence(11, MVariant::Proof);
    Integer m5p = m_sequence(5, MVariant::Proof).primed();
    CHECK(t.value() == 10 * m5p * m5p);
    CHECK(t.primed() == 11 * t.value() * t.value());
    CHECK(t.chain == std::vector<long>{11, 5, 2});
}

TEST_CASE("m recursion: written values and divergence") {
    auto c = compare_m_variants(7);
    CHECK(c.divergence == 7);  // first chain prime above the pinned base
    bool saw72 = false;
    for (const auto& w : c.written)
        if (w.p == 7 && w.quantity == "m") {
            saw72 = true;
            CHECK(w.written == 72);
            CHECK(w.formula == 864);
            CHECK_FALSE(w.agrees());
        }
    CHECK(saw72);
    auto c5 = compare_m_variants(5);
    CHECK(c5.divergence == 5);
    for (const auto& w : c5.written) {
        if (w.quantity == "m") CHECK(w.agrees());
        if (w.quantity == "m'") {
            CHECK(w.written == 80);
            CHECK(w.formula == 1280);
        }
    }
    auto j = comparison_to_json(c);
    CHECK(j["proof"]["value"] == 864);
    CHECK(j["statement"]["value"] == 24);
}

TEST_CASE("chain breaks are reported, not extended") {
    auto t = m_sequence(13, MVariant::Proof);
    CHECK(t.chain_break);
    CHECK(t.break_reason.find("6") != std::string::npos);
    CHECK_THROWS_AS(t.value(), InputError);
    CHECK(n_sequence(17).chain_break);
    CHECK_THROWS_AS(m_sequence(9, MVariant::Proof), InputError);
    auto j = trace_to_json(t);
    CHECK(j["chain_break"] == true);
}

TEST_CASE("N recursion") {
    CHECK(n_sequence(2).value() == 2);
    CHECK(n_sequence(3).value() == 5);
    CHECK(n_sequence(5).value() == 17);
    CHECK(n_sequence(7).value() == 41);
    // statement form 1 + 8 N_q agrees with the proof form 1 + 4 N'_q
    for (long p : {5L, 7L, 11L, 23L, 47L}) {
        auto t = n_sequence(p);
        REQUIRE_FALSE(t.chain_break);
        Integer nq = n_sequence((p - 1) / 2).value();
        CHECK(t.value() == 1 + 8 * nq);
        Integer r = t.value() % 8;
        CHECK(r == 1);
        CHECK(t.primed() == 2 * t.value());
    }
}

TEST_CASE("modification ledger: exhaustive small range") {
    for (int d = 2; d <= 8; ++d)
        for (int r = 1; r <= 4; ++r) {
            auto steps = modification_ledger(d, r);
            REQUIRE(steps.size() == static_cast<std::size_t>(2 * (d - 1) + 1));
            const Integer total = d * d * r;
            for (const auto& st : steps) CHECK(st.ledger.rank() == total);
            for (int i = 0; i <= d - 2; ++i) {
                const auto& ker = steps[static_cast<std::size_t>(2 * i + 1)].ledger;
                CHECK(ker.summands == kernel_ledger_formula(d, r, i).summands);
                CHECK(ker.summands.at(-1) == (i + 2) * d * r);
            }
            const auto& last_kernel = steps[steps.size() - 2].ledger;
            CHECK(last_kernel.summands.size() == 1);
            CHECK(last_kernel.summands.at(-1) == d * d * r);
            const auto& e = steps.back();
            CHECK(e.label == "pi_* E");
            CHECK(e.ledger.summands.size() == 1);
            CHECK(e.ledger.summands.at(0) == total);
        }
    CHECK_THROWS_AS(modification_ledger(2, 0), InputError);
    CHECK(modification_ledger(2, 1).back().ledger.str() == "(O)^4");
}

TEST_CASE("pn_rank_bound") {
    CHECK(pn_rank_bound(2, 5, 3) == 15);
    CHECK(pn_rank_bound(3, 2, 2) == 8);
    CHECK(pn_rank_bound(4, 3, 1) == 27);
    CHECK_THROWS_AS(pn_rank_bound(1, 3, 1), InputError);
}

TEST_CASE("rank_report") {
    auto a = rank_report(3, 1);
    CHECK(a.parity == "odd");
    CHECK(a.p == 3);
    CHECK(a.rank_bound == 6);
    CHECK(a.ledger.back().ledger.rank() == 3 * 3 * 2);
    for (int k = 1; k <= 5; ++k) CHECK(rank_report(2, k).rank_bound == 2);
    auto b = rank_report(4, 1);
    CHECK(b.parity == "even");
    CHECK(b.rank_bound == 4);
    auto c = rank_report(5, 1, 3);
    CHECK(c.p == 5);
    CHECK(c.rank_bound == 5 * 16);
    CHECK(*c.rank_bound_statement == 5 * 4);
    CHECK(*c.veronese_size == 125);
    auto j = rank_report_to_json(rank_report(13, 1));
    CHECK(j["rank_bound"].is_null());
    CHECK(rank_report_to_json(a)["m_proof"] == 2);
    CHECK_THROWS_AS(rank_report(1, 1), InputError);
}
