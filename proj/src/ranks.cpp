#include "ulrich/ranks.hpp"

#include <algorithm>
#include <climits>

#include "ulrich/errors.hpp"

namespace ulrich {

namespace {

std::string s(const Integer& z) { return z.get_str(); }

Integer ipow(const Integer& b, unsigned e) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
    return out;
}

}  // namespace

const Integer& RecursionTrace::value() const {
    if (chain_break || steps.empty())
        throw InputError("recursion undefined at p = " + std::to_string(p) + ": " + break_reason);
    return steps.back().value;
}

const Integer& RecursionTrace::primed() const {
    if (chain_break || steps.empty())
        throw InputError("recursion undefined at p = " + std::to_string(p) + ": " + break_reason);
    return steps.back().primed;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

long smallest_prime_factor(long n) {
    if (n < 2) throw InputError("smallest_prime_factor needs n >= 2");
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) return q;
    return n;
}

std::vector<long> recursion_chain(long p, std::string* break_reason) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    std::vector<long> chain{p};
    while (chain.back() > 3) {
        long q = chain.back();
        long next = (q - 1) / 2;
        if (!is_prime(next)) {
            if (break_reason)
                *break_reason = "(" + std::to_string(q) + " - 1)/2 = " + std::to_string(next) + " is not prime";
            return chain;
        }
        chain.push_back(next);
    }
    return chain;
}

RecursionTrace m_sequence(long p, MVariant variant) {
    RecursionTrace t;
    t.p = p;
    t.quantity = "m";
    t.variant = variant == MVariant::Proof ? "proof" : "statement";
    t.chain = recursion_chain(p, &t.break_reason);
    if (!t.break_reason.empty()) {
        t.chain_break = true;
        return t;
    }
    std::map<long, std::pair<Integer, Integer>> val;  // p -> (m, m')
    val[2] = {1, 2};
    t.steps.push_back({2, 1, 2, "m_2 = 1, m'_2 = 2 (base)"});
    std::vector<long> up(t.chain.rbegin(), t.chain.rend());
    if (std::find(up.begin(), up.end(), 3L) != up.end()) {
        Integer m3 = val[2].second, m3p = 3 * m3 * m3;
        val[3] = {m3, m3p};
        t.steps.push_back({3, m3, m3p, "m_3 = m'_2 = 2 (pinned), m'_3 = 3 (m_3)^2 = " + s(m3p)});
    }
    for (long q : up) {
        if (val.count(q)) continue;
        long prev = (q - 1) / 2;
        const Integer& base = variant == MVariant::Proof ? val[prev].second : val[prev].first;
        Integer m = Integer(q - 1) * base * base;
        Integer mp = Integer(q) * m * m;
        val[q] = {m, mp};
        std::string pr = variant == MVariant::Proof ? "m'_" : "m_";
        t.steps.push_back({q, m, mp,
                           "m_" + std::to_string(q) + " = (" + std::to_string(q) + " - 1) (" + pr +
                               std::to_string(prev) + ")^2 = " + std::to_string(q - 1) + " * " + s(base) +
                               "^2 = " + s(m) + ", m'_" + std::to_string(q) + " = " + std::to_string(q) + " (m_" +
                               std::to_string(q) + ")^2 = " + s(mp)});
    }
    return t;
}

RecursionTrace n_sequence(long p) {
    RecursionTrace t;
    t.p = p;
    t.quantity = "N";
    t.chain = recursion_chain(p, &t.break_reason);
    if (!t.break_reason.empty()) {
        t.chain_break = true;
        return t;
    }
    std::map<long, std::pair<Integer, Integer>> val;
    val[2] = {2, 4};
    t.steps.push_back({2, 2, 4, "N_2 = 2, N'_2 = 4 (base)"});
    std::vector<long> up(t.chain.rbegin(), t.chain.rend());
    if (std::find(up.begin(), up.end(), 3L) != up.end()) {
        val[3] = {5, 10};
        t.steps.push_back({3, 5, 10, "N_3 = N'_2 + 1 = 5, N'_3 = 2 N_3 = 10"});
    }
    for (long q : up) {
        if (val.count(q)) continue;
        long prev = (q - 1) / 2;
        Integer n = 1 + 4 * val[prev].second;
        val[q] = {n, 2 * n};
        t.steps.push_back({q, n, 2 * n,
                           "N_" + std::to_string(q) + " = 1 + 4 N'_" + std::to_string(prev) + " = 1 + 4 * " +
                               s(val[prev].second) + " = " + s(n) + ", N'_" + std::to_string(q) + " = " + s(2 * n)});
    }
    return t;
}

std::vector<WrittenValue> written_m_values() {
    auto proof = [](long p) { return m_sequence(p, MVariant::Proof); };
    return {
        {3, "m'", 12, proof(3).primed()},
        {5, "m", 16, proof(5).value()},
        {5, "m'", 5 * 16, proof(5).primed()},
        {7, "m", 6 * 12, proof(7).value()},
    };
}

MComparison compare_m_variants(long p) {
    MComparison c{m_sequence(p, MVariant::Proof), m_sequence(p, MVariant::Statement), std::nullopt, {}};
    if (!c.proof.chain_break) {
        for (std::size_t i = 0; i < c.proof.steps.size(); ++i)
            if (c.proof.steps[i].value != c.statement.steps[i].value) {
                c.divergence = c.proof.steps[i].p;
                break;
            }
        for (const auto& w : written_m_values())
            for (const auto& st : c.proof.steps)
                if (st.p == w.p) c.written.push_back(w);
    }
    return c;
}

Integer LineBundleLedger::rank() const {
    Integer r = 0;
    for (const auto& [j, m] : summands) r += m;
    return r;
}

std::string LineBundleLedger::str() const {
    std::string out;
    for (auto it = summands.rbegin(); it != summands.rend(); ++it) {
        if (it->second == 0) continue;
        if (!out.empty()) out += " + ";
        std::string b;
        if (symbol == "O")
            b = it->first == 0 ? "O" : "O(" + std::to_string(it->first) + ")";
        else
            b = it->first == 0 ? "O" : symbol + "^" + std::to_string(it->first);
        out += it->second == 1 ? b : "(" + b + ")^" + s(it->second);
    }
    return out.empty() ? "0" : out;
}

nlohmann::json integer_to_json(const Integer& z) {
    if (z.fits_slong_p()) return static_cast<long long>(z.get_si());
    return z.get_str();
}

nlohmann::json LineBundleLedger::to_json() const {
    nlohmann::json parts = nlohmann::json::array();
    for (auto it = summands.rbegin(); it != summands.rend(); ++it)
        if (it->second != 0) parts.push_back({{"twist", it->first}, {"multiplicity", integer_to_json(it->second)}});
    return {{"symbol", symbol}, {"summands", parts}, {"rank", integer_to_json(rank())}, {"text", str()}};
}

std::vector<LedgerStep> modification_ledger(int d, const Integer& r) {
    if (d < 2) throw InputError("modification ledger needs d >= 2");
    if (r < 1) throw InputError("modification ledger needs r >= 1");
    const Integer dr = d * r;
    std::vector<LedgerStep> steps;
    LineBundleLedger cur;
    for (int j = 0; j < d; ++j) cur.summands[-j] = dr;
    steps.push_back({"pi_* K_0", cur});
    for (int i = 0; i <= d - 2; ++i) {
        // kernel of K_i -> F^(i+1): the trivial summands become L^-1
        LineBundleLedger ker = cur;
        ker.summands[-1] += ker.summands[0];
        ker.summands.erase(0);
        steps.push_back({"pi_* K'_" + std::to_string(i + 1), ker});
        LineBundleLedger tw;
        for (const auto& [j, m] : ker.summands) tw.summands[j + 1] = m;
        steps.push_back({i + 1 == d - 1 ? "pi_* E" : "pi_* K_" + std::to_string(i + 1), tw});
        cur = tw;
    }
    return steps;
}

LineBundleLedger kernel_ledger_formula(int d, const Integer& r, int i) {
    if (i < 0 || i > d - 2) throw InputError("step index out of range");
    LineBundleLedger l;
    l.summands[-1] = (i + 2) * d * r;
    for (int j = 2; j <= d - i - 1; ++j) l.summands[-j] = d * r;
    return l;
}

Integer pn_rank_bound(int n, int d, const Integer& r) {
    if (n < 2 || d < 2 || r < 1) throw InputError("pn_rank_bound needs n >= 2, d >= 2, r >= 1");
    return r * ipow(d, static_cast<unsigned>(n - 1));
}

RankReport rank_report(int d, int k, std::optional<std::size_t> s) {
    if (d < 2 || k < 1) throw InputError("rank_report needs d >= 2 and k >= 1");
    RankReport rep;
    rep.d = d;
    rep.k = k;
    const long dk = static_cast<long>(d) * k;
    Integer line_rank = 1;
    if (dk % 2 == 0) {
        rep.parity = "even";
        rep.p = 2;
        rep.r = dk / 2;
        rep.rank_bound = d;
    } else {
        rep.parity = "odd";
        rep.p = smallest_prime_factor(dk);
        rep.r = dk / rep.p;
        rep.m = compare_m_variants(rep.p);
        if (!rep.m->proof.chain_break) {
            line_rank = rep.m->proof.value();
            rep.rank_bound = d * line_rank;
            rep.rank_bound_statement = d * rep.m->statement.value();
        }
    }
    if (s) rep.veronese_size = ipow(d, static_cast<unsigned>(*s));
    if (rep.parity == "even" || !rep.m->proof.chain_break) rep.ledger = modification_ledger(d, line_rank);
    return rep;
}

nlohmann::json trace_to_json(const RecursionTrace& t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : t.steps)
        steps.push_back({{"p", st.p},
                         {t.quantity, integer_to_json(st.value)},
                         {t.quantity + "'", integer_to_json(st.primed)},
                         {"rule", st.rule}});
    nlohmann::json j{
        {"p", t.p}, {"quantity", t.quantity}, {"chain", t.chain}, {"steps", steps}, {"chain_break", t.chain_break}};
    if (!t.variant.empty()) j["variant"] = t.variant;
    if (t.chain_break) {
        j["break_reason"] = t.break_reason;
    } else {
        j["value"] = integer_to_json(t.value());
    }
    return j;
}

nlohmann::json comparison_to_json(const MComparison& c) {
    nlohmann::json written = nlohmann::json::array();
    for (const auto& w : c.written)
        written.push_back({{"p", w.p},
                           {"quantity", w.quantity},
                           {"written", integer_to_json(w.written)},
                           {"formula", integer_to_json(w.formula)},
                           {"agrees", w.agrees()}});
    nlohmann::json j{
        {"proof", trace_to_json(c.proof)}, {"statement", trace_to_json(c.statement)}, {"written", written}};
    j["divergence"] = c.divergence ? nlohmann::json(*c.divergence) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json ledger_to_json(const std::vector<LedgerStep>& steps) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& st : steps) {
        nlohmann::json j = st.ledger.to_json();
        j["label"] = st.label;
        out.push_back(j);
    }
    return out;
}

nlohmann::json rank_report_to_json(const RankReport& r) {
    nlohmann::json j{{"d", r.d}, {"k", r.k}, {"parity", r.parity}, {"p", r.p}, {"r", r.r}};
    if (r.parity == "even") {
        j["route"] = "rank-d bundle from a degree-d map of the branch curve's cover to P^1";
    } else {
        j["route"] = "rank d*m_p bundle from the matrix factorization of t^p - F'";
        j["m_proof"] = r.m->proof.chain_break ? nlohmann::json(nullptr) : integer_to_json(r.m->proof.value());
        j["m_statement"] =
            r.m->statement.chain_break ? nlohmann::json(nullptr) : integer_to_json(r.m->statement.value());
        j["m"] = comparison_to_json(*r.m);
        j["n"] = trace_to_json(n_sequence(r.p));
        j["open_expectation_rank"] = r.d;
    }
    bool defined = r.parity == "even" || !r.m->proof.chain_break;
    j["rank_bound"] = defined ? integer_to_json(r.rank_bound) : nlohmann::json(nullptr);
    if (r.rank_bound_statement) j["rank_bound_statement"] = integer_to_json(*r.rank_bound_statement);
    if (r.veronese_size) j["veronese_size"] = integer_to_json(*r.veronese_size);
    j["ledger"] = ledger_to_json(r.ledger);
    return j;
}

}  // namespace ulrich
