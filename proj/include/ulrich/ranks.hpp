#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ulrich/upoly.hpp"

namespace ulrich {

enum class MVariant { Proof, Statement };

// One prime of a recursion chain with the values computed there.
struct RecursionStep {
    long p = 0;
    Integer value;   // m_p or N_p
    Integer primed;  // m'_p or N'_p
    std::string rule;
};

struct RecursionTrace {
    long p = 0;
    std::string quantity;              // "m" or "N"
    std::string variant;               // "proof", "statement" or "" for N
    std::vector<long> chain;           // p, (p-1)/2, ... down to the base
    std::vector<RecursionStep> steps;  // base first, p last
    bool chain_break = false;
    std::string break_reason;

    const Integer& value() const;  // throws InputError on a broken chain
    const Integer& primed() const;
};

bool is_prime(long n);
long smallest_prime_factor(long n);

// Primes from p down to the base 2 or 3, following q -> (q-1)/2. On a
// non-prime step the trace is returned with chain_break set.
std::vector<long> recursion_chain(long p, std::string* break_reason = nullptr);

// m_2 = 1, m'_2 = 2, m_3 = 2 (pinned); then
//   proof:     m_p = (p-1) (m'_q)^2,  statement: m_p = (p-1) (m_q)^2,
// with q = (p-1)/2 and m'_p = p (m_p)^2 in both.
RecursionTrace m_sequence(long p, MVariant variant);

// N_2 = 2, N'_2 = 4, N_3 = N'_2 + 1 = 5; then N_p = 1 + 4 N'_q, N'_p = 2 N_p.
RecursionTrace n_sequence(long p);

// A reference value for the recursion next to what the formula gives.
struct WrittenValue {
    long p;
    std::string quantity;
    Integer written;
    Integer formula;
    bool agrees() const { return written == formula; }
};

struct MComparison {
    RecursionTrace proof;
    RecursionTrace statement;
    std::optional<long> divergence;  // first prime where the variants differ
    std::vector<WrittenValue> written;
};

MComparison compare_m_variants(long p);
// Reference values at p in {3, 5, 7}; some disagree with the formula.
std::vector<WrittenValue> written_m_values();

// Twists of a symbol ("O" on the base, or "L") with multiplicities.
struct LineBundleLedger {
    std::string symbol = "L";
    std::map<int, Integer> summands;  // twist -> multiplicity

    Integer rank() const;
    std::string str() const;
    nlohmann::json to_json() const;
};

struct LedgerStep {
    std::string label;
    LineBundleLedger ledger;
};

// Replays the modification steps for an Ulrich rank-r bundle on the branch
// cover of a degree-d cyclic covering: each kernel moves the trivial part to
// L^-1, and each twist by L shifts everything up by one.
std::vector<LedgerStep> modification_ledger(int d, const Integer& r);

// Closed forms of the same ledgers, used as a cross-check.
LineBundleLedger kernel_ledger_formula(int d, const Integer& r, int i);  // pi_* K'_{i+1}

Integer pn_rank_bound(int n, int d, const Integer& r);

struct RankReport {
    int d = 0, k = 0;
    std::string parity;
    long p = 0;
    long r = 0;                    // d k / p
    std::optional<MComparison> m;  // odd route only
    Integer rank_bound;
    std::optional<Integer> rank_bound_statement;
    std::optional<Integer> veronese_size;  // d^s when s is given
    std::vector<LedgerStep> ledger;
};

RankReport rank_report(int d, int k, std::optional<std::size_t> s = std::nullopt);

nlohmann::json integer_to_json(const Integer& z);
nlohmann::json trace_to_json(const RecursionTrace& t);
nlohmann::json comparison_to_json(const MComparison& c);
nlohmann::json ledger_to_json(const std::vector<LedgerStep>& steps);
nlohmann::json rank_report_to_json(const RankReport& r);

}  // namespace ulrich
