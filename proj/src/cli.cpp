#include "ulrich/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ulrich/cohomology.hpp"
#include "ulrich/errors.hpp"
#include "ulrich/matfac.hpp"
#include "ulrich/plane.hpp"
#include "ulrich/polyio.hpp"
#include "ulrich/ranks.hpp"
#include "ulrich/veronese.hpp"

namespace ulrich {
namespace {

using nlohmann::json;

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Outcome {
    json inputs = json::object();
    json result = json::object();
    std::vector<Check> checks;
    std::vector<std::string> lines;
    int code = -1;  // -1: 0 when every check passes, else 2
};

struct Common {
    bool json_out = false;
    std::optional<std::uint64_t> seed;
    std::string out_file;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_flag("--json", c.json_out, "Print the certificate as JSON");
    sub->add_option("--seed", c.seed, "Random seed (default: $ULRICH_SEED, else 1)");
    sub->add_option("--out", c.out_file, "Also write the certificate JSON to this file");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& s) {
    if (s) return *s;
    if (const char* env = std::getenv("ULRICH_SEED"); env && *env) {
        std::string v(env);
        std::uint64_t x = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size())
            throw InputError("ULRICH_SEED must be a non-negative integer, got '" + v + "'");
        return x;
    }
    return 1;
}

template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InputError& e) {
        throw InputError(stage + ": " + e.what());
    } catch (const BudgetExhausted& e) {
        throw BudgetExhausted(stage + ": " + e.what(), e.attempts());
    } catch (const MathFailure& e) {
        throw MathFailure(stage + ": " + e.what());
    }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

Ring ring_for(const std::vector<std::string>& vars, const std::vector<std::string>& defaults) {
    return Ring::make(vars.empty() ? defaults : vars);
}

MultiPoly parse_form(const std::string& text, const Ring& ring, const std::string& what) {
    MultiPoly f = parse_poly(text, ring);
    if (f.is_zero() || !f.is_homogeneous()) throw InputError(what + " must be a nonzero homogeneous polynomial");
    return f;
}

json checks_json(const std::vector<Check>& checks) {
    json a = json::array();
    for (const auto& c : checks) {
        json j{{"name", c.name}, {"pass", c.pass}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        a.push_back(j);
    }
    return a;
}

json certificate(const std::string& command, std::uint64_t seed, const Outcome& o) {
    return {{"version", kCertificateVersion},
            {"command", command},
            {"inputs", o.inputs},
            {"seed", seed},
            {"result", o.result},
            {"checks", checks_json(o.checks)}};
}

int emit(const std::string& command, std::uint64_t seed, const Outcome& o, const Common& c, std::ostream& out) {
    const json cert = certificate(command, seed, o);
    if (!c.out_file.empty()) {
        std::ofstream f(c.out_file);
        f << cert.dump(2) << '\n';
        if (!f) throw InputError("cannot write '" + c.out_file + "'");
    }
    if (c.json_out) {
        out << cert.dump(2) << '\n';
    } else {
        for (const auto& l : o.lines) out << l << '\n';
        for (const auto& ch : o.checks)
            out << (ch.pass ? "ok   " : "FAIL ") << ch.name << (ch.detail.empty() ? "" : ": " + ch.detail) << '\n';
    }
    if (o.code >= 0) return o.code;
    bool all = std::all_of(o.checks.begin(), o.checks.end(), [](const Check& ch) { return ch.pass; });
    return all ? 0 : 2;
}

void check_mf(const MatrixFactorization& mf, Outcome& o, bool rotations) {
    auto rep = verify_mf(mf);
    o.checks.push_back({"product_identity", rep.ok, rep.detail});
    if (!rotations || !rep.ok) return;
    MatrixFactorization v = mf;
    v.verified = true;
    for (std::size_t k = 1; k < mf.length(); ++k) {
        bool ok = false;
        try {
            ok = verify_mf(rotate_mf(v, static_cast<long>(k))).ok;
        } catch (const MathFailure&) {
        }
        o.checks.push_back({"rotation_" + std::to_string(k), ok, ""});
    }
}

// Cohomological Ulrich certificate of coker(factor) for every factor.
json certify_factors(const MatrixFactorization& mf, std::optional<int> dimX, std::optional<std::pair<int, int>> window,
                     Outcome& o) {
    json out = json::array();
    for (std::size_t i = 0; i < mf.length(); ++i) {
        auto pres = mf_to_coker_presentation(mf.factors[i], dimX);
        auto cert = certify_ulrich(pres, window);
        const long long h0 = cert.table.at(0, 0);
        const bool trivial = cert.injective && cert.d2 && h0 == static_cast<long long>(pres.m);
        json j = table_to_json(cert.table, &cert);
        j["factor"] = i + 1;
        j["dimX"] = pres.dimX;
        j["h0"] = h0;
        j["pushforward_trivial"] = trivial;
        j["pushforward_rank"] = pres.m;
        out.push_back(j);
        const std::string tag = "factor_" + std::to_string(i + 1);
        o.checks.push_back({tag + "_ulrich", cert.injective && cert.d1 && cert.d2, join(cert.failures, "; ")});
        o.checks.push_back({tag + "_euler", cert.euler, ""});
        o.checks.push_back({tag + "_pushforward_trivial", trivial, "h0 = " + std::to_string(h0)});
        std::ostringstream line;
        line << "factor " << i + 1 << ": coker on P^" << pres.ambient() << ", dimX " << pres.dimX << ", D1 on ["
             << cert.window.first << ", " << cert.window.second << "] " << (cert.d1 ? "holds" : "fails") << ", D2 "
             << (cert.d2 ? "holds" : "fails") << ", h0 = " << h0;
        o.lines.push_back(line.str());
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot read '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

bool is_certificate(const json& j) {
    return j.is_object() && j.contains("command") && j.contains("result") && j.contains("inputs");
}

// MF payload of a bare factorization file or of a certificate carrying one.
std::optional<MatrixFactorization> mf_in(const json& j) {
    if (is_certificate(j)) {
        const auto& r = j.at("result");
        if (r.is_object() && r.contains("mf")) return mf_from_json(r.at("mf"));
        return std::nullopt;
    }
    return mf_from_json(j);
}

std::vector<std::string> args_from_inputs(const std::string& command, const json& inputs, std::uint64_t seed) {
    if (!inputs.is_object()) throw InputError("certificate \"inputs\" must be an object");
    std::vector<std::string> args{command};
    for (const auto& [k, v] : inputs.items()) {
        if (v.is_null()) continue;
        if (k == "file") {
            args.push_back(v.get<std::string>());
        } else if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back("--" + k);
        } else if (v.is_array()) {
            if (v.empty()) continue;
            std::vector<std::string> parts;
            for (const auto& e : v) parts.push_back(e.is_string() ? e.get<std::string>() : e.dump());
            args.push_back("--" + k);
            args.push_back(join(parts, ","));
        } else {
            args.push_back("--" + k);
            args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
    }
    args.insert(args.end(), {"--seed", std::to_string(seed), "--json"});
    return args;
}

// ---- factorize

struct FactorizeOpts {
    std::string poly;
    std::string method = "auto";
    std::optional<int> d;
    std::vector<std::string> vars;
};

Outcome cmd_factorize(const FactorizeOpts& a) {
    Outcome o;
    o.inputs = {{"poly", a.poly}, {"method", a.method}, {"d", a.d ? json(*a.d) : json()}, {"vars", a.vars}};
    std::vector<std::string> names = a.vars;
    if (names.empty()) {
        names = scan_variables(a.poly);
        std::sort(names.begin(), names.end());
        auto it = std::find(names.begin(), names.end(), "t");
        if (it != names.end()) std::rotate(names.begin(), it, it + 1);
    }
    if (names.empty()) throw InputError("polynomial has no variables");
    const Ring ring = Ring::make(names);
    const MultiPoly f = parse_form(a.poly, ring, "polynomial");
    const int deg = f.weighted_degree();

    // f = t^d - g with g free of t
    std::optional<MultiPoly> g;
    std::optional<Ring> base;
    if (auto ti = ring.vars().index_of("t"); ti && f.involves(*ti) && ring.nvars() > 1) {
        const MultiPoly td = MultiPoly::variable(ring, *ti).pow(static_cast<unsigned>(f.degree_in(*ti)));
        MultiPoly rest = td - f;
        if (!rest.involves(*ti) && !rest.is_zero() && f.degree_in(*ti) == deg) {
            std::vector<std::string> bn;
            std::vector<MultiPoly> images;
            for (const auto& n : names)
                if (n != "t") bn.push_back(n);
            base = Ring::make(bn);
            for (const auto& n : names) images.push_back(n == "t" ? MultiPoly(*base) : MultiPoly::variable(*base, n));
            g = rest.substitute(images, *base);
        }
    }
    const int d = a.d.value_or(deg);
    if (d < 1) throw InputError("--d must be positive");
    if (g && d < 2) throw InputError("t^d - g needs d >= 2");
    if (deg != d)
        throw MathFailure(f.str() + " has degree " + std::to_string(deg) + " and is not expressible as a sum of " +
                          "products of " + std::to_string(d) + " linear forms");
    const unsigned ud = static_cast<unsigned>(d);
    const std::string& m = a.method;
    if (m != "auto" && m != "cyclic" && m != "clifford" && m != "tensor")
        throw InputError("unknown method '" + m + "' (auto, cyclic, clifford, tensor)");
    if (m == "clifford" && d != 2) throw InputError("the clifford method needs d = 2");
    if (m == "tensor" && d < 3) throw InputError("the tensor method needs d >= 3");

    const std::string form = g ? "t^d - g" : "sum of products";
    const MatrixFactorization mf = [&] {
        if (g && m == "auto") return build_cover_mf(static_cast<int>(base->nvars()) - 1, 1, ud, *g).mf;
        auto summands = sum_of_products_presentation(g ? *g : f, ud);
        if (m == "cyclic" && summands.size() != 1) throw InputError("the cyclic method needs a single product");
        if (!g) return m == "cyclic" ? mf_from_linear_product(summands.front()) : herzog_sum_mf(summands, ud).mf;
        MatrixRoot root = m == "cyclic" ? cyclic_root(summands.front()) : root_of_sum(summands, ud);
        return split_t_power(root, "t");
    }();
    check_mf(mf, o, true);
    o.checks.push_back({"target_matches_input", f.to_ring(mf.target.ring()) == mf.target, ""});
    o.result = {{"form", form},      {"method", m},           {"d", d},
                {"size", mf.size()}, {"length", mf.length()}, {"construction", mf.construction},
                {"target", f.str()}, {"mf", mf_to_json(mf)}};
    o.lines.push_back("factorization of " + f.str() + ": length " + std::to_string(mf.length()) + ", size " +
                      std::to_string(mf.size()) + " (" + mf.construction + ")");
    return o;
}

// ---- verify / certify

int run_verify(const std::string& file, bool rerun, const Common& c, std::ostream& out) {
    Outcome o;
    o.inputs = {{"file", file}, {"no-rerun", !rerun}};
    const json j = read_json_file(file);
    const bool cert = is_certificate(j);
    std::optional<MatrixFactorization> mf;
    try {
        mf = mf_in(j);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed certificate: ") + e.what());
    }
    if (!cert && !mf) throw InputError("file is neither a factorization nor a certificate");
    if (mf) {
        auto rep = verify_mf(*mf);
        json loc = json();
        if (rep.first_failure) loc = {rep.first_failure->first, rep.first_failure->second};
        o.result["product_identity"] = rep.ok;
        o.result["entry"] = loc;
        o.result["size"] = mf->size();
        o.result["length"] = mf->length();
        o.checks.push_back({"product_identity", rep.ok, rep.detail});
        o.lines.push_back(std::string(rep.ok ? "verified" : "NOT verified") + ": " + std::to_string(mf->length()) +
                          " factors of size " + std::to_string(mf->size()));
    }
    if (cert && rerun) {
        std::string command;
        std::uint64_t seed = 0;
        try {
            command = j.at("command").get<std::string>();
            seed = j.at("seed").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw InputError(std::string("malformed certificate: ") + e.what());
        }
        if (command != "verify") {
            std::ostringstream o2, e2;
            const int rc = run_cli(args_from_inputs(command, j.at("inputs"), seed), o2, e2);
            bool same = false;
            std::string detail;
            if (rc == 1 || rc == 3 || o2.str().empty()) {
                detail = "re-run failed with exit " + std::to_string(rc) + ": " + e2.str();
            } else {
                json again = json::parse(o2.str());
                same = again.at("result").dump() == j.at("result").dump() &&
                       again.at("checks").dump() == j.at("checks").dump();
                if (!same)
                    detail =
                        "re-running '" + command + "' with seed " + std::to_string(seed) + " gives a different payload";
            }
            if (!detail.empty() && detail.back() == '\n') detail.pop_back();
            o.result["reproduced"] = same;
            o.checks.push_back({"reproduces", same, detail});
            o.lines.push_back(std::string(same ? "reproduced" : "NOT reproduced") + ": " + command + " with seed " +
                              std::to_string(seed));
        }
    }
    return emit("verify", resolve_seed(c.seed), o, c, out);
}

struct CertifyOpts {
    std::string file;
    std::optional<int> dimX;
    std::vector<int> window;
};

Outcome cmd_certify(const CertifyOpts& a) {
    Outcome o;
    o.inputs = {{"file", a.file}, {"dimX", a.dimX ? json(*a.dimX) : json()}, {"window", a.window}};
    std::optional<std::pair<int, int>> window;
    if (!a.window.empty()) {
        if (a.window.size() != 2 || a.window[0] > a.window[1]) throw InputError("--window needs lo,hi with lo <= hi");
        window = std::make_pair(a.window[0], a.window[1]);
    }
    const json j = read_json_file(a.file);
    std::optional<MatrixFactorization> mf;
    try {
        mf = mf_in(j);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed certificate: ") + e.what());
    }
    if (!mf) throw InputError("file carries no factorization");
    auto rep = verify_mf(*mf);
    o.checks.push_back({"product_identity", rep.ok, rep.detail});
    if (!rep.ok) {
        o.lines.push_back("factorization does not verify; cokernels not certified");
        return o;
    }
    o.result["factors"] = certify_factors(*mf, a.dimX, window, o);
    o.result["size"] = mf->size();
    o.result["length"] = mf->length();
    return o;
}

// ---- pipeline

struct PipelineOpts {
    int n = 2, k = 1, d = 2;
    std::string branch;
    std::vector<std::string> vars;
    std::string parity;
    std::size_t max_size = 128;
    int budget = 32;
    long coeff_range = 9;
};

std::vector<std::string> default_vars(int n) {
    if (n == 1) return {"x", "y"};
    if (n == 2) return {"x", "y", "z"};
    if (n == 3) return {"x", "y", "z", "w"};
    std::vector<std::string> v;
    for (int i = 0; i <= n; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

Outcome cmd_pipeline(const PipelineOpts& a, std::uint64_t seed) {
    Outcome o;
    o.inputs = {{"n", a.n},
                {"k", a.k},
                {"d", a.d},
                {"branch", a.branch},
                {"vars", a.vars},
                {"parity", a.parity.empty() ? json() : json(a.parity)},
                {"max-size", a.max_size},
                {"budget", a.budget},
                {"coeff-range", a.coeff_range}};
    if (a.n < 1) throw InputError("--n must be positive");
    const Ring ring = staged("parse", [&] { return ring_for(a.vars, default_vars(a.n)); });
    const MultiPoly g = staged("parse", [&] { return parse_form(a.branch, ring, "branch"); });

    if (!a.parity.empty()) {
        if (a.parity != "even" && a.parity != "odd") throw InputError("--parity must be even or odd");
        CoverDescriptor cov{a.n, a.d, a.k, g};
        DecomposeOptions opt{seed, a.budget, a.coeff_range, true};
        PipelineReport rep = staged("cover", [&] {
            cov.validate();
            return a.parity == "even" ? even_parity_pipeline(cov, opt) : odd_parity_pipeline(cov, opt);
        });
        o.result = pipeline_to_json(rep);
        o.checks.push_back({"branch_smooth", rep.branch_smooth, ""});
        if (rep.decomposition) {
            o.checks.push_back({"decomposition_identity", rep.decomposition->identity_holds(), ""});
            o.checks.push_back({"f1_smooth", rep.f1_smooth, ""});
            o.checks.push_back({"transversal", rep.transversal, ""});
        }
        o.checks.push_back({"pipeline", rep.ok, rep.failure});
        for (const auto& t : rep.trace) o.lines.push_back(t);
        if (rep.rank) o.lines.push_back("Ulrich rank " + rep.rank->get_str());
        if (!rep.ok) o.code = rep.branch_smooth && !rep.decomposition ? 3 : 2;
        return o;
    }

    if (a.d < 2) throw InputError("--d must be at least 2");
    if (a.k < 1) throw InputError("--k must be positive");
    auto b = staged("cover", [&] { return build_cover_mf(a.n, a.k, static_cast<unsigned>(a.d), g, a.max_size); });
    json cover = cover_report_json(b);
    cover.erase("factorization");
    o.result["cover"] = cover;
    o.result["mf"] = mf_to_json(b.mf);
    o.checks.push_back({"substitution", verify_rewrite(b.certificate, b.chart), b.certificate.gprime.str()});
    check_mf(b.mf, o, true);
    o.lines.push_back("g' = " + b.certificate.gprime.str() + " in " + std::to_string(b.chart.N + 1) +
                      " Veronese coordinates");
    o.lines.push_back("factorization of " + b.mf.target.str() + ": length " + std::to_string(b.mf.length()) +
                      ", size " + std::to_string(b.achieved_size) + " (bound " + std::to_string(b.bound_size) +
                      ")");
    o.result["ulrich"] = staged("certify", [&] { return certify_factors(b.mf, std::nullopt, std::nullopt, o); });
    auto rr = staged("ranks", [&] { return rank_report(a.d, a.k, b.s); });
    o.result["ranks"] = rank_report_to_json(rr);
    o.lines.push_back("rank bound " + rr.rank_bound.get_str() + " (" + rr.parity + " route)");
    return o;
}

// ---- splitting / decompose / ranks / ledger

struct SplittingOpts {
    std::string f0, f1;
    int m = 0;
    std::vector<std::string> vars;
};

Outcome cmd_splitting(const SplittingOpts& a) {
    Outcome o;
    o.inputs = {{"f0", a.f0}, {"f1", a.f1}, {"m", a.m}, {"vars", a.vars}};
    const Ring ring = ring_for(a.vars, {"x", "y"});
    if (ring.nvars() != 2) throw InputError("splitting needs two variables");
    const MultiPoly f0 = parse_form(a.f0, ring, "f0"), f1 = parse_form(a.f1, ring, "f1");
    SplittingType s = splitting_type_p1(f0, f1, a.m);
    o.result = splitting_to_json(s);
    long sum = 0;
    for (int x : s.a) sum += x;
    o.checks.push_back({"degree_sum", sum == a.m + 1 - s.d, "sum = " + std::to_string(sum)});
    bool stair = true;
    for (int t = -5; t <= 5; ++t) stair = stair && s.staircase(t) == expected_staircase(s.d, a.m, t);
    o.checks.push_back({"sections", stair, "h0 on twists -5..5"});
    std::vector<std::string> parts;
    for (int x : s.a) parts.push_back("O(" + std::to_string(x) + ")");
    o.lines.push_back("f_* O(" + std::to_string(a.m) + ") = " + join(parts, " + "));
    return o;
}

struct DecomposeOpts {
    std::string poly;
    int d1 = 1, d2 = 2;
    int budget = 32;
    long coeff_range = 9;
    bool require_checks = false;
    std::vector<std::string> vars;
};

Outcome cmd_decompose(const DecomposeOpts& a, std::uint64_t seed) {
    Outcome o;
    o.inputs = {{"poly", a.poly},
                {"d1", a.d1},
                {"d2", a.d2},
                {"budget", a.budget},
                {"coeff-range", a.coeff_range},
                {"require-checks", a.require_checks},
                {"vars", a.vars}};
    const Ring ring = ring_for(a.vars, {"x", "y", "z"});
    const MultiPoly F = parse_form(a.poly, ring, "polynomial");
    Decomposition dec = carlini_decompose(F, a.d1, a.d2, {seed, a.budget, a.coeff_range, a.require_checks});
    o.result = decomposition_to_json(dec);
    o.checks.push_back({"identity", dec.identity_holds(), ""});
    if (dec.checks) {
        o.checks.push_back({"f1_smooth", dec.checks->f1_smooth.smooth, dec.checks->f1_smooth.method});
        o.checks.push_back({"f1_f2_transversal", dec.checks->f1_f2, ""});
        o.checks.push_back({"f1_g2_transversal", dec.checks->f1_g2, ""});
        o.checks.push_back({"f1_f2g2_transversal", dec.checks->f1_f2g2, ""});
    }
    o.lines.push_back("F1 = " + dec.F1.str());
    o.lines.push_back("G1 = " + dec.G1.str());
    o.lines.push_back("F2 = " + dec.F2.str());
    o.lines.push_back("G2 = " + dec.G2.str());
    o.lines.push_back(dec.strategy + " after " + std::to_string(dec.attempts) + " attempt(s)");
    return o;
}

struct RanksOpts {
    std::optional<long> p;
    std::optional<int> d, k;
    std::optional<std::size_t> s;
};

Outcome cmd_ranks(const RanksOpts& a) {
    Outcome o;
    auto opt = [](const auto& v) { return v ? json(*v) : json(); };
    o.inputs = {{"p", opt(a.p)}, {"d", opt(a.d)}, {"k", opt(a.k)}, {"s", opt(a.s)}};
    if (a.p) {
        if (a.d || a.k || a.s) throw InputError("use either --p or --d/--k");
        if (!is_prime(*a.p)) throw InputError("--p must be prime");
        auto cmp = compare_m_variants(*a.p);
        auto N = n_sequence(*a.p);
        o.result = {{"m", comparison_to_json(cmp)}, {"N", trace_to_json(N)}};
        const std::string ps = std::to_string(*a.p);
        auto say = [&](const RecursionTrace& t, const std::string& q, const std::string& tag) {
            if (t.chain_break)
                o.lines.push_back(q + "_" + ps + ": undefined (" + t.break_reason + ")" + tag);
            else
                o.lines.push_back(q + "_" + ps + " = " + t.value().get_str() + ", " + q + "'_" + ps + " = " +
                                  t.primed().get_str() + tag);
        };
        say(cmp.proof, "m", " (proof)");
        say(cmp.statement, "m", " (statement)");
        say(N, "N", "");
        for (const auto& w : cmp.written)
            if (std::find(cmp.proof.chain.begin(), cmp.proof.chain.end(), w.p) != cmp.proof.chain.end())
                o.lines.push_back("written " + w.quantity + "_" + std::to_string(w.p) + " = " + w.written.get_str() +
                                  ", formula gives " + w.formula.get_str());
        o.checks.push_back({"chain_complete", !cmp.proof.chain_break && !N.chain_break, cmp.proof.break_reason});
        return o;
    }
    if (!a.d || !a.k) throw InputError("ranks needs --p, or --d and --k");
    auto rr = rank_report(*a.d, *a.k, a.s);
    o.result = rank_report_to_json(rr);
    o.lines.push_back(rr.parity + " route: p = " + std::to_string(rr.p) + ", r = " + std::to_string(rr.r) +
                      ", rank bound " + rr.rank_bound.get_str());
    if (rr.rank_bound_statement)
        o.lines.push_back("with the statement's recursion: " + rr.rank_bound_statement->get_str());
    if (rr.veronese_size) o.lines.push_back("Veronese bound d^s = " + rr.veronese_size->get_str());
    const bool defined = rr.parity == "even" || !rr.m->proof.chain_break;
    o.checks.push_back({"rank_defined", defined, defined ? "" : rr.m->proof.break_reason});
    return o;
}

struct LedgerOpts {
    int d = 2;
    long r = 1;
};

Outcome cmd_ledger(const LedgerOpts& a) {
    Outcome o;
    o.inputs = {{"d", a.d}, {"r", a.r}};
    const Integer r = a.r;
    auto steps = modification_ledger(a.d, r);
    o.result = {{"d", a.d}, {"r", a.r}, {"steps", ledger_to_json(steps)}};
    const Integer total = Integer(a.d) * a.d * r;
    bool constant = true, formula = true;
    for (const auto& st : steps) {
        constant = constant && st.ledger.rank() == total;
        o.lines.push_back(st.label + " = " + st.ledger.str());
    }
    for (int i = 0; i <= a.d - 2; ++i)
        formula = formula && steps[static_cast<std::size_t>(2 * i + 1)].ledger.summands ==
                                 kernel_ledger_formula(a.d, r, i).summands;
    const auto& last = steps.back().ledger.summands;
    const bool trivial = last.size() == 1 && last.begin()->first == 0 && last.begin()->second == total;
    o.checks.push_back({"rank_constant", constant, "rank d^2 r = " + total.get_str()});
    o.checks.push_back({"kernel_formula", formula, ""});
    o.checks.push_back({"terminal_trivial", trivial, steps.back().ledger.str()});
    return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matrix factorizations, Ulrich certificates and cyclic-cover invariants", "ulrich"};
    app.require_subcommand(1);

    Common c;
    FactorizeOpts fo;
    auto* fz = app.add_subcommand("factorize", "Matrix factorization of a form or of t^d - g");
    fz->add_option("--poly", fo.poly, "Homogeneous polynomial")->required();
    fz->add_option("--method", fo.method, "auto, cyclic, clifford or tensor");
    fz->add_option("--d", fo.d, "Number of factors");
    fz->add_option("--vars", fo.vars, "Variable order, comma separated")->delimiter(',');
    add_common(fz, c);

    std::string vfile;
    bool no_rerun = false;
    auto* vf = app.add_subcommand("verify", "Check a factorization or certificate file");
    vf->add_option("file", vfile, "JSON file")->required();
    vf->add_flag("--no-rerun", no_rerun, "Skip re-running the recorded command");
    add_common(vf, c);

    CertifyOpts co;
    auto* cf = app.add_subcommand("certify", "Cohomological Ulrich certificate of each cokernel");
    cf->add_option("file", co.file, "Factorization or certificate JSON")->required();
    cf->add_option("--dimX", co.dimX, "Dimension of the support (default: hypersurface)");
    cf->add_option("--window", co.window, "Twist window lo,hi for D1")->delimiter(',');
    add_common(cf, c);

    PipelineOpts po;
    auto* pl = app.add_subcommand("pipeline", "Cyclic cover of P^n: factorization, Ulrich cokernels, ranks");
    pl->add_option("--n", po.n, "Dimension of the base projective space");
    pl->add_option("--k", po.k, "Branch degree is d*k");
    pl->add_option("--d", po.d, "Covering degree");
    pl->add_option("--branch", po.branch, "Branch form")->required();
    pl->add_option("--vars", po.vars, "Base variables, comma separated")->delimiter(',');
    pl->add_option("--parity", po.parity, "even or odd: plane decomposition pipeline instead");
    pl->add_option("--max-size", po.max_size, "Largest matrix root to build");
    pl->add_option("--budget", po.budget, "Decomposition attempts");
    pl->add_option("--coeff-range", po.coeff_range, "Random coefficient range");
    add_common(pl, c);

    SplittingOpts so;
    auto* sp = app.add_subcommand("splitting", "Splitting type of f_* O(m) for f = (f0 : f1) on P^1");
    sp->add_option("--f0", so.f0)->required();
    sp->add_option("--f1", so.f1)->required();
    sp->add_option("--m", so.m, "Twist");
    sp->add_option("--vars", so.vars, "Two variables, comma separated")->delimiter(',');
    add_common(sp, c);

    DecomposeOpts dopt;
    auto* dc = app.add_subcommand("decompose", "F = F1 G1 + F2 G2 for a plane curve");
    dc->add_option("--poly", dopt.poly, "Ternary form")->required();
    dc->add_option("--d1", dopt.d1);
    dc->add_option("--d2", dopt.d2);
    dc->add_option("--budget", dopt.budget, "Attempts");
    dc->add_option("--coeff-range", dopt.coeff_range, "Random coefficient range and point box");
    dc->add_flag("--require-checks", dopt.require_checks, "Retry until smoothness and transversality hold");
    dc->add_option("--vars", dopt.vars, "Three variables, comma separated")->delimiter(',');
    add_common(dc, c);

    RanksOpts ro;
    auto* rk = app.add_subcommand("ranks", "Rank recursions (--p) or rank report (--d, --k)");
    rk->add_option("--p", ro.p, "Prime");
    rk->add_option("--d", ro.d, "Covering degree");
    rk->add_option("--k", ro.k, "Branch degree is d*k");
    rk->add_option("--s", ro.s, "Number of Veronese summands");
    add_common(rk, c);

    LedgerOpts lo;
    auto* lg = app.add_subcommand("ledger", "Line-bundle ledger of the modification steps");
    lg->add_option("--d", lo.d, "Covering degree");
    lg->add_option("--r", lo.r, "Rank of the starting bundle");
    add_common(lg, c);

    std::vector<std::string> argv_s{"ulrich"};
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_s) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 1;
    }

    try {
        const std::uint64_t seed = resolve_seed(c.seed);
        if (fz->parsed()) return emit("factorize", seed, cmd_factorize(fo), c, out);
        if (vf->parsed()) return run_verify(vfile, !no_rerun, c, out);
        if (cf->parsed()) return emit("certify", seed, cmd_certify(co), c, out);
        if (pl->parsed()) return emit("pipeline", seed, cmd_pipeline(po, seed), c, out);
        if (sp->parsed()) return emit("splitting", seed, cmd_splitting(so), c, out);
        if (dc->parsed()) return emit("decompose", seed, cmd_decompose(dopt, seed), c, out);
        if (rk->parsed()) return emit("ranks", seed, cmd_ranks(ro), c, out);
        if (lg->parsed()) return emit("ledger", seed, cmd_ledger(lo), c, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return 1;
    } catch (const BudgetExhausted& e) {
        err << "budget exhausted after " << e.attempts() << " attempt(s): " << e.what() << '\n';
        return 3;
    } catch (const MathFailure& e) {
        err << "failure: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace ulrich
