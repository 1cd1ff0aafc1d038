#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "ulrich/cli.hpp"
#include "ulrich/matfac.hpp"

using namespace ulrich;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int rc;
    std::string out, err;
    json cert() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    int rc = run_cli(args, o, e);
    return {rc, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "ulrich_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool all_checks_pass(const json& cert) {
    for (const auto& c : cert.at("checks"))
        if (!c.at("pass").get<bool>()) return false;
    return true;
}

}  // namespace

TEST_CASE("factorize: conic cover and cubic monomial") {
    auto r = run({"factorize", "--poly", "t^2 - y^2 - x*z", "--d", "2", "--json"});
    REQUIRE(r.rc == 0);
    auto c = r.cert();
    CHECK(c.at("command") == "factorize");
    CHECK(c.at("version") == kCertificateVersion);
    CHECK(c.at("result").at("size") == 2);
    CHECK(c.at("result").at("length") == 2);
    CHECK(c.at("result").at("form") == "t^d - g");
    CHECK(all_checks_pass(c));
    auto mf = mf_from_json(c.at("result").at("mf"));
    CHECK(verify_mf(mf).ok);

    auto r3 = run({"factorize", "--poly", "t^3 - x*y*z", "--d", "3", "--json"});
    REQUIRE(r3.rc == 0);
    CHECK(r3.cert().at("result").at("size") == 3);
    CHECK(r3.cert().at("result").at("mf").at("target").at("D") == 3);
}

TEST_CASE("factorize: methods and errors") {
    CHECK(run({"factorize", "--poly", "t^3 - x*y*z", "--method", "cyclic"}).rc == 0);
    CHECK(run({"factorize", "--poly", "t^3 - x*y*z", "--method", "tensor"}).rc == 0);
    CHECK(run({"factorize", "--poly", "t^3 - x*y*z", "--method", "clifford"}).rc == 1);
    CHECK(run({"factorize", "--poly", "t^2 - y^2 - x*z", "--method", "cyclic"}).rc == 1);
    CHECK(run({"factorize", "--poly", "t^2 - y^2 - x*z", "--method", "clifford"}).rc == 0);
    CHECK(run({"factorize", "--poly", "t^2 - y^2 - x*z", "--method", "magic"}).rc == 1);

    auto prod = run({"factorize", "--poly", "x*y*z", "--method", "cyclic", "--json"});
    REQUIRE(prod.rc == 0);
    CHECK(prod.cert().at("result").at("size") == 1);
    auto sum = run({"factorize", "--poly", "a*b + c*e", "--json"});
    REQUIRE(sum.rc == 0);
    CHECK(sum.cert().at("result").at("size") == 2);

    auto deg1 = run({"factorize", "--poly", "x + y", "--d", "2"});
    CHECK(deg1.rc == 2);
    CHECK(deg1.err.find("not expressible") != std::string::npos);
    CHECK(run({"factorize", "--poly", "x +* y"}).rc == 1);
    CHECK(run({"factorize", "--poly", "x^2 + y"}).rc == 1);
    CHECK(run({"factorize", "--poly", "t^2 - x^2", "--d", "3"}).rc == 2);
    CHECK(run({"factorize"}).rc == 1);
}

TEST_CASE("verify: worked cubic, tampering, truncation, schema") {
    auto good = scratch("legendre2.json");
    auto mf = inst::legendre_mf(2);
    write(good, mf_to_json(mf).dump(2));
    auto ok = run({"verify", good.string()});
    CHECK(ok.rc == 0);

    json bad = mf_to_json(mf);
    bad["factors"][1]["entries"][2][1] = "x - 3*z";
    auto badp = scratch("legendre2_tampered.json");
    write(badp, bad.dump(2));
    auto b = run({"verify", badp.string(), "--json"});
    CHECK(b.rc == 2);
    auto bc = b.cert();
    CHECK(bc.at("result").at("product_identity") == false);
    CHECK(bc.at("result").at("entry").is_array());
    CHECK(b.out.find("product entry (") != std::string::npos);

    auto trunc = scratch("legendre2_truncated.json");
    const std::string text = slurp(good);
    write(trunc, text.substr(0, text.size() / 2));
    CHECK(run({"verify", trunc.string()}).rc == 1);

    json schema = mf_to_json(mf);
    schema.erase("factors");
    auto sp = scratch("legendre2_schema.json");
    write(sp, schema.dump());
    CHECK(run({"verify", sp.string()}).rc == 1);
    schema = mf_to_json(mf);
    schema["size"] = 4;
    write(sp, schema.dump());
    CHECK(run({"verify", sp.string()}).rc == 1);

    CHECK(run({"verify", scratch("does_not_exist.json").string()}).rc == 1);
}

TEST_CASE("determinism: identical command and seed give identical bytes") {
    const std::vector<std::vector<std::string>> cmds = {
        {"factorize", "--poly", "t^3 - x*y*z", "--json"},
        {"decompose", "--poly", inst::legendre(2), "--d1", "1", "--d2", "2", "--seed", "5", "--json"},
        {"pipeline", "--branch", "y^2 + x*z", "--json"},
        {"pipeline", "--parity", "odd", "--d", "3", "--branch", inst::legendre(3), "--seed", "2", "--json"},
        {"ranks", "--p", "7", "--json"},
        {"ledger", "--d", "4", "--r", "3", "--json"},
        {"splitting", "--f0", "x^3 + y^3", "--f1", "x*y^2", "--m", "4", "--json"},
    };
    for (const auto& args : cmds) {
        auto a = run(args), b = run(args);
        CHECK(a.rc == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("every emitted certificate re-verifies") {
    const std::vector<std::vector<std::string>> cmds = {
        {"factorize", "--poly", "t^2 - y^2 - x*z"},
        {"factorize", "--poly", "x*y + z*w", "--vars", "w,x,y,z"},
        {"decompose", "--poly", inst::legendre(5), "--d1", "1", "--d2", "2", "--seed", "9", "--require-checks"},
        {"pipeline", "--n", "2", "--k", "2", "--d", "2", "--branch", "x^4 - y^4 - z^4"},
        {"pipeline", "--parity", "even", "--d", "2", "--branch", "y^2 + x*z", "--seed", "3"},
        {"ranks", "--d", "3", "--k", "5", "--s", "2"},
        {"ledger", "--d", "5", "--r", "2"},
        {"splitting", "--f0", "x^2", "--f1", "y^2", "--m", "-3"},
    };
    int i = 0;
    for (auto args : cmds) {
        auto path = scratch("cert" + std::to_string(i++) + ".json");
        args.insert(args.end(), {"--out", path.string()});
        auto r = run(args);
        REQUIRE(r.rc == 0);
        auto v = run({"verify", path.string(), "--json"});
        CHECK(v.rc == 0);
        CHECK(v.cert().at("result").at("reproduced") == true);
    }
    // a certificate whose payload was edited no longer reproduces
    auto path = scratch("ledger_edit.json");
    REQUIRE(run({"ledger", "--d", "3", "--r", "1", "--out", path.string()}).rc == 0);
    json j = json::parse(slurp(path));
    j["result"]["r"] = 2;
    write(path, j.dump(2));
    auto v = run({"verify", path.string()});
    CHECK(v.rc == 2);
    CHECK(run({"verify", path.string(), "--no-rerun"}).rc == 0);
}

TEST_CASE("certify: conic factorization cokernels") {
    auto path = scratch("conic.json");
    write(path, mf_to_json(inst::conic_pair()).dump());
    auto r = run({"certify", path.string(), "--json"});
    REQUIRE(r.rc == 0);
    auto c = r.cert();
    for (const auto& f : c.at("result").at("factors")) {
        CHECK(f.at("D1") == true);
        CHECK(f.at("D2") == true);
        CHECK(f.at("h0") == 2);
        CHECK(f.at("dimX") == 2);
    }
    CHECK(run({"certify", path.string(), "--window", "3,1"}).rc == 1);
    CHECK(run({"certify", path.string(), "--window", "-4,2"}).rc == 0);
}

TEST_CASE("pipeline: conic, Fermat and errors") {
    auto r = run({"pipeline", "--n", "2", "--k", "1", "--d", "2", "--branch", "y^2 + x*z", "--json"});
    REQUIRE(r.rc == 0);
    auto c = r.cert();
    CHECK(all_checks_pass(c));
    CHECK(c.at("result").at("cover").at("achieved_size") == 2);
    CHECK(c.at("result").at("ulrich").size() == 2);
    for (const auto& f : c.at("result").at("ulrich")) CHECK(f.at("pushforward_rank") == 2);
    CHECK(c.at("result").at("ranks").at("rank_bound") == 2);

    for (int s : {2, 3}) {
        const std::string e = std::to_string(2 * s);
        auto f =
            run({"pipeline", "--k", std::to_string(s), "--branch", "x^" + e + " - y^" + e + " - z^" + e, "--json"});
        REQUIRE(f.rc == 0);
        CHECK(f.cert().at("result").at("cover").at("achieved_size") == 2);
        CHECK(all_checks_pass(f.cert()));
    }

    CHECK(run({"pipeline", "--branch", "y^2 + x"}).rc == 1);
    auto wrong = run({"pipeline", "--k", "2", "--branch", "y^2 + x*z"});
    CHECK(wrong.rc == 1);
    CHECK(wrong.err.find("cover:") != std::string::npos);
    CHECK(run({"pipeline", "--branch", "y^2 + x*z", "--parity", "sideways"}).rc == 1);
    // singular branch: reported failure
    CHECK(run({"pipeline", "--parity", "odd", "--d", "3", "--branch", "x*y*z"}).rc == 2);
}

TEST_CASE("ranks, ledger, splitting, decompose") {
    auto r = run({"ranks", "--p", "7", "--json"});
    REQUIRE(r.rc == 0);
    auto m = r.cert().at("result").at("m");
    CHECK(m.at("proof").at("value") == 864);
    CHECK(r.cert().at("result").at("N").at("value") == 41);
    bool flagged = false;
    for (const auto& w : m.at("written"))
        if (w.at("p") == 7) flagged = w.at("written") == 72 && w.at("formula") == 864 && w.at("agrees") == false;
    CHECK(flagged);
    CHECK(run({"ranks", "--p", "13"}).rc == 2);
    CHECK(run({"ranks", "--p", "9"}).rc == 1);
    CHECK(run({"ranks"}).rc == 1);
    CHECK(run({"ranks", "--p", "5", "--d", "2"}).rc == 1);

    auto l = run({"ledger", "--d", "3", "--r", "2", "--json"});
    REQUIRE(l.rc == 0);
    CHECK(l.cert().at("result").at("steps").size() == 5);
    CHECK(run({"ledger", "--d", "1"}).rc == 1);

    auto s = run({"splitting", "--f0", "x^3", "--f1", "y^3", "--m", "2", "--json"});
    REQUIRE(s.rc == 0);
    CHECK(s.cert().at("result").at("degrees") == json::array({0, 0, 0}));
    CHECK(run({"splitting", "--f0", "x^2", "--f1", "x*y"}).rc == 1);

    auto d = run({"decompose", "--poly", inst::legendre(2), "--d1", "1", "--d2", "2", "--json"});
    REQUIRE(d.rc == 0);
    CHECK(all_checks_pass(d.cert()));
    auto ex = run({"decompose", "--poly", "x^4 + y^4 + z^4", "--d1", "3", "--d2", "3", "--budget", "3"});
    CHECK(ex.rc == 3);
    CHECK(ex.err.find("3 attempt") != std::string::npos);
}

TEST_CASE("seed fallback and usage") {
    setenv("ULRICH_SEED", "17", 1);
    CHECK(run({"ledger", "--json"}).cert().at("seed") == 17);
    CHECK(run({"ledger", "--json", "--seed", "4"}).cert().at("seed") == 4);
    setenv("ULRICH_SEED", "x1", 1);
    CHECK(run({"ledger"}).rc == 1);
    unsetenv("ULRICH_SEED");
    CHECK(run({"ledger", "--json"}).cert().at("seed") == 1);

    CHECK(run({}).rc == 1);
    CHECK(run({"nonsense"}).rc == 1);
    auto h = run({"--help"});
    CHECK(h.rc == 0);
    CHECK(h.out.find("factorize") != std::string::npos);
}
