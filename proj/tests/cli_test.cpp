#include "rotwalk/cli.hpp"

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace rotwalk;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run_cli(std::initializer_list<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::vector<std::string>(args), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run_cli({"expand", "--alpha", "rat:1/3", "--beta", "rat:1/2"}).code == 2);
    CHECK(run_cli({"expand", "--alpha", "surd:2:-1:1:1", "--beta", "inalpha:1/1:1/1"}).code == 2);
    CHECK(run_cli({"expand", "--alpha", "surd:2:-1:1:1", "--beta", "rat:1/2"}).code == 0);
    // beta = alpha: coboundary
    CHECK(run_cli({"expand", "--alpha", "surd:2:-1:1:1", "--beta", "inalpha:0/1:1/1"}).code == 3);
    CHECK(run_cli({"nonsense"}).code == 2);
    CHECK(run_cli({"expand", "--alpha", "surd:8:0:1:1", "--beta", "rat:1/2"}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("expand report round-trips its surds") {
    RunResult r = run_cli({"expand", "--alpha", "surd:2:-1:1:1", "--beta", "rat:1/2",
                           "--depth", "8"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["command"] == "expand");
    for (const char* key : {"alpha", "beta", "alpha0", "beta0"}) {
        RealLiteral lit = parse_literal(j["inputs"][key]["literal"].get<std::string>());
        CHECK(to_literal(lit.value) == j["inputs"][key]["literal"].get<std::string>());
    }
    CHECK(j["payload"]["steps"].size() == 8);
    CHECK(j["payload"]["cycle"]["pre_period"] == 3);
    CHECK(j["payload"]["cycle"]["period"] == 2);
    CHECK(j["payload"]["diophantine"]["M"] == 1);
    CHECK(j["timing_ms"].is_null());
}

TEST_CASE("reports are byte-stable") {
    std::initializer_list<std::string> args = {
        "tclt", "--alpha", "surd:2:-1:1:1", "--beta", "rat:1/2", "--x",
        "rat:0/1", "--n", "5000", "--bins", "40", "--seed", "7"};
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("tclt report contents") {
    RunResult r = run_cli({"tclt", "--alpha", "surd:2:-1:1:1", "--beta", "rat:1/2", "--x",
                           "rat:0/1", "--n", "20000", "--bins", "80", "--seed", "7"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    auto& p = j["payload"];
    CHECK(p["N"].get<int>() >= 10);
    CHECK(p["sigma_N"].get<double>() > 0);
    CHECK(p["D"].get<double>() > 0);
    CHECK(p["D"].get<double>() < 1);
    CHECK(p["histogram"]["total"] == 20000);
    CHECK(p.contains("e_N_exact"));
    // payload surds re-parse to equal values
    for (const char* key : {"c_n_x", "e_N_exact", "var_N_exact"}) {
        std::string lit = p[key]["literal"].get<std::string>();
        CHECK(to_literal(parse_literal(lit).value) == lit);
    }
}

TEST_CASE("towers and markov verbs") {
    RunResult t = run_cli({"towers", "--alpha", "surd:2:-1:1:1", "--beta", "rat:1/2",
                           "--depth", "6"});
    REQUIRE(t.code == 0);
    Json jt = Json::parse(t.out);
    CHECK(jt["payload"]["levels"].size() == 7);
    CHECK(jt["payload"]["levels"][5]["heights"][0] == "70");

    RunResult m = run_cli({"markov", "--alpha", "surd:2:-1:1:1", "--beta", "rat:1/2",
                           "--n", "8", "--block-len", "6"});
    REQUIRE(m.code == 0);
    Json jm = Json::parse(m.out);
    CHECK(jm["payload"]["moments"].size() == 4);
    CHECK(jm["payload"]["contraction"]["all_below_one"] == true);
    CHECK(jm["payload"]["contraction"]["delta"].get<double>() < 1.0);
}

TEST_CASE("simulate with histogram CSV") {
    std::string path = "cli_test_hist.csv";
    RunResult r = run_cli({"simulate", "--alpha", "surd:2:-1:1:1", "--beta", "rat:1/2", "--x",
                           "rat:0/1", "--n", "10000", "--bins", "20", "--hist-out", path});
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "bin_left,bin_right,count,density");
    int lines = 0;
    std::string line;
    while (std::getline(f, line)) ++lines;
    CHECK(lines == 20 + 2);
    f.close();
    std::remove(path.c_str());
}

TEST_CASE("selftest verb runs the exact-identity criteria") {
    // A1 alone is cheap enough for a unit test; the CLI selftest itself is
    // exercised end-to-end by the acceptance suite.
    auto res = selftest::run_one("A1");
    CHECK(res.pass);
}
