#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "equivibe/cli.hpp"

using namespace equivibe;
using json = nlohmann::json;

namespace {
struct Result {
    int code;
    std::string out;
    json j;
};
Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    try {
        r.j = json::parse(r.out);
    } catch (...) {
    }
    return r;
}
} // namespace

TEST_CASE("equilibrium of the harmonic ring") {
    const auto r = run({"equilibrium", "--n", "6", "--A", "0", "--B", "0", "--sigma", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.j["equilibrium"]["r0"].get<double>() == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(r.j["equilibrium"]["u0"].size() == 6);
}

TEST_CASE("output is deterministic") {
    const auto a = run({"critical-set", "--n", "6"});
    const auto b = run({"critical-set", "--n", "6"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.j["critical_values"].size() == 36);
    const auto t = run({"critical-set", "--format", "table", "--l-max", "1"});
    CHECK(t.out.find("2 pi lambda") != std::string::npos);
}

TEST_CASE("invariants on supplied eigenvalues") {
    const auto r = run({"invariants", "--eigenvalues",
                        "0=-10.36657914,1=43.00585474,3=19.58406142,2-=7.633501334,2+=11.42339623", "--crossing",
                        "2,1,+"});
    REQUIRE(r.code == 0);
    const auto& w = r.j["invariants"][0];
    CHECK(w["terms"].size() == 15);
    CHECK(w["predicted_branches"] == 3);
}

TEST_CASE("default invariants sweep keeps going past unsupported crossings") {
    const auto r = run({"invariants", "--mode", "literal"});
    REQUIRE(r.code == 0);
    CHECK(r.j["mode"] == "literal");
    int ok = 0, unsupported = 0;
    for (const auto& w : r.j["invariants"]) {
        if (w.contains("error")) {
            CHECK(w["error"]["kind"] == "unsupported");
            ++unsupported;
        } else {
            ++ok;
        }
    }
    CHECK(ok == 4);
    CHECK(unsupported == 2);
}

TEST_CASE("errors map onto exit codes with an error document") {
    auto r = run({"equilibrium", "--n", "2"});
    CHECK(r.code == kConfigError);
    CHECK(r.j["error"]["kind"] == "config");
    r = run({"nonsense"});
    CHECK(r.code == kConfigError);
    r = run({"invariants", "--crossing", "9,1"});
    CHECK(r.code == kNumericalError);
    CHECK(r.j.contains("error"));
    r = run({"invariants", "--n", "5"});
    CHECK(r.code == kConfigError);  // odd n: no subgroup lattice
    r = run({"critical-set", "--eigenvalues", "0=0,1=3"});
    CHECK(r.code == kNumericalError);  // condition (C)
}

TEST_CASE("config file with flags taking precedence") {
    const auto dir = std::filesystem::temp_directory_path() / "equivibe_cli_test";
    std::filesystem::create_directories(dir);
    const auto cfg = (dir / "cfg.json").string();
    std::ofstream(cfg) << R"({"n": 6, "A": 0, "B": 0, "sigma": 0.5})";
    auto r = run({"equilibrium", "--config", cfg, "--sigma", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.j["params"]["sigma"] == 0.0);
    CHECK(r.j["equilibrium"]["r0"].get<double>() == doctest::Approx(1.0).epsilon(1e-11));
    std::ofstream(cfg) << R"({"bogus": 1})";
    r = run({"equilibrium", "--config", cfg});
    CHECK(r.code == kConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("simulate writes CSV and SVG") {
    const auto dir = std::filesystem::temp_directory_path() / "equivibe_sim_test";
    const auto r = run({"simulate", "--mode", "3,1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto& o = r.j["orbits"][0];
    CHECK(o["converged"] == true);
    CHECK(std::filesystem::exists(o["csv"].get<std::string>()));
    CHECK(std::filesystem::exists(o["svg"].get<std::string>()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("atlas lists every crossing and honours EQUIVIBE_THREADS") {
    setenv("EQUIVIBE_THREADS", "2", 1);
    CHECK(thread_budget() <= 2);
    const auto a = run({"atlas", "--l-max", "2"});
    setenv("EQUIVIBE_THREADS", "1", 1);
    const auto b = run({"atlas", "--l-max", "2"});
    unsetenv("EQUIVIBE_THREADS");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto& rows = a.j["crossings"];
    CHECK(rows.size() == 12);
    CHECK(rows[0].contains("limit_period"));
}
