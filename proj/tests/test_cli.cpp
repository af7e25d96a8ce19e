#include "hartree/app/config.hpp"
#include "hartree/app/experiments.hpp"
#include "hartree/app/output.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace hartree;
using namespace hartree::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("hartree_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

int run_lab(const std::string& args) {
    std::string cmd = std::string(HARTREE_LAB_EXE) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("key=value configuration") {
    ExperimentConfig c = parse_config(
        "# reference five-dimensional setup\n"
        "experiment = evolve\n"
        "model.N = 6\n"
        "model.alpha = 3\n"
        "model.p = 5/2\n"
        "grid.M = 256   # coarse\n"
        "evolve.sponge = true\n"
        "scan.lambdas = 1, 2.5, 4\n");
    CHECK(c.experiment == "evolve");
    CHECK(c.model.N == 6);
    CHECK(c.model.p == Number::parse("2.5"));
    CHECK(c.grid.M == 256);
    CHECK(c.evolve.sponge);
    CHECK(c.scan.lambdas == std::vector<double>{1, 2.5, 4});
    CHECK_THROWS_AS(parse_config("grid.MM = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid.M = many\n"), ConfigError);
}

TEST_CASE("JSON configuration") {
    ExperimentConfig c = parse_config(R"({"experiment": "ground-state", "model": {"N": 6, "alpha": 3, "p": 2.5},
                                          "solver": {"tol": 1e-9}, "grid": {"grading": "geometric"}})");
    CHECK(c.experiment == "ground-state");
    CHECK(c.solver.tol == 1e-9);
    CHECK(c.grid.grading == Grading::geometric);
    CHECK_THROWS_AS(parse_config(R"({"model": {"q": 1}})"), ConfigError);
}

TEST_CASE("validation happens before compute") {
    ExperimentConfig c;
    c.experiment = "exponents";
    c.model.p = Number(8);
    CHECK_THROWS(validate_config(c));
    c.model.p = Number(3);
    CHECK_NOTHROW(validate_config(c));
    c.experiment = "ground-state";
    c.model.epsilon = 1;
    CHECK_THROWS(validate_config(c));
    c.experiment = "nonsense";
    CHECK_THROWS(validate_config(c));
    CHECK(run_experiment(c, std::cerr) == exit_invalid_params);
    auto keys = known_keys();
    CHECK(std::find(keys.begin(), keys.end(), "grid.M") != keys.end());
}

TEST_CASE("CSV and number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.5e-12) == "-2.5e-12");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvWriter w({"x", "label"});
    w.add_row({"1", "one, two"});
    CHECK(w.str() == "x,label\r\n1,\"one, two\"\r\n");
    CHECK(json_number(INFINITY).is_null());
}

TEST_CASE("executable exit codes") {
    fs::path out = scratch("exit");
    CHECK(run_lab("exponents --out " + out.string()) == 0);
    CHECK(fs::exists(out / "exponents.json"));
    CHECK(run_lab("exponents --set model.p=8 --out " + out.string()) == 2);
    CHECK(run_lab("frobnicate") == 2);
    CHECK(run_lab("exponents --set no.such.key=1") == 2);
    CHECK(run_lab("ground-state --set model.N=6 model.alpha=3 model.p=2.5 grid.M=128 solver.max_iter=1 --out " +
                  out.string()) == 3);
    fs::remove_all(out);
}

TEST_CASE("ground-state runs are bitwise reproducible") {
    fs::path a = scratch("gs_a"), b = scratch("gs_b");
    const std::string args = "ground-state --set model.N=6 model.alpha=3 model.p=2.5 grid.M=256 --out ";
    int ca = run_lab(args + a.string()), cb = run_lab(args + b.string());
    CHECK(ca == cb);
    CHECK((ca == 0 || ca == 4));
    REQUIRE(fs::exists(a / "ground_state.json"));
    CHECK(slurp(a / "ground_state.json") == slurp(b / "ground_state.json"));
    CHECK(slurp(a / "ground_state_profile.csv") == slurp(b / "ground_state_profile.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}
