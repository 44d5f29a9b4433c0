#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef COMBMAP_CLI_PATH
#define COMBMAP_CLI_PATH "./combmap"
#endif
#ifndef COMBMAP_DATA_DIR
#define COMBMAP_DATA_DIR "tests/data"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string outPath = std::string(std::tmpnam(nullptr)) + ".out";
    std::string cmd = std::string(COMBMAP_CLI_PATH) + " " + args + " > " + outPath + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(outPath);
    std::ostringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    std::remove(outPath.c_str());
    return res;
}

std::string data(const std::string& name) { return std::string(COMBMAP_DATA_DIR) + "/" + name; }

} // namespace

TEST_CASE("solve emits the expected gap length") {
    RunResult r = run_cli("solve " + data("single_slit.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"l\"") != std::string::npos);
    CHECK(r.output.find("2.0") != std::string::npos);
    CHECK(r.output.find("\"Q0\": 0.5") != std::string::npos);
}

TEST_CASE("solve with empty heights reports zeros") {
    RunResult r = run_cli("solve " + data("zero_heights.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"Q0\": 0.0") != std::string::npos);
}

TEST_CASE("malformed json exits 2") {
    RunResult r = run_cli("solve " + data("malformed.json"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("missing file exits 2") {
    RunResult r = run_cli("solve /nonexistent/nope.json");
    CHECK(r.exit_code == 2);
}

TEST_CASE("gaps-only output parses as a gap system") {
    RunResult r = run_cli("solve --gaps-only " + data("single_slit.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"zminus\"") != std::string::npos);
}

TEST_CASE("verify single configuration passes") {
    RunResult r = run_cli("verify " + data("single_slit.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("# seed") == 0);
    CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("verify with a filter") {
    RunResult r = run_cli("verify --filter 2.16 " + data("zero_heights.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("2.16/lower") != std::string::npos);
    CHECK(r.output.find("2.2 ") == std::string::npos);
}

TEST_CASE("small ensemble through the cli") {
    RunResult r = run_cli("verify --ensemble --seed 42 --count 5 --filter 1.5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("# seed 42") == 0);
}

TEST_CASE("example usage errors exit 2") {
    RunResult r = run_cli("example --id 9 --size 3");
    CHECK(r.exit_code == 2);
}

TEST_CASE("capacity of intervals") {
    RunResult r = run_cli("capacity --intervals 0,1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("capacity 0.25") != std::string::npos);

    RunResult r2 = run_cli("capacity --intervals 0,1 2,3");
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("capacity 0.5") != std::string::npos);

    RunResult bad = run_cli("capacity --intervals 0,1 0.5,2");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("gaps subcommand recovers the configuration") {
    RunResult r = run_cli("gaps " + data("gapsystem.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"h\"") != std::string::npos);
    CHECK(r.output.find("\"Q0\": 0.5") != std::string::npos);
}
