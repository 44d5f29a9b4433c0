#include "doctest.h"

#include "json.hpp"

#include "combmap/errors.hpp"
#include "combmap/json_io.hpp"
#include "combmap/quantities.hpp"

using namespace combmap;

TEST_CASE("configuration parsing") {
    ConfigFile cf = parse_config_json(R"({"u":[0,1,2],"h":[1,0,2]})");
    CHECK(cf.config.size() == 3);
    CHECK(cf.config.u_star == 1.0);
    CHECK(cf.p == 2.0);

    ConfigFile full = parse_config_json(
        R"({"u":[0,2],"h":[1,1],"weights":[1,4],"p":1.5,
            "solver":{"residualTol":1e-8,"continuationSteps":4}})");
    CHECK(full.p == 1.5);
    CHECK(full.weights == std::vector<double>{1, 4});
    CHECK(full.solver.residual_tol == 1e-8);
    CHECK(full.solver.continuation_steps == 4);

    CHECK_THROWS_AS(parse_config_json("{"), ParseError);
    CHECK_THROWS_AS(parse_config_json(R"({"u":[0]})"), ParseError);
    CHECK_THROWS_AS(parse_config_json(R"({"u":[0,0],"h":[1,1]})"), ParseError);
    CHECK_THROWS_AS(parse_config_json(R"({"u":[0],"h":[1],"weights":[0.5]})"), ParseError);
    CHECK_THROWS_AS(parse_config_json(R"({"u":[0],"h":[1],"p":0.5})"), ParseError);
    CHECK_THROWS_AS(parse_config_json(R"({"u":["a"],"h":[1]})"), ParseError);
}

TEST_CASE("solution serialization round-trips the configuration") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0, 1.5}, {1.0, 0.5}));
    QuantityReport rep = compute_quantities(sol);
    std::string text = solution_to_json(sol, rep);
    auto j = nlohmann::json::parse(text);
    CHECK(j["config"]["u"].get<std::vector<double>>() == sol.config.u);
    CHECK(j["config"]["h"].get<std::vector<double>>() == sol.config.h);
    CHECK(j["gaps"].size() == 2);
    CHECK(j["quantities"]["Q0"].get<double>() == rep.Q0);
    CHECK(j["quantities"]["l"][0].get<double>() == rep.l[0]);
    // parse the config back through the reader
    ConfigFile back = parse_config_json(j["config"].dump());
    CHECK(back.config.u == sol.config.u);
    CHECK(back.config.h == sol.config.h);
}

TEST_CASE("gap system parsing") {
    GapSystem sys = parse_gap_system_json(R"({"gaps":[{"zminus":-1,"zplus":1}]})");
    REQUIRE(sys.size() == 1);
    CHECK(sys.gaps[0].c == 0.0);
    GapSystem sys2 = parse_gap_system_json(
        R"({"gaps":[{"zminus":-2,"c":-1.4,"zplus":-1},{"zminus":0,"zplus":3}]})");
    CHECK(sys2.gaps[0].c == -1.4);
    CHECK_THROWS_AS(parse_gap_system_json(R"({"gaps":[{"zminus":1,"zplus":-1}]})"), ParseError);
    CHECK_THROWS_AS(parse_gap_system_json("[]"), ParseError);

    std::string dumped = gaps_to_json(sys2);
    GapSystem again = parse_gap_system_json(dumped);
    CHECK(again.gaps[0].c == sys2.gaps[0].c);
    CHECK(again.gaps[1].hi == sys2.gaps[1].hi);
}

TEST_CASE("csv rows per slit") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0, 1.5}, {1.0, 0.0}));
    QuantityReport rep = compute_quantities(sol);
    std::string csv = quantity_csv(sol, rep);
    CHECK(csv.find("n,u,h,l,A,J,mu_plus,mu_minus,nu,L,e,d") == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 3); // header + two slits
}

TEST_CASE("check report serialization counts violations") {
    std::vector<CheckResult> v;
    v.push_back(make_check("a", 0.0, 1.0, "x"));
    v.push_back(make_check("b", 2.0, 1.0, "x")); // violated
    auto j = nlohmann::json::parse(checks_to_json(v, 42));
    CHECK(j["seed"] == 42);
    CHECK(j["violations"] == 1);
    CHECK(j["results"].size() == 2);
    CHECK(j["results"][0]["checkId"] == "a");
    std::string table = checks_to_table(v);
    CHECK(table.find("FAIL") != std::string::npos);
}
