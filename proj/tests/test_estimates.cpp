#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "combmap/estimates.hpp"
#include "combmap/json_io.hpp"

using namespace combmap;

namespace {

const CheckResult* find_check(const std::vector<CheckResult>& v, const std::string& id) {
    for (const auto& r : v)
        if (r.id == id) return &r;
    return nullptr;
}

int count_failures(const std::vector<CheckResult>& v) {
    int n = 0;
    for (const auto& r : v)
        if (r.applicable && !r.passed) ++n;
    return n;
}

} // namespace

TEST_CASE("single slit: the whole battery passes with the expected numbers") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0}, {1.0}));
    CheckOptions opts;
    auto results = run_all_checks(sol, opts, "single");
    CHECK(count_failures(results) == 0);

    // equality case of the energy lower bound: ||h||_inf^2 = 2 Q0 = 1
    const CheckResult* c29 = find_check(results, "2.29");
    REQUIRE(c29);
    CHECK(c29->lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c29->rhs == doctest::Approx(1.0).epsilon(1e-9));

    // ||l||_1 = 2: the sup bound reads 1 <= (2/pi)*2
    const CheckResult* c320 = find_check(results, "3.20/hinf");
    REQUIRE(c320);
    CHECK(c320->rhs == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-9));

    // sqrt-action chain at p = 2: ||l||/2 = 1 = ||J||
    bool found24 = false;
    for (const auto& r : results)
        if (r.id == "2.4/lower" && r.instance.find("@p=2") != std::string::npos) {
            found24 = true;
            CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-9));
        }
    CHECK(found24);

    // single slit: u_* infinite, so the band-geometry checks are n/a
    const CheckResult* c333 = find_check(results, "3.33/lower");
    REQUIRE(c333);
    CHECK(!c333->applicable);

    // greedy bracket: 1/pi^2 <= 0.5 <= 2 sqrt(2)/pi
    const CheckResult* c216l = find_check(results, "2.16/lower");
    REQUIRE(c216l);
    CHECK(c216l->lhs ==
          doctest::Approx(1.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-9));
    CHECK(c216l->rhs == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("zero configuration: everything trivial or skipped") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0, 1.0}, {0.0, 0.0}));
    auto results = run_all_checks(sol, CheckOptions{}, "zero");
    CHECK(count_failures(results) == 0);
    const CheckResult* c216u = find_check(results, "2.16/upper");
    REQUIRE(c216u);
    CHECK(c216u->lhs == 0.0);
    CHECK(c216u->rhs == 0.0);
    CHECK(c216u->passed);
}

TEST_CASE("local strip checks run under their hypothesis") {
    // small slits, unit spacing: r = 1/2, h <= r/2
    CombSolution sol =
        solve_forward(SlitConfig::validated({0.0, 1.0, 2.0}, {0.15, 0.08, 0.2}));
    CheckOptions opts;
    opts.include_local = true;
    auto results = run_all_checks(sol, opts, "small");
    CHECK(count_failures(results) == 0);
    for (const char* id : {"3.10", "3.11/upper", "3.12/upper", "3.3"}) {
        const CheckResult* r = find_check(results, id);
        REQUIRE(r);
        CHECK(r->applicable);
    }
}

TEST_CASE("hypothesis failure is reported not-applicable, not failed") {
    // tall slits violate h <= r/2 = 1/4
    CombSolution sol = solve_forward(SlitConfig::validated({0.0, 1.0}, {1.0, 1.2}));
    CheckOptions opts;
    opts.include_local = true;
    auto results = run_all_checks(sol, opts, "tall");
    const CheckResult* r = find_check(results, "3.10");
    REQUIRE(r);
    CHECK(!r->applicable);
    CHECK(r->passed);
    CHECK(r->instance.find("n/a") != std::string::npos);
}

TEST_CASE("weight vectors are clamped to the admissible range") {
    SlitConfig cfg = SlitConfig::validated({-0.1, 0.2, 5.0}, {1.0, 1.0, 1.0});
    auto w = weight_vector(WeightRule::QuadPosition, cfg);
    CHECK(w[0] == 1.0); // (2*0.1)^2 < 1 clamps
    CHECK(w[1] == 1.0);
    CHECK(w[2] == doctest::Approx(100.0));
    auto unit = weight_vector(WeightRule::Unit, cfg);
    CHECK(unit == std::vector<double>(3, 1.0));
}

TEST_CASE("filters select by id prefix") {
    CHECK(matches_filter("2.7/lower", {"2.7"}));
    CHECK(!matches_filter("2.7/lower", {"2.16"}));
    CHECK(matches_filter("anything", {}));
    std::vector<CheckResult> v;
    v.push_back(make_check("2.7/lower", 0, 1, "x"));
    v.push_back(make_check("3.32", 0, 1, "x"));
    auto f = apply_filter(v, {"3.32"});
    REQUIRE(f.size() == 1);
    CHECK(f[0].id == "3.32");
}

TEST_CASE("random configurations respect the spec ranges") {
    EnsembleSpec spec;
    spec.seed = 99;
    spec.count = 10;
    for (int i = 0; i < 10; ++i) {
        SlitConfig cfg = random_config(spec, i);
        CHECK(cfg.size() >= 1);
        CHECK(cfg.size() <= 8);
        if (cfg.size() > 1) CHECK(cfg.u_star >= 1.0);
        bool positive = false;
        for (double h : cfg.h) {
            CHECK(h >= 0.0);
            CHECK(h <= 2.0);
            if (h > 0) positive = true;
        }
        CHECK(positive);
    }
}

TEST_CASE("ensemble runs are deterministic and clean") {
    EnsembleSpec spec;
    spec.seed = 7;
    spec.count = 12;
    spec.n_max = 5;
    CheckOptions opts;
    EnsembleReport a = run_ensemble(spec, opts);
    EnsembleReport b = run_ensemble(spec, opts);
    CHECK(a.violations == 0);
    CHECK(a.solver_failures == 0);
    CHECK(ensemble_to_json(a) == ensemble_to_json(b));
    CHECK(a.checks_run > 0);

    EnsembleSpec empty = spec;
    empty.count = 0;
    EnsembleReport e = run_ensemble(empty, opts);
    CHECK(e.checks_run == 0);
    CHECK(e.violations == 0);
}

TEST_CASE("worked example configurations") {
    SlitConfig e1 = example_config(1, 3);
    CHECK(e1.size() == 7);
    CHECK(e1.h == std::vector<double>(7, 3.0));
    SlitConfig e2 = example_config(2, 4);
    CHECK(e2.size() == 9);
    CHECK(e2.h[4] == 4.0);
    CHECK(e2.h[0] == 0.0);
    SlitConfig e3 = example_config(3, 12);
    CHECK(e3.size() == 12);
    CHECK(e3.u[1] - e3.u[0] == doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(example_config(9, 3), combmap::Error);
}

TEST_CASE("nesting and capacity ensembles at reduced size") {
    NestingEnsembleReport nest = run_nesting_checks(17, 3, 12, 1e-6);
    CHECK(nest.passed);
    CHECK(nest.max_deviation <= 1e-6);
    CHECK(nest.min_bound_margin >= -1e-9);

    CapacityEnsembleReport cap = run_capacity_ensemble(17, 10);
    CHECK(cap.passed);
}

TEST_CASE("monotone pairs at reduced size") {
    LindelofEnsembleReport rep = run_lindelof_pairs(3, 3);
    CHECK(rep.violations == 0);
    CHECK(rep.min_q0_gap > 0.0);
    CHECK(rep.min_length_margin >= -1e-9);
    CHECK(rep.min_y_margin >= -1e-8);
}
