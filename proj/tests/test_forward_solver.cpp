#include "doctest.h"

#include <cmath>

#include "combmap/errors.hpp"
#include "combmap/forward_solver.hpp"
#include "combmap/quantities.hpp"
#include "combmap/rng.hpp"

using namespace combmap;

TEST_CASE("single slit solves to the closed-form gap") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0}, {1.0}));
    REQUIRE(sol.gaps.size() == 1);
    CHECK(sol.gaps.gaps[0].lo == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(sol.gaps.gaps[0].hi == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(sol.gaps.gaps[0].c) < 1e-9);
    CHECK(sol.residual <= 1e-9);
    CHECK(round_trip_check(sol).max_abs <= 1e-10);
}

TEST_CASE("zero heights give the identity map") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0, 1.0}, {0.0, 0.0}));
    CHECK(sol.gaps.empty());
    CHECK(sol.residual == 0.0);
    RoundTripReport rt = round_trip_check(sol);
    CHECK(rt.max_abs == 0.0);
    QuantityReport rep = compute_quantities(sol);
    CHECK(rep.Q0 == 0.0);
    CHECK(rep.l == std::vector<double>{0.0, 0.0});
}

TEST_CASE("mixed zero and positive heights") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0, 1.5, 3.0}, {1.0, 0.0, 0.7}));
    REQUIRE(sol.gaps.size() == 2);
    CHECK(sol.gap_slit == std::vector<std::size_t>{0, 2});
    CHECK(sol.gap_of_slit(1) == -1);
    QuantityReport rep = compute_quantities(sol);
    CHECK(rep.l[1] == 0.0);
    CHECK(rep.nu[1] == 0.0);
    CHECK(rep.mu_plus_sign[1] == 0);
}

TEST_CASE("round trip on a three-slit instance") {
    CombSolution sol =
        solve_forward(SlitConfig::validated({-2.0, 0.3, 1.9}, {1.2, 0.4, 1.9}));
    CHECK(sol.residual <= 1e-9);
    CHECK(round_trip_check(sol).max_abs <= 1e-8);
    sol.gaps.validate(); // interlacing preserved
}

TEST_CASE("solution is independent of the continuation path") {
    SlitConfig cfg = SlitConfig::validated({-1.0, 0.5, 2.2}, {0.9, 1.6, 0.5});
    SolverOptions a, b;
    a.continuation_steps = 8;
    b.continuation_steps = 13;
    b.initial_samples = 96; // different starting resolution as well
    CombSolution sa = solve_forward(cfg, a);
    CombSolution sb = solve_forward(cfg, b);
    REQUIRE(sa.gaps.size() == sb.gaps.size());
    for (std::size_t g = 0; g < sa.gaps.size(); ++g) {
        CHECK(sa.gaps.gaps[g].lo == doctest::Approx(sb.gaps.gaps[g].lo).epsilon(1e-8));
        CHECK(sa.gaps.gaps[g].hi == doctest::Approx(sb.gaps.gaps[g].hi).epsilon(1e-8));
    }
}

TEST_CASE("small heights open gaps of length about 2h") {
    double t = 0.01;
    CombSolution sol = solve_forward(SlitConfig::validated({0.0, 1.2}, {t, 0.5 * t}));
    REQUIRE(sol.gaps.size() == 2);
    CHECK(sol.gaps.gaps[0].length() == doctest::Approx(2.0 * t).epsilon(2e-3));
    CHECK(sol.gaps.gaps[1].length() == doctest::Approx(t).epsilon(2e-3));
}

TEST_CASE("continuation trace is recorded") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0}, {1.0}));
    REQUIRE(!sol.continuation_path.empty());
    CHECK(sol.continuation_path.back().t == doctest::Approx(1.0));
    for (const auto& rec : sol.continuation_path) CHECK(rec.residual <= 1e-9);
}

TEST_CASE("monotonicity pair: equal configurations give equalities") {
    SlitConfig cfg = SlitConfig::validated({-0.5, 1.0}, {0.8, 1.1});
    LindelofReport rep = lindelof_pair_check(cfg, cfg);
    CHECK(rep.configs_equal);
    CHECK(rep.q0_small == doctest::Approx(rep.q0_big).epsilon(1e-10));
    CHECK(rep.q0_monotone);
    CHECK(rep.lengths_monotone);
    CHECK(rep.y_dominates);
    CHECK(std::abs(rep.min_length_margin) <= 1e-9);
}

TEST_CASE("monotonicity pair: lowering one slit") {
    SlitConfig big = SlitConfig::validated({-0.5, 1.0, 2.4}, {0.8, 1.1, 0.9});
    SlitConfig small = SlitConfig::validated({-0.5, 1.0, 2.4}, {0.8, 0.4, 0.9});
    LindelofReport rep = lindelof_pair_check(small, big);
    CHECK(!rep.configs_equal);
    CHECK(rep.q0_small < rep.q0_big);
    CHECK(rep.q0_strict);
    // kept slits 0 and 2: their gaps must not shrink
    CHECK(rep.kept == std::vector<std::size_t>{0, 2});
    CHECK(rep.min_length_margin >= -1e-9);
    CHECK(rep.y_dominates);
    CHECK(rep.grid_points >= 100);

    CHECK_THROWS_AS(lindelof_pair_check(big, small), Error);
}
