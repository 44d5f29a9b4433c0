#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "combmap/errors.hpp"
#include "combmap/rng.hpp"
#include "combmap/slit_config.hpp"

using namespace combmap;

TEST_CASE("validation accepts and rejects per the invariants") {
    SlitConfig ok = SlitConfig::validated({0, 1, 2}, {1, 0, 2});
    CHECK(ok.u_star == doctest::Approx(1.0));
    CHECK_THROWS_AS(SlitConfig::validated({0, 0.5, 0.2}, {1, 1, 1}), NonIncreasingPositions);
    CHECK_THROWS_AS(SlitConfig::validated({0}, {-1}), NegativeHeight);
    CHECK_THROWS_AS(SlitConfig::validated({}, {}), EmptyConfig);
    CHECK_THROWS_AS(SlitConfig::validated({0, 1}, {1}), LengthMismatch);
    CHECK(std::isinf(SlitConfig::validated({0}, {1}).u_star));
}

TEST_CASE("weighted norms") {
    std::vector<double> f{3, 4};
    CHECK(weighted_norm(f, NormSpec{2.0, {1, 1}}) == doctest::Approx(5.0));
    std::vector<double> ones{1, 1, 1};
    CHECK(weighted_norm(ones, NormSpec{1.0, {}}) == doctest::Approx(3.0));
    std::vector<double> g{2, -5};
    CHECK(weighted_norm(g, NormSpec{std::numeric_limits<double>::infinity(), {}}) ==
          doctest::Approx(5.0));
    CHECK_THROWS_AS(weighted_norm(f, NormSpec{2.0, {1, 1, 1}}), LengthMismatch);
    CHECK_THROWS_AS(NormSpec::weighted(0.5, {}), Error);
    CHECK_THROWS_AS(NormSpec::weighted(2.0, {0.5}), Error);
}

TEST_CASE("weighted norm properties: homogeneity, monotonicity, weight domination") {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        int n = rng.uniform_int(1, 6);
        std::vector<double> f(n), w(n);
        for (int i = 0; i < n; ++i) {
            f[i] = rng.uniform(-2.0, 2.0);
            w[i] = 1.0 + rng.uniform(0.0, 3.0);
        }
        double p = rng.uniform(1.0, 3.0);
        double base = weighted_norm(f, NormSpec{p, {}});
        double weighted = weighted_norm(f, NormSpec{p, w});
        CHECK(base <= weighted + 1e-12);
        double lambda = rng.uniform(0.0, 3.0);
        std::vector<double> scaled = f;
        for (auto& v : scaled) v *= lambda;
        CHECK(weighted_norm(scaled, NormSpec{p, w}) ==
              doctest::Approx(lambda * weighted).epsilon(1e-12));
        // monotone in each |f_i|
        int i = rng.uniform_int(0, n - 1);
        std::vector<double> bumped = f;
        bumped[i] = std::abs(bumped[i]) + 0.5;
        CHECK(weighted_norm(bumped, NormSpec{p, w}) >= weighted - 1e-12);
    }
}

TEST_CASE("greedy selection follows the exclusion-window rule") {
    SlitConfig a = SlitConfig::validated({0, 1, 2}, {1, 2, 1});
    std::vector<double> ta = greedy_tilde(a);
    CHECK(ta == std::vector<double>{0, 2, 0});

    SlitConfig zero = SlitConfig::validated({0, 1, 2}, {0, 0, 0});
    CHECK(greedy_tilde(zero) == std::vector<double>{0, 0, 0});

    SlitConfig b = SlitConfig::validated({0, 10, 20}, {1, 2, 3});
    CHECK(greedy_tilde(b) == std::vector<double>{1, 2, 3});
}

TEST_CASE("greedy output keeps values and respects the window property") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.uniform_int(1, 9);
        std::vector<double> u(n), h(n);
        double x = rng.uniform(-4.0, 0.0);
        for (int i = 0; i < n; ++i) {
            u[i] = x;
            x += rng.uniform(1.0, 2.0);
            h[i] = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 3.0);
        }
        SlitConfig cfg = SlitConfig::validated(u, h);
        std::vector<double> t = greedy_tilde(cfg);
        std::vector<int> selected;
        for (int i = 0; i < n; ++i) {
            CHECK((t[i] == 0.0 || t[i] == h[i]));
            if (t[i] > 0.0) selected.push_back(i);
        }
        // pairwise: the window of the taller selected slit excludes the other
        for (std::size_t a = 0; a < selected.size(); ++a)
            for (std::size_t b = a + 1; b < selected.size(); ++b) {
                int i = selected[a], j = selected[b];
                double taller = std::max(h[i], h[j]);
                CHECK(std::abs(u[i] - u[j]) > taller - 1e-12);
            }
    }
}

TEST_CASE("greedy energy bracket") {
    SlitConfig single = SlitConfig::validated({0}, {1});
    auto [lo, hi] = greedy_energy_bounds(single);
    CHECK(lo == doctest::Approx(1.0 / (std::numbers::pi * std::numbers::pi)));
    CHECK(hi == doctest::Approx(2.0 * std::numbers::sqrt2 / std::numbers::pi));
    CHECK(lo <= 0.5);
    CHECK(0.5 <= hi);

    SlitConfig zero = SlitConfig::validated({0, 1}, {0, 0});
    auto [lo0, hi0] = greedy_energy_bounds(zero);
    CHECK(lo0 == 0.0);
    CHECK(hi0 == 0.0);
}
