#include "doctest.h"

#include <cmath>
#include <complex>

#include "combmap/capacity.hpp"
#include "combmap/errors.hpp"
#include "combmap/rng.hpp"

using namespace combmap;
using cplx = std::complex<double>;

TEST_CASE("length and capacity of interval unions") {
    IntervalUnion a = IntervalUnion::validated({{0.0, 1.0}});
    CHECK(total_length(a) == 1.0);
    CHECK(capacity(a) == 0.25);

    IntervalUnion b = IntervalUnion::validated({{0.0, 1.0}, {2.0, 3.0}});
    CHECK(capacity(b) == 0.5);

    IntervalUnion empty = IntervalUnion::validated({});
    CHECK(capacity(empty) == 0.0);

    CHECK_THROWS_AS(IntervalUnion::validated({{0.0, 1.0}, {0.5, 2.0}}), Error);
    CHECK_THROWS_AS(IntervalUnion::validated({{1.0, 1.0}}), Error);
    // capacity monotone under inclusion
    CHECK(capacity(a) <= capacity(b));
}

TEST_CASE("Cauchy transform and the extremal function") {
    IntervalUnion E = IntervalUnion::validated({{-1.0, 1.0}});
    cplx p = phi(E, cplx(3.0, 0.0));
    CHECK(p.real() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::abs(p.imag()) < 1e-15);

    cplx f = ahlfors(E, cplx(3.0, 0.0));
    double expected = (std::numbers::sqrt2 - 1.0) / (std::numbers::sqrt2 + 1.0);
    CHECK(f.real() == doctest::Approx(expected).epsilon(1e-14));

    // decay at infinity and the sign flip of Im phi across the set
    CHECK(std::abs(phi(E, cplx(0.0, 1e8))) < 1e-7);
    CHECK(phi(E, cplx(0.2, 0.01)).imag() < 0.0);
    CHECK(phi(E, cplx(0.2, -0.01)).imag() > 0.0);

    CHECK_THROWS_AS(phi(E, cplx(0.5, 0.0)), OnSet);
    CHECK_THROWS_AS(ahlfors(E, cplx(-1.0, 0.0)), OnSet);
}

TEST_CASE("derivative at infinity matches the capacity") {
    Rng rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        int m = rng.uniform_int(1, 5);
        std::vector<std::pair<double, double>> iv;
        double x = rng.uniform(-4.0, 4.0);
        for (int j = 0; j < m; ++j) {
            double len = rng.uniform(0.2, 1.5);
            iv.emplace_back(x, x + len);
            x += len + rng.uniform(0.2, 1.5);
        }
        IntervalUnion E = IntervalUnion::validated(iv);
        CHECK(ahlfors_derivative_at_infinity(E) ==
              doctest::Approx(capacity(E)).epsilon(1e-9));
        CHECK(ahlfors_max_abs_sample(E, 200) <= 1.0 + 1e-12);
    }
}

TEST_CASE("slit-union capacity report") {
    CombSolution sol = solve_forward(SlitConfig::validated({0.0}, {1.0}));
    SlitCapacityReport rep = slit_union_capacity_check(sol);
    CHECK(rep.l1 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(rep.quarter == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.diameter == doctest::Approx(2.0));
    CHECK(rep.bound_ok);

    CombSolution zero = solve_forward(SlitConfig::validated({0.0, 1.0}, {0.0, 0.0}));
    SlitCapacityReport rz = slit_union_capacity_check(zero);
    CHECK(rz.l1 == 0.0);
    CHECK(rz.bound_ok);
}
