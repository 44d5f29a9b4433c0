#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "combmap/closed_forms.hpp"
#include "combmap/errors.hpp"
#include "combmap/quadrature.hpp"
#include "combmap/rng.hpp"

using namespace combmap;
using cplx = std::complex<double>;

TEST_CASE("single-slit map values and asymptotics") {
    cplx v = single_slit_map(cplx(0.0, 2.0), 0.0, 1.0);
    CHECK(v.real() == doctest::Approx(0.0));
    CHECK(v.imag() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    // large real arguments are nearly fixed
    cplx w = single_slit_map(cplx(500.0, 0.0), 0.0, 1.0);
    CHECK(w.real() == doctest::Approx(500.0).epsilon(1e-5));
    cplx wm = single_slit_map(cplx(-500.0, 0.0), 0.0, 1.0);
    CHECK(wm.real() == doctest::Approx(-500.0).epsilon(1e-5));

    CHECK_THROWS_AS(single_slit_map(cplx(0.0, 0.5), 0.0, 1.0), OnSlit);
    CHECK(single_slit_map(cplx(2.0, 1.0), 2.0, 0.0) == cplx(0.0, 1.0));

    // shifted slit
    cplx s = single_slit_map(cplx(3.0, 2.0), 3.0, 1.0);
    CHECK(s.imag() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("strip containment of the single-slit image") {
    // S_r minus [-h,h] sits inside the image of S_r minus the slit:
    // check |Re g(w)| < r for the inverse g(w) = w sqrt(1 - h^2/w^2)
    const double h = 1.0, r = 2.0;
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        cplx w(rng.uniform(-r, r), rng.uniform(-3.0, 3.0));
        if (std::abs(w.imag()) < 1e-3 && std::abs(w.real()) <= h + 1e-3) continue;
        cplx g = w * std::sqrt(1.0 - h * h / (w * w));
        CHECK(std::abs(g.real()) <= r + 1e-9);
    }
}

TEST_CASE("uniform comb gap length") {
    CHECK(uniform_comb_gap_length(0.0) == 0.0);
    CHECK(uniform_comb_gap_length(1.0) ==
          doctest::Approx(2.0 * std::asin(std::tanh(1.0))).epsilon(1e-15));
    CHECK(uniform_comb_gap_length(1.0) == doctest::Approx(1.73146).epsilon(1e-4));
    CHECK(uniform_comb_gap_length(30.0) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
    // monotone
    CHECK(uniform_comb_gap_length(0.5) < uniform_comb_gap_length(1.5));
}

TEST_CASE("nesting oracle degenerate reductions") {
    // middle height zero: reduces to the two-slit map itself
    CombSolution eta = solve_two_slit_eta(1.3);
    cplx k(0.7, 0.9);
    cplx reduced = three_slit_nesting(k, 0.0, eta);
    CHECK(std::abs(reduced - eta.qm->invert(k)) < 1e-9);

    // no side slits: reduces to the single-slit map of height h0
    CombSolution empty = solve_two_slit_eta(0.0);
    cplx viaNesting = three_slit_nesting(k, 0.8, empty);
    CHECK(std::abs(viaNesting - single_slit_map(k, 0.0, 0.8)) < 1e-12);
}

TEST_CASE("nesting identity and the central-gap bound on one instance") {
    double h0 = 1.1, M = 0.7;
    CombSolution eta = solve_two_slit_eta(M);
    CombSolution sol3 = solve_forward(SlitConfig::validated({-1.0, 0.0, 1.0}, {M, h0, M}));
    double dev = 0.0;
    for (double x : {-2.2, -0.55, 0.45, 1.6})
        for (double y : {0.35, 1.4}) {
            cplx k(x, y);
            dev = std::max(dev, std::abs(sol3.qm->invert(k) - three_slit_nesting(k, h0, eta)));
        }
    CHECK(dev <= 1e-7);
    int g0 = sol3.gap_of_slit(1);
    REQUIRE(g0 >= 0);
    double bound =
        std::pow((M * M - h0 * h0 + 1.0) * (M * M - h0 * h0 + 1.0) + 4.0 * h0 * h0, 0.25);
    CHECK(sol3.gaps.gaps[g0].length() <= bound + 1e-9);
}

TEST_CASE("rectangle-map constants") {
    // degenerate: tiny shelf pushes beta down to alpha and both to uStar/2
    ChristoffelSchwarzConstants tiny = cs_constants(2.0, 1e-7);
    CHECK(tiny.alpha == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(tiny.beta == doctest::Approx(1.0).epsilon(1e-4));

    for (auto [uStar, hPlus] : std::vector<std::pair<double, double>>{
             {2.0, 1.0}, {1.0, 0.4}, {3.0, 2.5}}) {
        ChristoffelSchwarzConstants c = cs_constants(uStar, hPlus);
        CHECK(0.0 < c.alpha);
        CHECK(c.alpha < c.beta);
        // printed bracket 2 alpha <= u_* <= pi beta
        CHECK(2.0 * c.alpha <= uStar + 1e-10);
        CHECK(uStar <= std::numbers::pi * c.beta + 1e-10);

        // independent re-evaluation of the raw integrals via the cos substitution
        double i1 = gauss_integrate_cos(
            [&](double t) {
                return std::sqrt((c.beta * c.beta - t * t) / (c.alpha * c.alpha - t * t));
            },
            0.0, c.alpha, 256);
        double i2 = gauss_integrate_cos(
            [&](double t) {
                return std::sqrt((c.beta * c.beta - t * t) / (t * t - c.alpha * c.alpha));
            },
            c.alpha, c.beta, 256);
        CHECK(i1 == doctest::Approx(0.5 * uStar).epsilon(1e-8));
        CHECK(i2 == doctest::Approx(hPlus).epsilon(1e-8));
    }

    CHECK_THROWS_AS(cs_constants(-1.0, 1.0), Error);
}
