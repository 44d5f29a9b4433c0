#pragma once

#include <complex>

#include "combmap/forward_solver.hpp"

namespace combmap {

// Exact single-slit image: sqrt((k-u0)^2 + h^2) with the branch analytic off
// the slit [u0 - ih, u0 + ih] and asymptotic to k - u0. The full comb map of
// the one-slit configuration is u0 plus this value. Throws OnSlit.
std::complex<double> single_slit_map(std::complex<double> k, double u0, double h);

// Gap length of the uniform comb with spacing pi and height H:
// 2 * arcsin(tanh H); tends to pi as H grows.
double uniform_comb_gap_length(double H);

// Nesting oracle for the symmetric three-slit configuration on u = (-1, 0, 1)
// with heights (M, h0, M): evaluates sqrt(z(k, eta)^2 + |z(i h0, eta)|^2)
// where eta is the two-slit configuration of height M at u = +-1. The branch
// is fixed by Im >= 0. etaSolution must be the solved eta configuration
// (empty config allowed for M = 0).
std::complex<double> three_slit_nesting(std::complex<double> k, double h0,
                                        const CombSolution& etaSolution);

// convenience overload that solves eta internally
std::complex<double> three_slit_nesting(std::complex<double> k, double h0, double M);

// builds and solves the eta configuration used by the nesting oracle
CombSolution solve_two_slit_eta(double M, const SolverOptions& opts = {});

struct ChristoffelSchwarzConstants {
    double alpha = 0.0;
    double beta = 0.0;
};

// Solves the two half-period integral equations of the rectangle-with-shelf
// map for (alpha, beta):
//   uStar/2 = int_0^alpha sqrt((beta^2-t^2)/(alpha^2-t^2)) dt
//   hPlus   = int_alpha^beta sqrt((beta^2-t^2)/(t^2-alpha^2)) dt
// Throws NonConvergence.
ChristoffelSchwarzConstants cs_constants(double uStar, double hPlus);

// re-evaluates both integrals at a candidate pair (for residual checks)
std::pair<double, double> cs_residual(const ChristoffelSchwarzConstants& c,
                                      double uStar, double hPlus);

} // namespace combmap
