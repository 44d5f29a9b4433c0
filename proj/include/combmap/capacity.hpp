#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "combmap/forward_solver.hpp"

namespace combmap {

// Finite union of disjoint closed intervals on the real line, sorted.
struct IntervalUnion {
    std::vector<std::pair<double, double>> intervals;

    // Throws Error unless a_i < b_i and b_i < a_{i+1}.
    static IntervalUnion validated(std::vector<std::pair<double, double>> intervals);

    bool empty() const { return intervals.empty(); }
};

double total_length(const IntervalUnion& E);

// analytic capacity of a real compact: |E| / 4
double capacity(const IntervalUnion& E);

// phi_E(z) = int_E dt / (z - t) = sum log((z - a_i)/(z - b_i)); throws OnSet.
std::complex<double> phi(const IntervalUnion& E, std::complex<double> z);

// extremal function f_E = (exp(phi/2) - 1)/(exp(phi/2) + 1); |f| <= 1 off E
std::complex<double> ahlfors(const IntervalUnion& E, std::complex<double> z);

// numeric f'(inf) = lim z f(z), Richardson-extrapolated in 1/z at |z| ~ 1e6
double ahlfors_derivative_at_infinity(const IntervalUnion& E);

// max |f_E| over a deterministic sample of points off E
double ahlfors_max_abs_sample(const IntervalUnion& E, int count = 200);

struct SlitCapacityReport {
    double l1 = 0.0;        // sum of gap lengths
    double quarter = 0.0;   // l1 / 4
    double diameter = 0.0;  // diameter of the slit union
    bool bound_ok = false;  // quarter <= diameter
};

// capacity-style cross-check for a solved configuration
SlitCapacityReport slit_union_capacity_check(const CombSolution& sol);

} // namespace combmap
