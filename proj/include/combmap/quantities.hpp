#pragma once

#include <vector>

#include "combmap/forward_solver.hpp"

namespace combmap {

// Every derived scalar/sequence of a solved configuration, slit-aligned
// (entries of empty gaps are zero). mu is stored as magnitude plus sign;
// sign 0 marks an empty gap.
struct QuantityReport {
    std::vector<double> l;
    std::vector<double> h_computed;
    std::vector<double> u_recovered;
    std::vector<double> A;
    std::vector<double> J;
    std::vector<double> mu_plus_abs;
    std::vector<double> mu_minus_abs;
    std::vector<int> mu_plus_sign;
    std::vector<int> mu_minus_sign;
    std::vector<double> nu;
    std::vector<double> L;
    std::vector<double> e; // induced charge l / (4 pi)
    std::vector<double> d; // dipole moment A / 4
    double Q0 = 0.0;
    double I_D = 0.0;
    bool s_defined = false;
    double s = 0.0; // minimal interior band length (>= 2 gaps)
};

QuantityReport compute_quantities(const CombSolution& sol);

} // namespace combmap
