#pragma once

#include <span>
#include <utility>
#include <vector>

namespace combmap {

// A finite comb configuration: strictly increasing slit abscissas u and
// nonnegative slit heights h. u_star is the minimal spacing (+inf when N == 1).
struct SlitConfig {
    std::vector<double> u;
    std::vector<double> h;
    double u_star = 0.0;

    // Validates the raw vectors and computes u_star.
    // Throws EmptyConfig, LengthMismatch, NonIncreasingPositions, NegativeHeight.
    static SlitConfig validated(std::vector<double> u, std::vector<double> h);

    std::size_t size() const { return u.size(); }
    double max_height() const;
};

// Weighted p-norm specification: p in [1, inf], weights >= 1.
struct NormSpec {
    double p = 2.0;
    std::vector<double> omega; // empty means all-ones

    static NormSpec unweighted(double p) { return NormSpec{p, {}}; }
    static NormSpec weighted(double p, std::vector<double> omega);
};

// (sum_n omega_n |f_n|^p)^(1/p); for p = inf the weights are ignored and
// max |f_n| is returned. Throws LengthMismatch if omega is non-empty and
// of different length than f.
double weighted_norm(std::span<const double> f, const NormSpec& spec);

// convenience: unweighted p-norm
double lp_norm(std::span<const double> f, double p);

// Greedy subsequence selection: repeatedly keep the tallest remaining slit
// and discard every slit inside its height-sized exclusion window. Ties are
// broken toward the smallest index. Returns a vector equal to h on the
// selected set and zero elsewhere.
std::vector<double> greedy_tilde(const SlitConfig& config);

// Two-sided energy bracket derived from the greedy subsequence:
// ( ||~h||^2 / pi^2 , 2*sqrt(2)/pi * ||~h||^2 ).
std::pair<double, double> greedy_energy_bounds(const SlitConfig& config);

} // namespace combmap
