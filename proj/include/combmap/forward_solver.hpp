#pragma once

#include <memory>
#include <string>
#include <vector>

#include "combmap/gap_system.hpp"
#include "combmap/quasimomentum.hpp"
#include "combmap/slit_config.hpp"

namespace combmap {

struct SolverOptions {
    double residual_tol = 1e-9;
    int max_newton_iters = 60;
    int continuation_steps = 8;
    double fd_step = 1e-7;       // relative finite-difference step
    int initial_samples = 64;
    int max_samples = 16384;
};

struct ContinuationRecord {
    double t = 0.0;
    double residual = 0.0;
    int newton_iters = 0;
};

// The direct problem solved: a slit configuration together with the gap
// system whose inverse map reproduces it.
struct CombSolution {
    SlitConfig config;
    GapSystem gaps;                      // nonempty gaps, ascending
    std::vector<std::size_t> gap_slit;   // gap index -> slit index
    double residual = 0.0;
    int iterations = 0;
    std::vector<ContinuationRecord> continuation_path;
    std::shared_ptr<const Quasimomentum> qm;

    bool slit_has_gap(std::size_t slit) const;
    int gap_of_slit(std::size_t slit) const; // -1 when empty
};

// Newton with continuation in a global height scale h(t) = t*h. Throws
// ContinuationExhausted / GapCollision / NonConvergence on failure.
CombSolution solve_forward(const SlitConfig& config, const SolverOptions& opts = {});

struct RoundTripReport {
    std::vector<double> du; // per slit
    std::vector<double> dh;
    double max_abs = 0.0;
};

// Recomputes (u, h) from the solved gaps with doubled sampling and reports
// the deviations.
RoundTripReport round_trip_check(const CombSolution& sol);

struct LindelofReport {
    double q0_small = 0.0;
    double q0_big = 0.0;
    bool configs_equal = false;
    bool q0_monotone = false;      // Q0(small) <= Q0(big) + tol
    bool q0_strict = false;        // strict when the pair differs
    std::vector<std::size_t> kept; // slit indices with equal positive heights
    double min_length_margin = 0.0; // min over kept of l_small - l_big
    bool lengths_monotone = false;
    double min_y_margin = 0.0;      // min over the grid of y_small - y_big
    bool y_dominates = false;
    int grid_points = 0;
};

// Verifies the monotonicity principle on a comparable pair (same u,
// hSmall <= hBig pointwise). Throws MonotonicityViolation if a monotonicity
// fails beyond tolerance, Error on incomparable inputs.
LindelofReport lindelof_pair_check(const SlitConfig& hSmall, const SlitConfig& hBig,
                                   const SolverOptions& opts = {}, int gridPoints = 100,
                                   bool throwOnViolation = true);

} // namespace combmap
