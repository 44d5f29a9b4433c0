#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "combmap/capacity.hpp"
#include "combmap/forward_solver.hpp"
#include "combmap/quantities.hpp"
#include "combmap/slit_config.hpp"

namespace combmap {

// One evaluated inequality lhs <= rhs. passed uses the absolute slack
// 1e-9 * max(1, |rhs|). Hypothesis failures are reported not-applicable
// (passed, margin 0, instance tagged "[n/a]").
struct CheckResult {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool passed = true;
    bool applicable = true;
    std::string instance;
};

CheckResult make_check(std::string id, double lhs, double rhs, std::string instance);
CheckResult skipped_check(std::string id, std::string instance, const std::string& why);

enum class WeightRule { Unit, QuadPosition };

// QuadPosition is the quadratic-position weight clamped to the admissible
// range: omega_n = max(1, (2 u_n)^2).
std::vector<double> weight_vector(WeightRule rule, const SlitConfig& config);
const char* weight_rule_name(WeightRule rule);

struct CheckOptions {
    std::vector<double> p_low = {1.0, 1.5, 2.0}; // chains stated for p in [1,2]
    std::vector<double> p_high = {2.0, 3.0};     // dual-exponent chain, p >= 2
    std::vector<WeightRule> weights = {WeightRule::Unit, WeightRule::QuadPosition};
    bool include_local = false; // strip/rectangle Dirichlet checks
    double local_r_scale = 0.5; // r = local_r_scale * u_star
};

std::vector<CheckResult> check_basic(const CombSolution& sol, const QuantityReport& rep,
                                     const std::string& instance);
std::vector<CheckResult> check_theorem_1_1(const CombSolution& sol, const QuantityReport& rep,
                                           double p, const std::string& instance);
std::vector<CheckResult> check_theorem_1_2(const CombSolution& sol, const QuantityReport& rep,
                                           double p, WeightRule rule,
                                           const std::string& instance);
std::vector<CheckResult> check_prop_3_6(const CombSolution& sol, const QuantityReport& rep,
                                        double p, const std::string& instance);
std::vector<CheckResult> check_theorem_3_3_and_3_5(const CombSolution& sol,
                                                   const QuantityReport& rep,
                                                   bool includeLocal, double rScale,
                                                   const std::string& instance);
std::vector<CheckResult> check_lemma_3_8(const CombSolution& sol, const QuantityReport& rep,
                                         const std::string& instance);
std::vector<CheckResult> check_theorem_1_5(const CombSolution& sol, const QuantityReport& rep,
                                           const std::string& instance);
// profile identity v = v_n (1 + V_n) at interior points of every gap
std::vector<CheckResult> check_identity_3_32(const CombSolution& sol,
                                             const std::string& instance, int points = 5);

// full battery on a solved instance
std::vector<CheckResult> run_all_checks(const CombSolution& sol, const CheckOptions& opts,
                                        const std::string& instance);

bool matches_filter(const std::string& id, const std::vector<std::string>& filters);
std::vector<CheckResult> apply_filter(std::vector<CheckResult> results,
                                      const std::vector<std::string>& filters);

// ---------------------------------------------------------------------------
// seeded ensembles

struct EnsembleSpec {
    std::uint64_t seed = 42;
    int count = 200;
    int n_min = 1;
    int n_max = 8;
    double spacing_min = 1.0; // spacing >= 1 keeps u_star >= 1
    double spacing_max = 3.0;
    double h_max = 2.0;
    double zero_height_prob = 0.12;
    bool small_slits = false; // heights in (0.02, 0.2], spacing exactly 1
};

SlitConfig random_config(const EnsembleSpec& spec, std::uint64_t index);

struct InstanceOutcome {
    std::string instance;
    bool solved = false;
    std::string error;
    std::vector<CheckResult> results;
};

struct EnsembleReport {
    EnsembleSpec spec;
    std::vector<InstanceOutcome> outcomes;
    int violations = 0;
    int solver_failures = 0;
    int checks_run = 0;
    int not_applicable = 0;
};

// Deterministic for a fixed spec; instances run concurrently (COMBMAP_THREADS
// caps the pool) and are reduced in index order. Near-violations trigger one
// refined re-solve before being reported.
EnsembleReport run_ensemble(const EnsembleSpec& spec, const CheckOptions& opts,
                            const std::vector<std::string>& filters = {});

struct LindelofEnsembleReport {
    int pairs = 0;
    int violations = 0;
    double min_q0_gap = 0.0;      // min over differing pairs of Q0(big) - Q0(small)
    double min_length_margin = 0.0;
    double min_y_margin = 0.0;
    std::vector<std::string> notes;
};

LindelofEnsembleReport run_lindelof_pairs(std::uint64_t seed, int count,
                                          const SolverOptions& opts = {});

struct NestingEnsembleReport {
    int pairs = 0;
    int points_per_pair = 0;
    double max_deviation = 0.0;
    double min_bound_margin = 0.0; // Eq-3.27 style bound margin on l_0
    bool passed = false;
};

NestingEnsembleReport run_nesting_checks(std::uint64_t seed, int count, int points = 50,
                                         double tol = 1e-6);

struct CapacityEnsembleReport {
    int count = 0;
    double max_derivative_error = 0.0; // |f'(inf) - |E|/4|
    double max_abs_f = 0.0;
    bool passed = false;
};

CapacityEnsembleReport run_capacity_ensemble(std::uint64_t seed, int count);

// ---------------------------------------------------------------------------
// worked examples

SlitConfig example_config(int id, int size);

struct ExampleReport {
    int id = 0;
    int size = 0;
    std::vector<CheckResult> chain;
    std::vector<std::string> lines; // human-readable table rows
    bool passed = false;
};

ExampleReport reproduce_example(int id, int size, const SolverOptions& opts = {});

struct CombLimitRow {
    int size = 0;
    double central_length = 0.0;
    double expected = 0.0;
    double error = 0.0;
};

std::vector<CombLimitRow> uniform_comb_convergence(const std::vector<int>& sizes, double H,
                                                   const SolverOptions& opts = {});

int max_threads();

} // namespace combmap
