#pragma once

#include <string>
#include <vector>

#include "combmap/estimates.hpp"
#include "combmap/forward_solver.hpp"
#include "combmap/quantities.hpp"
#include "combmap/slit_config.hpp"

namespace combmap {

struct ConfigFile {
    SlitConfig config;
    double p = 2.0;
    std::vector<double> weights; // empty = all ones
    SolverOptions solver;
};

// Throws ParseError on malformed input or invalid configuration.
ConfigFile parse_config_json(const std::string& text);
ConfigFile load_config_file(const std::string& path);

std::string solution_to_json(const CombSolution& sol, const QuantityReport& rep);
std::string gaps_to_json(const GapSystem& gaps);

// {"gaps": [{"zminus": ..., "zplus": ..., "c"?: ...}, ...]}
GapSystem parse_gap_system_json(const std::string& text);
GapSystem load_gap_system_file(const std::string& path);

// per-gap CSV: n,u,h,l,A,J,mu_plus,mu_minus,nu,L,e,d (17 significant digits)
std::string quantity_csv(const CombSolution& sol, const QuantityReport& rep);

std::string checks_to_json(const std::vector<CheckResult>& results, std::uint64_t seed);
std::string checks_to_table(const std::vector<CheckResult>& results);

std::string ensemble_to_json(const EnsembleReport& rep);
std::string ensemble_to_table(const EnsembleReport& rep);

} // namespace combmap
