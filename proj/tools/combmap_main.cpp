// combmap: comb conformal mappings of finite slit configurations.
//
// Subcommands: solve, verify, example, capacity, gaps.
// Exit codes: 0 success, 1 inequality violation, 2 input error,
//             3 numerical failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "combmap/capacity.hpp"
#include "combmap/errors.hpp"
#include "combmap/estimates.hpp"
#include "combmap/json_io.hpp"
#include "combmap/quantities.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

void write_out(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw combmap::ParseError("cannot write to " + path);
    out << text;
}

bool is_input_error(const std::exception& ex) {
    return dynamic_cast<const combmap::ParseError*>(&ex) != nullptr ||
           dynamic_cast<const combmap::EmptyConfig*>(&ex) != nullptr ||
           dynamic_cast<const combmap::NonIncreasingPositions*>(&ex) != nullptr ||
           dynamic_cast<const combmap::NegativeHeight*>(&ex) != nullptr ||
           dynamic_cast<const combmap::LengthMismatch*>(&ex) != nullptr;
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    using namespace combmap;

    CLI::App app{"comb conformal mappings for finite vertical-slit configurations"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "solve a configuration and report quantities");
    std::string solvePath, solveOut, solveCsv;
    bool gapsOnly = false;
    solve->add_option("config", solvePath, "configuration JSON file")->required();
    solve->add_option("--out", solveOut, "write JSON report here instead of stdout");
    solve->add_option("--csv", solveCsv, "also write per-gap CSV rows here");
    solve->add_flag("--gaps-only", gapsOnly, "print only the solved gap system");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run the inequality checks");
    std::string verifyPath, verifyOut, filterArg, weightsArg = "both";
    bool ensembleMode = false, jsonOut = false, localChecks = false;
    std::uint64_t seed = 42;
    int count = 200;
    double pFlag = 0.0;
    verify->add_option("config", verifyPath, "configuration JSON file");
    verify->add_flag("--ensemble", ensembleMode, "run a seeded random ensemble");
    verify->add_option("--seed", seed, "ensemble seed (default 42)");
    verify->add_option("--count", count, "ensemble instance count (default 200)");
    verify->add_option("--filter", filterArg, "comma-separated check id prefixes");
    verify->add_option("--p", pFlag, "run the p-dependent chains only at this exponent");
    verify->add_option("--weights", weightsArg, "weight rule: unit, quad, or both");
    verify->add_flag("--local", localChecks, "include the local strip/rectangle checks");
    verify->add_flag("--json", jsonOut, "emit JSON instead of the text table");
    verify->add_option("--out", verifyOut, "write the report here instead of stdout");

    // ---- example ----
    auto* example = app.add_subcommand("example", "reproduce a worked configuration family");
    int exId = 0, exSize = 0;
    example->add_option("--id", exId, "example id: 1, 2, or 3")->required();
    example->add_option("--size", exSize, "size parameter")->required();

    // ---- capacity ----
    auto* cap = app.add_subcommand("capacity", "analytic capacity of an interval union");
    std::vector<std::string> intervalArgs;
    std::string fromSolution;
    cap->add_option("--intervals", intervalArgs, "intervals as a,b pairs");
    cap->add_option("--from-solution", fromSolution,
                    "derive the interval union from a solved configuration");

    // ---- gaps ----
    auto* gapsCmd = app.add_subcommand("gaps", "inverse direction from a gap system");
    std::string gapsPath, gapsOut;
    gapsCmd->add_option("gapsystem", gapsPath, "gap system JSON file")->required();
    gapsCmd->add_option("--out", gapsOut, "write JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (solve->parsed()) {
            ConfigFile cf = load_config_file(solvePath);
            CombSolution sol;
            try {
                sol = solve_forward(cf.config, cf.solver);
            } catch (const Error& ex) {
                std::cerr << "solver failure: " << ex.what() << "\n";
                for (const auto& rec : sol.continuation_path)
                    std::cerr << "  t=" << rec.t << " residual=" << rec.residual << "\n";
                return kExitNumerical;
            }
            if (gapsOnly) {
                write_out(gaps_to_json(sol.gaps), solveOut);
                return kExitOk;
            }
            QuantityReport rep = compute_quantities(sol);
            write_out(solution_to_json(sol, rep), solveOut);
            if (!solveCsv.empty()) write_out(quantity_csv(sol, rep), solveCsv);
            return kExitOk;
        }

        if (verify->parsed()) {
            CheckOptions opts;
            opts.include_local = localChecks;
            if (pFlag > 0.0) {
                opts.p_low = pFlag <= 2.0 ? std::vector<double>{pFlag} : std::vector<double>{};
                opts.p_high = pFlag >= 2.0 ? std::vector<double>{pFlag} : std::vector<double>{};
            }
            if (weightsArg == "unit") opts.weights = {WeightRule::Unit};
            else if (weightsArg == "quad") opts.weights = {WeightRule::QuadPosition};
            else if (weightsArg != "both")
                throw ParseError("--weights must be unit, quad, or both");
            std::vector<std::string> filters = split_csv_list(filterArg);

            if (ensembleMode) {
                EnsembleSpec spec;
                spec.seed = seed;
                spec.count = count;
                EnsembleReport rep = run_ensemble(spec, opts, filters);
                write_out(jsonOut ? ensemble_to_json(rep) : ensemble_to_table(rep), verifyOut);
                if (rep.solver_failures > 0) return kExitNumerical;
                return rep.violations == 0 ? kExitOk : kExitViolation;
            }

            if (verifyPath.empty())
                throw ParseError("verify needs a configuration file or --ensemble");
            ConfigFile cf = load_config_file(verifyPath);
            if (pFlag <= 0.0 && cf.p != 2.0) {
                opts.p_low = cf.p <= 2.0 ? std::vector<double>{cf.p} : std::vector<double>{};
                opts.p_high = cf.p >= 2.0 ? std::vector<double>{cf.p} : std::vector<double>{};
            }
            CombSolution sol;
            try {
                sol = solve_forward(cf.config, cf.solver);
            } catch (const Error& ex) {
                std::cerr << "solver failure: " << ex.what() << "\n";
                return kExitNumerical;
            }
            auto results = apply_filter(run_all_checks(sol, opts, "config"), filters);
            std::string head = "# seed " + std::to_string(seed) + "\n";
            write_out(jsonOut ? checks_to_json(results, seed) : head + checks_to_table(results),
                      verifyOut);
            for (const auto& r : results)
                if (r.applicable && !r.passed) return kExitViolation;
            return kExitOk;
        }

        if (example->parsed()) {
            ExampleReport rep;
            try {
                rep = reproduce_example(exId, exSize);
            } catch (const Error& ex) {
                if (std::string(ex.what()).find("example") != std::string::npos) {
                    std::cerr << ex.what() << "\n";
                    return kExitInput;
                }
                std::cerr << "solver failure: " << ex.what() << "\n";
                return kExitNumerical;
            }
            std::cout << "# example " << exId << " size " << exSize << "\n";
            for (const auto& line : rep.lines) std::cout << line << "\n";
            std::cout << checks_to_table(rep.chain);
            return rep.passed ? kExitOk : kExitViolation;
        }

        if (cap->parsed()) {
            if (!fromSolution.empty()) {
                ConfigFile cf = load_config_file(fromSolution);
                CombSolution sol;
                try {
                    sol = solve_forward(cf.config, cf.solver);
                } catch (const Error& ex) {
                    std::cerr << "solver failure: " << ex.what() << "\n";
                    return kExitNumerical;
                }
                SlitCapacityReport rep = slit_union_capacity_check(sol);
                std::cout << "sum_l " << rep.l1 << "\nsum_l/4 " << rep.quarter << "\ndiameter "
                          << rep.diameter << "\nbound "
                          << (rep.bound_ok ? "pass" : "FAIL") << "\n";
                return rep.bound_ok ? kExitOk : kExitViolation;
            }
            if (intervalArgs.empty())
                throw ParseError("capacity needs --intervals or --from-solution");
            std::vector<std::pair<double, double>> iv;
            for (const auto& arg : intervalArgs) {
                auto parts = split_csv_list(arg);
                if (parts.size() != 2) throw ParseError("intervals must be a,b pairs");
                try {
                    iv.emplace_back(std::stod(parts[0]), std::stod(parts[1]));
                } catch (const std::exception&) {
                    throw ParseError("intervals must be numeric a,b pairs");
                }
            }
            IntervalUnion E;
            try {
                E = IntervalUnion::validated(iv);
            } catch (const Error& ex) {
                throw ParseError(ex.what());
            }
            double len = total_length(E);
            double fp = ahlfors_derivative_at_infinity(E);
            double fmax = ahlfors_max_abs_sample(E, 200);
            double lo = E.intervals.front().first, hi = E.intervals.back().second;
            std::cout << "length " << len << "\ncapacity " << capacity(E)
                      << "\nfprime_inf " << fp << "\nmax_abs_f " << fmax << "\ndiameter "
                      << hi - lo << "\n";
            bool ok = std::abs(fp - capacity(E)) <= 1e-8 && fmax <= 1.0 + 1e-12 &&
                      capacity(E) <= (hi - lo) + 1e-12;
            return ok ? kExitOk : kExitViolation;
        }

        if (gapsCmd->parsed()) {
            GapSystem sys = load_gap_system_file(gapsPath);
            std::vector<std::pair<double, double>> endpoints;
            for (const Gap& g : sys.gaps) endpoints.emplace_back(g.lo, g.hi);
            Quasimomentum qm;
            try {
                qm = Quasimomentum(sys);
            } catch (const Error& ex) {
                std::cerr << "numerical failure: " << ex.what() << "\n";
                return kExitNumerical;
            }
            // assemble a solution record around the recovered configuration
            CombSolution sol;
            std::vector<double> u = qm.positions(), h = qm.heights();
            sol.config = SlitConfig::validated(u, h);
            sol.gaps = qm.gap_system();
            for (std::size_t g = 0; g < sys.gaps.size(); ++g) sol.gap_slit.push_back(g);
            sol.qm = std::make_shared<Quasimomentum>(qm);
            sol.residual = qm.max_closure_residual();
            QuantityReport rep = compute_quantities(sol);
            write_out(solution_to_json(sol, rep), gapsOut);
            return kExitOk;
        }
    } catch (const std::exception& ex) {
        if (is_input_error(ex)) {
            std::cerr << "input error: " << ex.what() << "\n";
            return kExitInput;
        }
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
