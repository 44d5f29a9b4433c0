#include "combmap/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

#include "combmap/errors.hpp"

namespace combmap {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> as_double_vector(const json& j, const std::string& key) {
    if (!j.is_array()) throw ParseError("field '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ParseError("field '" + key + "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ConfigFile parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw ParseError(std::string("invalid JSON: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("u") || !j.contains("h"))
        throw ParseError("configuration must be an object with arrays 'u' and 'h'");

    ConfigFile out;
    try {
        out.config = SlitConfig::validated(as_double_vector(j["u"], "u"),
                                           as_double_vector(j["h"], "h"));
    } catch (const Error& ex) {
        throw ParseError(std::string("invalid configuration: ") + ex.what());
    }
    if (j.contains("weights")) {
        out.weights = as_double_vector(j["weights"], "weights");
        if (out.weights.size() != out.config.size())
            throw ParseError("weights length differs from u/h");
        for (double w : out.weights)
            if (!(w >= 1.0)) throw ParseError("weights must satisfy omega_n >= 1");
    }
    if (j.contains("p")) {
        if (!j["p"].is_number()) throw ParseError("p must be a number");
        out.p = j["p"].get<double>();
        if (!(out.p >= 1.0)) throw ParseError("p must satisfy p >= 1");
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        if (!s.is_object()) throw ParseError("solver options must be an object");
        if (s.contains("residualTol")) out.solver.residual_tol = s["residualTol"].get<double>();
        if (s.contains("maxNewtonIters"))
            out.solver.max_newton_iters = s["maxNewtonIters"].get<int>();
        if (s.contains("continuationSteps"))
            out.solver.continuation_steps = s["continuationSteps"].get<int>();
        if (s.contains("fdStep")) out.solver.fd_step = s["fdStep"].get<double>();
        if (s.contains("samples")) out.solver.initial_samples = s["samples"].get<int>();
        if (!(out.solver.residual_tol > 0.0) || out.solver.max_newton_iters < 1 ||
            out.solver.continuation_steps < 1 || !(out.solver.fd_step > 0.0))
            throw ParseError("solver options must be positive");
    }
    return out;
}

ConfigFile load_config_file(const std::string& path) {
    return parse_config_json(read_file(path));
}

std::string solution_to_json(const CombSolution& sol, const QuantityReport& rep) {
    json j;
    j["config"] = {{"u", sol.config.u}, {"h", sol.config.h}};
    if (std::isfinite(sol.config.u_star)) j["config"]["u_star"] = sol.config.u_star;
    else j["config"]["u_star"] = nullptr;

    json gaps = json::array();
    for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
        const Gap& gap = sol.gaps.gaps[g];
        gaps.push_back({{"slit", sol.gap_slit[g]},
                        {"zminus", gap.lo},
                        {"c", gap.c},
                        {"zplus", gap.hi}});
    }
    j["gaps"] = gaps;

    json cont = json::array();
    for (const auto& rec : sol.continuation_path)
        cont.push_back({{"t", rec.t}, {"residual", rec.residual}, {"iters", rec.newton_iters}});
    j["solver"] = {{"residual", sol.residual},
                   {"iterations", sol.iterations},
                   {"continuation", cont}};

    j["quantities"] = {{"l", rep.l},
                       {"h", rep.h_computed},
                       {"u", rep.u_recovered},
                       {"A", rep.A},
                       {"J", rep.J},
                       {"mu_plus_abs", rep.mu_plus_abs},
                       {"mu_minus_abs", rep.mu_minus_abs},
                       {"mu_plus_sign", rep.mu_plus_sign},
                       {"mu_minus_sign", rep.mu_minus_sign},
                       {"nu", rep.nu},
                       {"L", rep.L},
                       {"e", rep.e},
                       {"d", rep.d},
                       {"Q0", rep.Q0},
                       {"I_D", rep.I_D}};
    if (rep.s_defined) j["quantities"]["s"] = rep.s;
    else j["quantities"]["s"] = nullptr;
    return j.dump(2);
}

std::string gaps_to_json(const GapSystem& gaps) {
    json arr = json::array();
    for (const Gap& gap : gaps.gaps)
        arr.push_back({{"zminus", gap.lo}, {"c", gap.c}, {"zplus", gap.hi}});
    return json{{"gaps", arr}}.dump(2);
}

GapSystem parse_gap_system_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw ParseError(std::string("invalid JSON: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("gaps") || !j["gaps"].is_array())
        throw ParseError("gap system must be an object with an array 'gaps'");
    GapSystem sys;
    for (const auto& g : j["gaps"]) {
        if (!g.is_object() || !g.contains("zminus") || !g.contains("zplus"))
            throw ParseError("each gap needs 'zminus' and 'zplus'");
        Gap gap;
        gap.lo = g["zminus"].get<double>();
        gap.hi = g["zplus"].get<double>();
        gap.c = g.contains("c") ? g["c"].get<double>() : 0.5 * (gap.lo + gap.hi);
        sys.gaps.push_back(gap);
    }
    try {
        sys.validate();
    } catch (const Error& ex) {
        throw ParseError(std::string("invalid gap system: ") + ex.what());
    }
    return sys;
}

GapSystem load_gap_system_file(const std::string& path) {
    return parse_gap_system_json(read_file(path));
}

std::string quantity_csv(const CombSolution& sol, const QuantityReport& rep) {
    std::ostringstream out;
    out << "n,u,h,l,A,J,mu_plus,mu_minus,nu,L,e,d\n";
    for (std::size_t n = 0; n < sol.config.size(); ++n) {
        out << n << ',' << fmt17(sol.config.u[n]) << ',' << fmt17(sol.config.h[n]) << ','
            << fmt17(rep.l[n]) << ',' << fmt17(rep.A[n]) << ',' << fmt17(rep.J[n]) << ','
            << fmt17(rep.mu_plus_sign[n] * rep.mu_plus_abs[n]) << ','
            << fmt17(rep.mu_minus_sign[n] * rep.mu_minus_abs[n]) << ',' << fmt17(rep.nu[n])
            << ',' << fmt17(rep.L[n]) << ',' << fmt17(rep.e[n]) << ',' << fmt17(rep.d[n])
            << '\n';
    }
    return out.str();
}

namespace {

json check_to_json(const CheckResult& r) {
    return {{"checkId", r.id},   {"lhs", r.lhs},       {"rhs", r.rhs},
            {"margin", r.margin}, {"passed", r.passed}, {"instance", r.instance}};
}

} // namespace

std::string checks_to_json(const std::vector<CheckResult>& results, std::uint64_t seed) {
    json arr = json::array();
    int violations = 0;
    for (const auto& r : results) {
        arr.push_back(check_to_json(r));
        if (r.applicable && !r.passed) ++violations;
    }
    json j{{"seed", seed}, {"violations", violations}, {"results", arr}};
    return j.dump(2);
}

std::string checks_to_table(const std::vector<CheckResult>& results) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %14s %14s %12s %-6s %s\n", "checkId", "lhs",
                  "rhs", "margin", "status", "instance");
    out << line;
    for (const auto& r : results) {
        const char* status = !r.applicable ? "n/a" : (r.passed ? "pass" : "FAIL");
        std::snprintf(line, sizeof(line), "%-12s %14.6g %14.6g %12.3g %-6s %s\n",
                      r.id.c_str(), r.lhs, r.rhs, r.margin, status, r.instance.c_str());
        out << line;
    }
    return out.str();
}

std::string ensemble_to_json(const EnsembleReport& rep) {
    json arr = json::array();
    for (const auto& o : rep.outcomes) {
        json inst{{"instance", o.instance}, {"solved", o.solved}};
        if (!o.solved) inst["error"] = o.error;
        json results = json::array();
        for (const auto& r : o.results) results.push_back(check_to_json(r));
        inst["results"] = results;
        arr.push_back(inst);
    }
    json j{{"seed", rep.spec.seed},
           {"count", rep.spec.count},
           {"violations", rep.violations},
           {"solverFailures", rep.solver_failures},
           {"checksRun", rep.checks_run},
           {"notApplicable", rep.not_applicable},
           {"instances", arr}};
    return j.dump(2);
}

std::string ensemble_to_table(const EnsembleReport& rep) {
    std::ostringstream out;
    out << "# seed " << rep.spec.seed << "  count " << rep.spec.count << "  checks "
        << rep.checks_run << "  violations " << rep.violations << "  failures "
        << rep.solver_failures << "  n/a " << rep.not_applicable << "\n";
    // aggregate worst margin per check id
    struct Agg {
        double worst = std::numeric_limits<double>::infinity();
        int runs = 0;
        int fails = 0;
        std::string context;
    };
    std::map<std::string, Agg> byId;
    for (const auto& o : rep.outcomes)
        for (const auto& r : o.results) {
            if (!r.applicable) continue;
            Agg& a = byId[r.id];
            ++a.runs;
            if (!r.passed) ++a.fails;
            double scaled = r.margin / std::max(1.0, std::abs(r.rhs));
            if (scaled < a.worst) {
                a.worst = scaled;
                a.context = r.instance;
            }
        }
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %6s %6s %14s  %s\n", "checkId", "runs", "fails",
                  "worstMargin", "at");
    out << line;
    for (const auto& [id, a] : byId) {
        std::snprintf(line, sizeof(line), "%-12s %6d %6d %14.4g  %s\n", id.c_str(), a.runs,
                      a.fails, a.worst, a.context.c_str());
        out << line;
    }
    for (const auto& o : rep.outcomes)
        if (!o.solved) out << "solver failure: " << o.instance << ": " << o.error << "\n";
    return out.str();
}

} // namespace combmap
