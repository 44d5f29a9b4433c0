#include "combmap/estimates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "combmap/closed_forms.hpp"
#include "combmap/errors.hpp"
#include "combmap/rng.hpp"

namespace combmap {

namespace {

constexpr double kPi = std::numbers::pi;

double conjugate_exponent(double p) {
    if (p <= 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

std::string with_tag(const std::string& instance, const std::string& tag) {
    return tag.empty() ? instance : instance + tag;
}

// worst (smallest-margin) gap of a per-gap inequality
template <typename LhsFn, typename RhsFn>
CheckResult worst_gap_check(const std::string& id, const CombSolution& sol, LhsFn lhs,
                            RhsFn rhs, const std::string& instance) {
    double wl = 0.0, wr = 0.0, worst = std::numeric_limits<double>::infinity();
    long worstSlit = -1;
    for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
        double l = lhs(static_cast<int>(g));
        double r = rhs(static_cast<int>(g));
        double margin = r - l;
        if (margin < worst) {
            worst = margin;
            wl = l;
            wr = r;
            worstSlit = static_cast<long>(sol.gap_slit[g]);
        }
    }
    if (worstSlit < 0) return make_check(id, 0.0, 0.0, with_tag(instance, "[h=0]"));
    std::ostringstream tag;
    tag << "#n" << worstSlit;
    return make_check(id, wl, wr, with_tag(instance, tag.str()));
}

double alpha_p(double p, double uStar) {
    // (2^(p+2) (2+pi) / u_*)^p / pi
    double base = std::pow(2.0, p + 2.0) * (2.0 + kPi) / uStar;
    return std::pow(base, p) / kPi;
}

} // namespace

CheckResult make_check(std::string id, double lhs, double rhs, std::string instance) {
    CheckResult r;
    r.id = std::move(id);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.passed = lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
    r.instance = std::move(instance);
    return r;
}

CheckResult skipped_check(std::string id, std::string instance, const std::string& why) {
    CheckResult r;
    r.id = std::move(id);
    r.applicable = false;
    r.passed = true;
    r.instance = instance + "[n/a:" + why + "]";
    return r;
}

std::vector<double> weight_vector(WeightRule rule, const SlitConfig& config) {
    std::vector<double> w(config.size(), 1.0);
    if (rule == WeightRule::QuadPosition)
        for (std::size_t n = 0; n < config.size(); ++n)
            w[n] = std::max(1.0, 4.0 * config.u[n] * config.u[n]);
    return w;
}

const char* weight_rule_name(WeightRule rule) {
    return rule == WeightRule::Unit ? "unit" : "quad";
}

bool matches_filter(const std::string& id, const std::vector<std::string>& filters) {
    if (filters.empty()) return true;
    for (const auto& f : filters)
        if (id.rfind(f, 0) == 0) return true;
    return false;
}

std::vector<CheckResult> apply_filter(std::vector<CheckResult> results,
                                      const std::vector<std::string>& filters) {
    if (filters.empty()) return results;
    std::vector<CheckResult> out;
    for (auto& r : results)
        if (matches_filter(r.id, filters)) out.push_back(std::move(r));
    return out;
}

std::vector<CheckResult> check_basic(const CombSolution& sol, const QuantityReport& rep,
                                     const std::string& instance) {
    std::vector<CheckResult> out;
    const auto& qm = *sol.qm;

    out.push_back(worst_gap_check(
        "1.3", sol, [&](int g) { return qm.length(g); },
        [&](int g) { return 2.0 * qm.height(g); }, instance));

    double sumA = 0.0, sumAq = 0.0, sumJ2 = 0.0, sumHL = 0.0;
    for (std::size_t n = 0; n < rep.A.size(); ++n) {
        sumA += rep.A[n];
        sumJ2 += rep.J[n] * rep.J[n];
        sumHL += rep.h_computed[n] * rep.l[n];
    }
    for (std::size_t g = 0; g < sol.gaps.size(); ++g)
        sumAq += qm.action_quadrature(static_cast<int>(g));
    double l2 = lp_norm(rep.l, 2.0);

    out.push_back(make_check("1.5/lower", 0.25 * l2 * l2, 2.0 * rep.Q0, instance));
    out.push_back(make_check("1.5/identity", std::abs(2.0 * rep.Q0 - sumAq),
                             1e-7 * std::max(1.0, rep.Q0), instance));
    out.push_back(make_check("1.5/J", std::abs(sumA - sumJ2),
                             1e-12 * std::max(1.0, sumA), instance));
    out.push_back(make_check("1.5/upper", 2.0 * rep.Q0, 2.0 / kPi * sumHL, instance));

    out.push_back(worst_gap_check(
        "2.28", sol, [&](int g) { return qm.tip_mass(g); },
        [&](int g) { return qm.height(g); }, instance));

    double hInf = lp_norm(rep.h_computed, std::numeric_limits<double>::infinity());
    out.push_back(make_check("2.29", hInf * hInf, 2.0 * rep.Q0, instance));

    out.push_back(worst_gap_check(
        "2.30/lower", sol,
        [&](int g) {
            double l = qm.length(g), h = qm.height(g);
            return std::max(0.25 * l * l, l * h / kPi);
        },
        [&](int g) { return qm.action(g); }, instance));
    out.push_back(worst_gap_check(
        "2.30/upper", sol, [&](int g) { return qm.action(g); },
        [&](int g) { return 2.0 * qm.length(g) * qm.height(g) / kPi; }, instance));

    out.push_back(worst_gap_check(
        "2.10/gap", sol, [&](int g) { return qm.length(g); },
        [&](int g) {
            auto [mm, mp] = qm.effective_masses(g);
            return 2.0 * std::min(std::abs(mm), std::abs(mp));
        },
        instance));

    double l1 = lp_norm(rep.l, 1.0);
    double h1 = lp_norm(rep.h_computed, 1.0);
    out.push_back(make_check("3.19/lower", kPi * rep.Q0, hInf * l1, instance));
    out.push_back(make_check("3.19/upper", hInf * l1, 2.0 / kPi * l1 * l1, instance));
    out.push_back(make_check("3.20/hinf", hInf, 2.0 / kPi * l1, instance));
    out.push_back(make_check("3.20/l1", l1, 2.0 * h1, instance));
    return out;
}

std::vector<CheckResult> check_theorem_1_1(const CombSolution& sol, const QuantityReport& rep,
                                           double p, const std::string& instance) {
    std::vector<CheckResult> out;
    (void)sol;
    std::ostringstream tagOss;
    tagOss << "@p=" << p;
    std::string tagged = with_tag(instance, tagOss.str());
    const double uStar = sol.config.u_star;

    if (p <= 2.0 + 1e-12) {
        double a = alpha_p(p, uStar);
        double lN = lp_norm(rep.l, p);
        double hN = lp_norm(rep.h_computed, p);
        double jN = lp_norm(rep.J, p);
        out.push_back(make_check("2.2", hN, 2.0 * lN * (1.0 + a * std::pow(lN, p)), tagged));
        out.push_back(make_check("2.4/lower", 0.5 * lN, jN, tagged));
        out.push_back(make_check(
            "2.4/upper", jN,
            2.0 / std::sqrt(kPi) * lN * std::sqrt(1.0 + a * std::pow(lN, p)), tagged));
        out.push_back(make_check("2.5/lower", 0.5 * std::sqrt(kPi) * jN, hN, tagged));
        out.push_back(make_check(
            "2.5/upper", hN,
            4.0 * jN * (1.0 + a * std::pow(2.0, p) * std::pow(jN, p)), tagged));
    }
    if (p >= 2.0 - 1e-12) {
        double q = conjugate_exponent(p);
        double Cp = std::pow(kPi * kPi / 2.0, 1.0 / p);
        double lq = lp_norm(rep.l, q);
        double hN = lp_norm(rep.h_computed, p);
        double bracket =
            std::isinf(uStar)
                ? 1.0
                : 1.0 + std::pow(2.0 * Cp / (kPi * uStar), 2.0 / (p - 1.0)) *
                            std::pow(lq, 2.0 / (p - 1.0));
        out.push_back(make_check("2.3", hN, 2.0 / kPi * Cp * Cp * lq * bracket, tagged));
    }
    return out;
}

std::vector<CheckResult> check_theorem_1_2(const CombSolution& sol, const QuantityReport& rep,
                                           double p, WeightRule rule,
                                           const std::string& instance) {
    std::vector<CheckResult> out;
    std::ostringstream tagOss;
    tagOss << "@p=" << p << ",w=" << weight_rule_name(rule);
    std::string tagged = with_tag(instance, tagOss.str());

    const double uStar = sol.config.u_star;
    const double hInf = lp_norm(rep.h_computed, std::numeric_limits<double>::infinity());
    const double xi = std::isinf(uStar) ? 1.0 : std::exp(hInf / uStar);
    NormSpec spec{p, weight_vector(rule, sol.config)};

    double lN = weighted_norm(rep.l, spec);
    double hN = weighted_norm(rep.h_computed, spec);
    double jN = weighted_norm(rep.J, spec);
    double mpN = weighted_norm(rep.mu_plus_abs, spec);
    double mmN = weighted_norm(rep.mu_minus_abs, spec);
    double mpInf = lp_norm(rep.mu_plus_abs, std::numeric_limits<double>::infinity());
    double mmInf = lp_norm(rep.mu_minus_abs, std::numeric_limits<double>::infinity());

    double q = conjugate_exponent(p);
    double a = alpha_p(p, uStar);
    double arm3 = 2.0 * std::pow(kPi, -1.0 / p) * lN *
                  std::pow(1.0 + a * std::pow(lN, p), std::isinf(q) ? 0.0 : 1.0 / q);
    double rhs26 = std::min({2.0 * kPi * std::min(mpInf, mmInf), jN, arm3});
    out.push_back(make_check("2.6", hInf, rhs26, tagged));

    out.push_back(make_check("2.7/lower", lN, 2.0 * hN, tagged));
    out.push_back(make_check("2.7/upper", 2.0 * hN, std::pow(xi, 9.0) * lN, tagged));
    out.push_back(make_check("2.8/lower", lN, 2.0 * jN, tagged));
    out.push_back(make_check("2.8/upper", 2.0 * jN, std::pow(xi, 5.0) * 2.0 * lN, tagged));
    out.push_back(make_check("2.9/lower", 0.5 * std::sqrt(kPi) * jN, hN, tagged));
    out.push_back(
        make_check("2.9/upper", hN, std::pow(xi, 5.0) * std::sqrt(kPi / 2.0) * jN, tagged));
    out.push_back(make_check("2.10/lower", lN, 2.0 * std::min(mpN, mmN), tagged));
    out.push_back(make_check("2.10/upper", 2.0 * std::max(mpN, mmN),
                             std::pow(xi, 18.0) * lN, tagged));
    return out;
}

std::vector<CheckResult> check_prop_3_6(const CombSolution& sol, const QuantityReport& rep,
                                        double p, const std::string& instance) {
    (void)sol;
    std::vector<CheckResult> out;
    std::ostringstream tagOss;
    tagOss << "@p=" << p;
    std::string tagged = with_tag(instance, tagOss.str());
    double q = conjugate_exponent(p);
    double hp = lp_norm(rep.h_computed, p);
    double lq = lp_norm(rep.l, q);
    out.push_back(make_check("3.17", kPi * rep.Q0, hp * lq, tagged));
    if (p <= 2.0 + 1e-12) {
        double lp = lp_norm(rep.l, p);
        double rhs = std::pow(2.0 / kPi, 2.0 / p) * std::pow(hp, std::isinf(q) ? 0.0 : 2.0 / q) *
                     std::pow(lp, 2.0 / p);
        out.push_back(make_check("3.18", rep.I_D, rhs, tagged));
    }
    return out;
}

std::vector<CheckResult> check_theorem_3_3_and_3_5(const CombSolution& sol,
                                                   const QuantityReport& rep,
                                                   bool includeLocal, double rScale,
                                                   const std::string& instance) {
    std::vector<CheckResult> out;
    const auto& qm = *sol.qm;
    const double uStar = sol.config.u_star;

    double h2 = lp_norm(rep.h_computed, 2.0);
    double l2 = lp_norm(rep.l, 2.0);
    double j2 = lp_norm(rep.J, 2.0);
    out.push_back(make_check("3.6/lower", kPi / 4.0 * rep.I_D, h2 * h2, instance));
    double factor = std::isinf(uStar) ? 1.0 : std::max(1.0, std::sqrt(rep.I_D) / uStar);
    out.push_back(
        make_check("3.6/upper", h2 * h2, kPi * kPi / 2.0 * factor * rep.I_D, instance));
    out.push_back(make_check("3.8/lower", 0.5 * l2, j2, instance));
    double bracket = std::isinf(uStar) ? 1.0 : 1.0 + std::numbers::sqrt2 / uStar * l2;
    out.push_back(make_check("3.8/upper", j2, std::numbers::sqrt2 * l2 * bracket, instance));

    if (!includeLocal) return out;

    double hmax = rep.h_computed.empty()
                      ? 0.0
                      : *std::max_element(rep.h_computed.begin(), rep.h_computed.end());
    double r = std::isfinite(uStar) ? rScale * uStar : std::max(1.0, 2.0 * hmax);

    if (sol.gaps.empty()) {
        out.push_back(skipped_check("3.3", instance, "h=0"));
        out.push_back(skipped_check("3.10", instance, "h=0"));
        out.push_back(skipped_check("3.11/upper", instance, "h=0"));
        out.push_back(skipped_check("3.12/upper", instance, "h=0"));
        return out;
    }

    // Eq-3.3-style rectangle bound holds for every gap and any r
    out.push_back(worst_gap_check(
        "3.3", sol, [&](int g) { double h = qm.height(g); return 2.0 * h * h; },
        [&](int g) {
            double h = qm.height(g);
            return kPi * std::max(1.0, h / r) * qm.local_dirichlet_rect(g, r);
        },
        instance));

    // small-slit strip estimates under their hypothesis
    struct LocalRow {
        int g;
        double I;
    };
    std::vector<LocalRow> rows;
    for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
        std::size_t n = sol.gap_slit[g];
        double un = sol.config.u[n];
        double left = n == 0 ? -std::numeric_limits<double>::infinity() : sol.config.u[n - 1];
        double right = n + 1 == sol.config.size() ? std::numeric_limits<double>::infinity()
                                                  : sol.config.u[n + 1];
        bool fits = (un - r > left) && (un + r < right);
        bool smallEnough = qm.height(static_cast<int>(g)) <= 0.5 * r;
        if (fits && smallEnough)
            rows.push_back({static_cast<int>(g), qm.local_dirichlet(static_cast<int>(g), r)});
    }
    if (rows.empty()) {
        out.push_back(skipped_check("3.10", instance, "hypothesis"));
        out.push_back(skipped_check("3.11/upper", instance, "hypothesis"));
        out.push_back(skipped_check("3.12/upper", instance, "hypothesis"));
        return out;
    }

    const double c35 = (2.0 + kPi) / r;
    double worst10 = std::numeric_limits<double>::infinity();
    CheckResult res10;
    double worst11 = std::numeric_limits<double>::infinity();
    CheckResult res11;
    double worst12 = std::numeric_limits<double>::infinity();
    CheckResult res12;
    for (const auto& row : rows) {
        double h = qm.height(row.g);
        double sq = std::sqrt(row.I);
        auto [mm, mp] = qm.effective_masses(row.g);
        std::ostringstream tag;
        tag << "#n" << sol.gap_slit[row.g];
        for (double mu : {std::abs(mm), std::abs(mp)}) {
            CheckResult c =
                make_check("3.10", std::abs(h - mu), c35 * mu * sq, with_tag(instance, tag.str()));
            if (c.margin < worst10) { worst10 = c.margin; res10 = c; }
        }
        CheckResult c11 = make_check("3.11/upper", h - qm.tip_mass(row.g), 2.0 * c35 * h * sq,
                                     with_tag(instance, tag.str()));
        if (c11.margin < worst11) { worst11 = c11.margin; res11 = c11; }
        CheckResult c12 = make_check("3.12/upper", h - 0.5 * qm.length(row.g), c35 * h * sq,
                                     with_tag(instance, tag.str()));
        if (c12.margin < worst12) { worst12 = c12.margin; res12 = c12; }
    }
    out.push_back(res10);
    out.push_back(worst_gap_check(
        "3.11/lower", sol, [&](int g) { return qm.tip_mass(g); },
        [&](int g) { return qm.height(g); }, instance));
    out.push_back(res11);
    out.push_back(worst_gap_check(
        "3.12/lower", sol, [&](int g) { return 0.5 * qm.length(g); },
        [&](int g) { return qm.height(g); }, instance));
    out.push_back(res12);
    return out;
}

std::vector<CheckResult> check_lemma_3_8(const CombSolution& sol, const QuantityReport& rep,
                                         const std::string& instance) {
    std::vector<CheckResult> out;
    const auto& qm = *sol.qm;
    const double uStar = sol.config.u_star;
    if (sol.gaps.size() < 2 || !std::isfinite(uStar)) {
        for (const char* id : {"3.33/lower", "3.33/upper", "3.34", "3.35", "3.36/a", "3.36/b",
                               "3.36/c"})
            out.push_back(skipped_check(id, instance, "needs >= 2 gaps"));
        return out;
    }

    const double s = sol.gaps.min_interior_band();
    const double hInf = lp_norm(rep.h_computed, std::numeric_limits<double>::infinity());
    const double xi = std::exp(hInf / uStar);

    out.push_back(make_check("3.33/lower", s, uStar, instance));
    out.push_back(make_check("3.33/upper", uStar,
                             kPi * s / 2.0 *
                                 std::max(std::exp(2.0), std::pow(xi, 5.0 * kPi / 2.0)),
                             instance));
    out.push_back(
        make_check("3.34", 1.0 + 2.0 * hInf / (s * kPi), std::pow(xi, 9.0), instance));

    // sampled sup of the profile correction V_n
    std::vector<double> vmax(sol.gaps.size(), 0.0);
    std::vector<double> vc(sol.gaps.size(), 0.0);
    for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
        const Gap& gap = sol.gaps.gaps[g];
        vc[g] = qm.v_ratio_correction(static_cast<int>(g), gap.c);
        double m = vc[g];
        for (int k = 1; k <= 7; ++k) {
            double x = gap.mid() + gap.half() * std::cos(kPi * k / 8.0);
            m = std::max(m, qm.v_ratio_correction(static_cast<int>(g), x));
        }
        vmax[g] = m;
    }
    double supV = *std::max_element(vmax.begin(), vmax.end());
    out.push_back(make_check("3.35", supV, 2.0 * hInf / (kPi * s), instance));

    out.push_back(worst_gap_check(
        "3.36/a", sol, [&](int g) { return 2.0 * qm.height(g); },
        [&](int g) { return qm.length(g) * (1.0 + vc[g]); }, instance));
    out.push_back(worst_gap_check(
        "3.36/b", sol, [&](int g) { return qm.length(g) * (1.0 + vmax[g]); },
        [&](int g) { return qm.length(g) * (1.0 + 2.0 * hInf / (kPi * s)); }, instance));
    out.push_back(worst_gap_check(
        "3.36/c", sol,
        [&](int g) { return qm.length(g) * (1.0 + 2.0 * hInf / (kPi * s)); },
        [&](int g) { return qm.length(g) * std::pow(xi, 9.0); }, instance));
    return out;
}

std::vector<CheckResult> check_theorem_1_5(const CombSolution& sol, const QuantityReport& rep,
                                           const std::string& instance) {
    std::vector<CheckResult> out;
    auto [lo, hi] = greedy_energy_bounds(sol.config);
    out.push_back(make_check("2.16/lower", lo, rep.Q0, instance));
    out.push_back(make_check("2.16/upper", rep.Q0, hi, instance));
    return out;
}

std::vector<CheckResult> check_identity_3_32(const CombSolution& sol,
                                             const std::string& instance, int points) {
    std::vector<CheckResult> out;
    const auto& qm = *sol.qm;
    if (sol.gaps.empty()) {
        out.push_back(skipped_check("3.32", instance, "h=0"));
        return out;
    }
    double wl = 0.0, wr = 0.0, worst = std::numeric_limits<double>::infinity();
    long worstSlit = -1;
    for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
        const Gap& gap = sol.gaps.gaps[g];
        double h = qm.height(static_cast<int>(g));
        double maxres = 0.0;
        for (int k = 1; k <= points; ++k) {
            double x = gap.mid() + gap.half() * std::cos(kPi * k / (points + 1));
            double v = qm.v_on_gap(static_cast<int>(g), x);
            double vn = std::sqrt(std::abs((x - gap.lo) * (x - gap.hi)));
            double V = qm.v_ratio_correction(static_cast<int>(g), x);
            maxres = std::max(maxres, std::abs(v - vn * (1.0 + V)));
        }
        double rhs = 1e-6 * std::max(h, 1e-12);
        if (rhs - maxres < worst) {
            worst = rhs - maxres;
            wl = maxres;
            wr = rhs;
            worstSlit = static_cast<long>(sol.gap_slit[g]);
        }
    }
    std::ostringstream tag;
    tag << "#n" << worstSlit;
    out.push_back(make_check("3.32", wl, wr, with_tag(instance, tag.str())));
    return out;
}

std::vector<CheckResult> run_all_checks(const CombSolution& sol, const CheckOptions& opts,
                                        const std::string& instance) {
    QuantityReport rep = compute_quantities(sol);
    std::vector<CheckResult> out;
    auto append = [&](std::vector<CheckResult> v) {
        for (auto& r : v) out.push_back(std::move(r));
    };
    append(check_basic(sol, rep, instance));
    std::vector<double> ps = opts.p_low;
    for (double p : opts.p_high)
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    for (double p : ps) append(check_theorem_1_1(sol, rep, p, instance));
    for (double p : opts.p_low) {
        for (WeightRule rule : opts.weights)
            append(check_theorem_1_2(sol, rep, p, rule, instance));
        append(check_prop_3_6(sol, rep, p, instance));
    }
    append(check_theorem_3_3_and_3_5(sol, rep, opts.include_local, opts.local_r_scale,
                                     instance));
    append(check_lemma_3_8(sol, rep, instance));
    append(check_theorem_1_5(sol, rep, instance));
    append(check_identity_3_32(sol, instance));
    return out;
}

// ---------------------------------------------------------------------------

SlitConfig random_config(const EnsembleSpec& spec, std::uint64_t index) {
    Rng rng(spec.seed ^ (0x517CC1B727220A95ull * (index + 1)));
    int N = rng.uniform_int(spec.n_min, spec.n_max);
    std::vector<double> u(N), h(N);
    double x = rng.uniform(-4.0, 0.0);
    for (int n = 0; n < N; ++n) {
        u[n] = x;
        x += spec.small_slits ? 1.0 : rng.uniform(spec.spacing_min, spec.spacing_max);
    }
    bool any = false;
    for (int n = 0; n < N; ++n) {
        if (spec.small_slits) {
            h[n] = rng.uniform(0.02, 0.2);
        } else {
            h[n] = rng.uniform() < spec.zero_height_prob ? 0.0 : rng.uniform(0.0, spec.h_max);
        }
        if (h[n] > 0.0) any = true;
    }
    if (!any) h[N / 2] = 0.1 + 0.4 * spec.h_max;
    return SlitConfig::validated(std::move(u), std::move(h));
}

int max_threads() {
    if (const char* env = std::getenv("COMBMAP_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

// runs fn(i) for i in [0, count) on a bounded pool; exceptions stay in fn
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int n = std::min(threads, count);
    pool.reserve(n);
    for (int t = 0; t < n; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace

EnsembleReport run_ensemble(const EnsembleSpec& spec, const CheckOptions& opts,
                            const std::vector<std::string>& filters) {
    EnsembleReport rep;
    rep.spec = spec;
    rep.outcomes.resize(spec.count);

    auto evaluate_instance = [&](int i) {
        SlitConfig cfg = random_config(spec, static_cast<std::uint64_t>(i));
        std::ostringstream name;
        name << "s" << spec.seed << ":i" << i << ":N" << cfg.size();
        InstanceOutcome outcome;
        outcome.instance = name.str();
        try {
            auto evaluate = [&](const SolverOptions& so) {
                CombSolution sol = solve_forward(cfg, so);
                return apply_filter(run_all_checks(sol, opts, name.str()), filters);
            };
            SolverOptions base;
            outcome.results = evaluate(base);
            bool near = false;
            for (const auto& r : outcome.results) {
                if (!r.applicable) continue;
                if (!r.passed || r.margin < 1e-6 * std::max(1.0, std::abs(r.rhs))) near = true;
            }
            if (near) {
                // refine quadrature and solver tolerance, then re-evaluate
                SolverOptions fine;
                fine.residual_tol = 1e-10;
                fine.initial_samples = 256;
                outcome.results = evaluate(fine);
            }
            outcome.solved = true;
        } catch (const std::exception& ex) {
            outcome.error = ex.what();
        }
        rep.outcomes[i] = std::move(outcome);
    };

    parallel_for(spec.count, max_threads(), evaluate_instance);

    for (const auto& o : rep.outcomes) {
        if (!o.solved) {
            ++rep.solver_failures;
            continue;
        }
        for (const auto& r : o.results) {
            ++rep.checks_run;
            if (!r.applicable) ++rep.not_applicable;
            else if (!r.passed) ++rep.violations;
        }
    }
    return rep;
}

LindelofEnsembleReport run_lindelof_pairs(std::uint64_t seed, int count,
                                          const SolverOptions& opts) {
    LindelofEnsembleReport rep;
    rep.pairs = count;
    rep.min_q0_gap = std::numeric_limits<double>::infinity();
    rep.min_length_margin = std::numeric_limits<double>::infinity();
    rep.min_y_margin = std::numeric_limits<double>::infinity();

    std::vector<LindelofReport> results(count);
    std::vector<std::string> errors(count);

    parallel_for(count, max_threads(), [&](int i) {
        Rng rng(seed ^ (0xD1B54A32D192ED03ull * (i + 1)));
        int N = rng.uniform_int(2, 5);
        std::vector<double> u(N), hb(N), hs(N);
        double x = rng.uniform(-3.0, 0.0);
        for (int n = 0; n < N; ++n) {
            u[n] = x;
            x += rng.uniform(1.0, 2.5);
        }
        for (int n = 0; n < N; ++n) hb[n] = rng.uniform(0.3, 2.0);
        std::vector<char> lower(N, 0);
        for (int n = 0; n < N; ++n) lower[n] = rng.uniform() < 0.5;
        if (std::count(lower.begin(), lower.end(), 1) == 0) lower[rng.uniform_int(0, N - 1)] = 1;
        if (std::count(lower.begin(), lower.end(), 1) == N) lower[rng.uniform_int(0, N - 1)] = 0;
        for (int n = 0; n < N; ++n)
            hs[n] = lower[n] ? hb[n] * rng.uniform(0.2, 0.8) : hb[n];
        try {
            results[i] = lindelof_pair_check(SlitConfig::validated(u, hs),
                                             SlitConfig::validated(u, hb), opts, 100, false);
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });

    for (int i = 0; i < count; ++i) {
        if (!errors[i].empty()) {
            ++rep.violations;
            rep.notes.push_back("pair " + std::to_string(i) + ": " + errors[i]);
            continue;
        }
        const LindelofReport& r = results[i];
        rep.min_q0_gap = std::min(rep.min_q0_gap, r.q0_big - r.q0_small);
        rep.min_length_margin = std::min(rep.min_length_margin, r.min_length_margin);
        rep.min_y_margin = std::min(rep.min_y_margin, r.min_y_margin);
        if (!r.q0_monotone || !r.q0_strict || !r.lengths_monotone || !r.y_dominates) {
            ++rep.violations;
            rep.notes.push_back("pair " + std::to_string(i) + ": monotonicity violated");
        }
    }
    return rep;
}

NestingEnsembleReport run_nesting_checks(std::uint64_t seed, int count, int points,
                                         double tol) {
    NestingEnsembleReport rep;
    rep.pairs = count;
    rep.points_per_pair = points;
    rep.min_bound_margin = std::numeric_limits<double>::infinity();

    std::vector<double> devs(count, 0.0), margins(count, 0.0);
    std::vector<std::string> errors(count);

    parallel_for(count, max_threads(), [&](int i) {
        Rng rng(seed ^ (0xA0761D6478BD642Full * (i + 1)));
        double h0 = rng.uniform(0.2, 2.0);
        double M = rng.uniform(0.2, 2.0);
        try {
            CombSolution eta = solve_two_slit_eta(M);
            CombSolution sol3 =
                solve_forward(SlitConfig::validated({-1.0, 0.0, 1.0}, {M, h0, M}));
            double dev = 0.0;
            for (int pnt = 0; pnt < points; ++pnt) {
                double xr = rng.uniform(-2.5, 2.5);
                for (double un : {-1.0, 0.0, 1.0})
                    if (std::abs(xr - un) < 0.12) xr += 0.17;
                double yr = rng.uniform(0.25, 2.5);
                std::complex<double> k(xr, yr);
                std::complex<double> lhs = sol3.qm->invert(k);
                std::complex<double> rhs = three_slit_nesting(k, h0, eta);
                dev = std::max(dev, std::abs(lhs - rhs));
            }
            devs[i] = dev;
            int g0 = sol3.gap_of_slit(1);
            double l0 = g0 >= 0 ? sol3.gaps.gaps[g0].length() : 0.0;
            double bound = std::pow((M * M - h0 * h0 + 1.0) * (M * M - h0 * h0 + 1.0) +
                                        4.0 * h0 * h0,
                                    0.25);
            margins[i] = bound - l0;
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });

    bool ok = true;
    for (int i = 0; i < count; ++i) {
        if (!errors[i].empty()) {
            ok = false;
            continue;
        }
        rep.max_deviation = std::max(rep.max_deviation, devs[i]);
        rep.min_bound_margin = std::min(rep.min_bound_margin, margins[i]);
    }
    rep.passed = ok && rep.max_deviation <= tol && rep.min_bound_margin >= -1e-9;
    return rep;
}

CapacityEnsembleReport run_capacity_ensemble(std::uint64_t seed, int count) {
    CapacityEnsembleReport rep;
    rep.count = count;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed ^ (0x8BB84B93962EACC9ull * (i + 1)));
        int m = rng.uniform_int(1, 6);
        std::vector<std::pair<double, double>> iv;
        double x = rng.uniform(-5.0, 5.0);
        for (int j = 0; j < m; ++j) {
            double len = rng.uniform(0.1, 2.0);
            iv.emplace_back(x, x + len);
            x += len + rng.uniform(0.1, 2.0);
        }
        IntervalUnion E = IntervalUnion::validated(iv);
        double err = std::abs(ahlfors_derivative_at_infinity(E) - capacity(E));
        rep.max_derivative_error = std::max(rep.max_derivative_error, err);
        rep.max_abs_f = std::max(rep.max_abs_f, ahlfors_max_abs_sample(E, 200));
    }
    rep.passed = rep.max_derivative_error <= 1e-8 && rep.max_abs_f <= 1.0 + 1e-12;
    return rep;
}

// ---------------------------------------------------------------------------

SlitConfig example_config(int id, int size) {
    if (size < 1) throw Error("example size must be positive");
    std::vector<double> u, h;
    switch (id) {
        case 1:
            for (int n = -size; n <= size; ++n) {
                u.push_back(n);
                h.push_back(size);
            }
            break;
        case 2:
            for (int n = -size; n <= size; ++n) {
                u.push_back(n);
                h.push_back(size - std::abs(n));
            }
            break;
        case 3:
            for (int i = 0; i < size; ++i) {
                u.push_back(kPi * (i - size / 2));
                h.push_back(1.0);
            }
            break;
        default:
            throw Error("example id must be 1, 2, or 3");
    }
    return SlitConfig::validated(std::move(u), std::move(h));
}

ExampleReport reproduce_example(int id, int size, const SolverOptions& opts) {
    ExampleReport rep;
    rep.id = id;
    rep.size = size;
    std::ostringstream name;
    name << "example" << id << ":size" << size;

    if (id == 1) {
        CombSolution sol = solve_forward(example_config(1, size), opts);
        QuantityReport q = compute_quantities(sol);
        double N2 = static_cast<double>(size) * size;
        rep.chain.push_back(make_check("ex1/lower", N2, q.I_D, name.str()));
        rep.chain.push_back(make_check("ex1/upper", q.I_D, 16.0 * N2, name.str()));
        std::ostringstream line;
        line << "N=" << size << "  ||h||_inf^2=" << N2 << "  I_D=" << q.I_D
             << "  16N^2=" << 16.0 * N2;
        rep.lines.push_back(line.str());
    } else if (id == 2) {
        CombSolution sol = solve_forward(example_config(2, size), opts);
        QuantityReport q = compute_quantities(sol);
        double l1 = lp_norm(q.l, 1.0);
        double l2 = lp_norm(q.l, 2.0);
        double bound = 8.0 * std::pow(8.0, 0.25) * std::pow(double(size), 1.5);
        rep.chain.push_back(make_check("ex2/sum", l1, 8.0 * size, name.str()));
        rep.chain.push_back(make_check("ex2/norm", l2 * l2, bound, name.str()));
        SlitCapacityReport cap = slit_union_capacity_check(sol);
        rep.chain.push_back(make_check("ex2/cap", cap.quarter, cap.diameter, name.str()));
        std::ostringstream line;
        line << "N=" << size << "  sum(l)=" << l1 << "  ||l||^2=" << l2 * l2
             << "  8*8^(1/4)*N^1.5=" << bound << "  diam=" << cap.diameter;
        rep.lines.push_back(line.str());
    } else if (id == 3) {
        for (double H : {0.5, 1.0, 2.0}) {
            SlitConfig cfg = example_config(3, size);
            for (auto& hh : cfg.h) hh = H;
            cfg = SlitConfig::validated(cfg.u, cfg.h);
            CombSolution sol = solve_forward(cfg, opts);
            int gc = sol.gap_of_slit(static_cast<std::size_t>(size / 2));
            double lc = gc >= 0 ? sol.gaps.gaps[gc].length() : 0.0;
            double expect = uniform_comb_gap_length(H);
            std::ostringstream line;
            line << "H=" << H << "  central l=" << lc << "  2*asin(tanh H)=" << expect
                 << "  err=" << std::abs(lc - expect);
            rep.lines.push_back(line.str());
            if (H == 1.0) {
                double tol = std::max(0.01, 0.6 / size);
                rep.chain.push_back(
                    make_check("ex3/err", std::abs(lc - expect), tol, name.str()));
            }
        }
    } else {
        throw Error("example id must be 1, 2, or 3");
    }

    rep.passed = true;
    for (const auto& c : rep.chain)
        if (!c.passed) rep.passed = false;
    return rep;
}

std::vector<CombLimitRow> uniform_comb_convergence(const std::vector<int>& sizes, double H,
                                                   const SolverOptions& opts) {
    std::vector<CombLimitRow> rows;
    for (int n : sizes) {
        SlitConfig cfg = example_config(3, n);
        for (auto& hh : cfg.h) hh = H;
        cfg = SlitConfig::validated(cfg.u, cfg.h);
        CombSolution sol = solve_forward(cfg, opts);
        int gc = sol.gap_of_slit(static_cast<std::size_t>(n / 2));
        CombLimitRow row;
        row.size = n;
        row.central_length = gc >= 0 ? sol.gaps.gaps[gc].length() : 0.0;
        row.expected = uniform_comb_gap_length(H);
        row.error = std::abs(row.central_length - row.expected);
        rows.push_back(row);
    }
    return rows;
}

} // namespace combmap
