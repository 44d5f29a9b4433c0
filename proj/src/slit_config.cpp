#include "combmap/slit_config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "combmap/errors.hpp"

namespace combmap {

SlitConfig SlitConfig::validated(std::vector<double> u, std::vector<double> h) {
    if (u.empty()) throw EmptyConfig("configuration has no slits");
    if (u.size() != h.size()) throw LengthMismatch("u and h must have equal length");
    for (std::size_t n = 0; n + 1 < u.size(); ++n)
        if (!(u[n + 1] > u[n]))
            throw NonIncreasingPositions("slit positions must be strictly increasing");
    for (double hn : h) {
        if (!(hn >= 0.0) || !std::isfinite(hn))
            throw NegativeHeight("slit heights must be finite and nonnegative");
    }
    for (double un : u)
        if (!std::isfinite(un)) throw NonIncreasingPositions("slit positions must be finite");

    SlitConfig cfg;
    cfg.u = std::move(u);
    cfg.h = std::move(h);
    if (cfg.u.size() == 1) {
        cfg.u_star = std::numeric_limits<double>::infinity();
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n + 1 < cfg.u.size(); ++n)
            best = std::min(best, cfg.u[n + 1] - cfg.u[n]);
        cfg.u_star = best;
    }
    return cfg;
}

double SlitConfig::max_height() const {
    double m = 0.0;
    for (double hn : h) m = std::max(m, hn);
    return m;
}

NormSpec NormSpec::weighted(double p, std::vector<double> omega) {
    if (!(p >= 1.0)) throw Error("norm exponent must satisfy p >= 1");
    for (double w : omega)
        if (!(w >= 1.0)) throw Error("norm weights must satisfy omega_n >= 1");
    return NormSpec{p, std::move(omega)};
}

double weighted_norm(std::span<const double> f, const NormSpec& spec) {
    if (!(spec.p >= 1.0)) throw Error("norm exponent must satisfy p >= 1");
    if (std::isinf(spec.p)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    if (!spec.omega.empty() && spec.omega.size() != f.size())
        throw LengthMismatch("weight vector length differs from sequence length");
    double acc = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        double w = spec.omega.empty() ? 1.0 : spec.omega[n];
        acc += w * std::pow(std::abs(f[n]), spec.p);
    }
    return std::pow(acc, 1.0 / spec.p);
}

double lp_norm(std::span<const double> f, double p) {
    return weighted_norm(f, NormSpec{p, {}});
}

std::vector<double> greedy_tilde(const SlitConfig& config) {
    const std::size_t n = config.size();
    std::vector<double> tilde(n, 0.0);
    std::vector<char> excluded(n, 0);
    for (;;) {
        // argmax over the still-admissible window B; smallest index wins ties
        int best = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (excluded[i] || config.h[i] <= 0.0) continue;
            if (best < 0 || config.h[i] > config.h[static_cast<std::size_t>(best)])
                best = static_cast<int>(i);
        }
        if (best < 0) break;
        const std::size_t k = static_cast<std::size_t>(best);
        tilde[k] = config.h[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (!(std::abs(config.u[i] - config.u[k]) > config.h[k])) excluded[i] = 1;
        }
    }
    return tilde;
}

std::pair<double, double> greedy_energy_bounds(const SlitConfig& config) {
    std::vector<double> tilde = greedy_tilde(config);
    double sq = 0.0;
    for (double v : tilde) sq += v * v;
    const double pi = std::numbers::pi;
    return {sq / (pi * pi), 2.0 * std::numbers::sqrt2 * sq / pi};
}

} // namespace combmap
