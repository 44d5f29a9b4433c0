#include "combmap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "combmap/errors.hpp"

namespace combmap {

IntervalUnion IntervalUnion::validated(std::vector<std::pair<double, double>> intervals) {
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].first < intervals[i].second))
            throw Error("interval endpoints must satisfy a < b");
        if (i + 1 < intervals.size() && !(intervals[i].second < intervals[i + 1].first))
            throw Error("intervals must be pairwise disjoint");
    }
    return IntervalUnion{std::move(intervals)};
}

double total_length(const IntervalUnion& E) {
    double acc = 0.0;
    for (const auto& [a, b] : E.intervals) acc += b - a;
    return acc;
}

double capacity(const IntervalUnion& E) { return 0.25 * total_length(E); }

std::complex<double> phi(const IntervalUnion& E, std::complex<double> z) {
    if (z.imag() == 0.0) {
        for (const auto& [a, b] : E.intervals)
            if (z.real() >= a && z.real() <= b) throw OnSet("argument lies on the set");
    }
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [a, b] : E.intervals) acc += std::log((z - a) / (z - b));
    return acc;
}

std::complex<double> ahlfors(const IntervalUnion& E, std::complex<double> z) {
    // (exp(phi/2) - 1)/(exp(phi/2) + 1) = tanh(phi/4), overflow-safe
    return std::tanh(phi(E, z) / 4.0);
}

double ahlfors_derivative_at_infinity(const IntervalUnion& E) {
    if (E.empty()) return 0.0;
    double scale = 1.0;
    for (const auto& [a, b] : E.intervals) scale = std::max({scale, std::abs(a), std::abs(b)});
    const std::complex<double> dir = std::polar(1.0, std::numbers::pi / 4.0);
    auto g = [&](double r) {
        std::complex<double> z = r * dir;
        return (z * ahlfors(E, z)).real();
    };
    const double R = 1e6 * scale;
    return 2.0 * g(2.0 * R) - g(R); // removes the 1/z term
}

double ahlfors_max_abs_sample(const IntervalUnion& E, int count) {
    if (E.empty()) return 0.0;
    double lo = E.intervals.front().first, hi = E.intervals.back().second;
    double span = std::max(hi - lo, 1.0);
    double maxAbs = 0.0;
    int per = std::max(1, count / 4);
    for (int i = 0; i < per; ++i) {
        double s = (i + 0.5) / per;
        // ring around the set, two heights close to the line, and far field
        std::complex<double> pts[4] = {
            std::complex<double>(lo - 0.6 * span + (hi - lo + 1.2 * span) * s, 0.03 * span),
            std::complex<double>(lo + (hi - lo) * s, 0.5 * span),
            std::polar(2.0 * span, 2.0 * std::numbers::pi * s) +
                std::complex<double>(0.5 * (lo + hi), 0.0),
            std::complex<double>(lo + (hi - lo) * s, -0.1 * span),
        };
        for (const auto& z : pts) {
            bool onSet = false;
            if (z.imag() == 0.0)
                for (const auto& [a, b] : E.intervals)
                    if (z.real() >= a && z.real() <= b) onSet = true;
            if (onSet) continue;
            maxAbs = std::max(maxAbs, std::abs(ahlfors(E, z)));
        }
    }
    return maxAbs;
}

SlitCapacityReport slit_union_capacity_check(const CombSolution& sol) {
    SlitCapacityReport rep;
    for (const auto& gap : sol.gaps.gaps) rep.l1 += gap.length();
    rep.quarter = 0.25 * rep.l1;
    double diam = 0.0;
    const auto& u = sol.config.u;
    const auto& h = sol.config.h;
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) {
            double dx = u[i] - u[j];
            double dy = h[i] + h[j]; // farthest tips are on opposite sides
            diam = std::max(diam, std::hypot(dx, dy));
        }
    rep.diameter = diam;
    rep.bound_ok = rep.quarter <= rep.diameter + 1e-12 * std::max(1.0, rep.diameter);
    return rep;
}

} // namespace combmap
