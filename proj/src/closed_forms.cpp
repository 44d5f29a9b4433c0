#include "combmap/closed_forms.hpp"

#include <cmath>
#include <numbers>

#include "combmap/errors.hpp"
#include "combmap/quadrature.hpp"

namespace combmap {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::complex<double> single_slit_map(std::complex<double> k, double u0, double h) {
    std::complex<double> d = k - u0;
    if (d.real() == 0.0 && std::abs(d.imag()) <= h)
        throw OnSlit("argument lies on the slit");
    if (h == 0.0) return d;
    // d * sqrt(1 + h^2/d^2): the principal square root puts the cut exactly
    // on the slit and keeps f ~ k - u0 at infinity
    return d * std::sqrt(1.0 + (h * h) / (d * d));
}

double uniform_comb_gap_length(double H) {
    if (H <= 0.0) return 0.0;
    return 2.0 * std::asin(std::tanh(H));
}

CombSolution solve_two_slit_eta(double M, const SolverOptions& opts) {
    SlitConfig eta = SlitConfig::validated({-1.0, 1.0}, {M, M});
    return solve_forward(eta, opts);
}

std::complex<double> three_slit_nesting(std::complex<double> k, double h0,
                                        const CombSolution& etaSolution) {
    const Quasimomentum& qm = *etaSolution.qm;
    std::complex<double> zk = qm.invert(k);
    double b = std::abs(qm.invert(std::complex<double>(0.0, h0)));
    std::complex<double> s = std::sqrt(zk * zk + b * b);
    if (s.imag() < 0.0) s = -s;
    if (s.imag() == 0.0 && zk.real() != 0.0 && std::signbit(s.real()) != std::signbit(zk.real()))
        s = -s;
    return s;
}

std::complex<double> three_slit_nesting(std::complex<double> k, double h0, double M) {
    CombSolution eta = solve_two_slit_eta(M);
    return three_slit_nesting(k, h0, eta);
}

namespace {

// uStar/2 = alpha * U(eps), hPlus = alpha * H(eps), eps = beta/alpha > 1
double cs_U(double eps, int n) {
    return gauss_integrate(
        [&](double phi) {
            double s = std::sin(phi);
            return std::sqrt(eps * eps - s * s);
        },
        0.0, 0.5 * kPi, n);
}

double cs_H(double eps, int n) {
    double a = eps * eps - 1.0;
    return a * gauss_integrate(
                   [&](double phi) {
                       double s = std::sin(phi), c = std::cos(phi);
                       return c * c / std::sqrt(1.0 + a * s * s);
                   },
                   0.0, 0.5 * kPi, n);
}

} // namespace

ChristoffelSchwarzConstants cs_constants(double uStar, double hPlus) {
    if (!(uStar > 0.0) || !(hPlus > 0.0))
        throw Error("cs_constants requires positive uStar and hPlus");
    const int n = 192;
    const double target = 2.0 * hPlus / uStar; // = H(eps)/U(eps)
    double lo = 1.0 + 1e-14, hi = 2.0;
    auto ratio = [&](double eps) { return cs_H(eps, n) / cs_U(eps, n); };
    int expand = 0;
    while (ratio(hi) < target) {
        hi *= 2.0;
        if (++expand > 60) throw NonConvergence("cs_constants bracket expansion failed");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (ratio(mid) < target) lo = mid;
        else hi = mid;
    }
    double eps = 0.5 * (lo + hi);
    ChristoffelSchwarzConstants out;
    out.alpha = 0.5 * uStar / cs_U(eps, n);
    out.beta = eps * out.alpha;

    auto [i1, i2] = cs_residual(out, uStar, hPlus);
    if (std::abs(i1 - 0.5 * uStar) > 1e-10 * std::max(1.0, uStar) ||
        std::abs(i2 - hPlus) > 1e-10 * std::max(1.0, hPlus))
        throw NonConvergence("cs_constants residual check failed");
    return out;
}

std::pair<double, double> cs_residual(const ChristoffelSchwarzConstants& c, double uStar,
                                      double hPlus) {
    (void)uStar;
    (void)hPlus;
    const int n = 256;
    double eps = c.beta / c.alpha;
    double i1 = c.alpha * cs_U(eps, n);
    double i2 = c.alpha * cs_H(eps, n);
    return {i1, i2};
}

} // namespace combmap
