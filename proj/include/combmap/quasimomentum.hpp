#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "combmap/gap_system.hpp"

namespace combmap {

struct QuadratureSettings {
    int initial_samples = 64;   // per-gap theta samples, power of two
    int max_samples = 16384;
    double series_tol = 1e-13;  // relative tail target for the cosine coefficients
    double closure_tol = 1e-11; // gap-closure residual, relative to max(1, h_n)
    bool adaptive = true;
    std::vector<int> fixed_samples; // non-empty: per-gap sample counts, no adaptivity
};

// Inverse direction of the comb mapping. Given interlaced gaps on the real
// line, the derivative of the inverse map is the finite-gap product
//
//   k'(z) = prod_n (z - c_n) / sqrt((z - lo_n)(z - hi_n)),
//
// with the branch real and positive on the real axis right of all gaps and
// k'(z) -> 1 at infinity. The critical points c_n are fixed by the gap-closure
// conditions Im k(hi_n) = 0. On each gap the boundary value of Im k is
// represented by a sine series in the Chebyshev angle, which yields closed
// forms for k(z) everywhere in the closed upper half-plane.
class Quasimomentum {
public:
    Quasimomentum() = default; // empty system: identity map

    // Uses the given critical points as a warm start, enforces closure, builds
    // the series. Throws InvalidInterlacing / NewtonDivergence.
    explicit Quasimomentum(GapSystem gaps, QuadratureSettings settings = {});

    // Endpoints only; critical points start at the gap midpoints.
    static Quasimomentum solve(const std::vector<std::pair<double, double>>& endpoints,
                               QuadratureSettings settings = {});

    const GapSystem& gap_system() const { return system_; }
    int count() const { return static_cast<int>(system_.gaps.size()); }
    const QuadratureSettings& settings() const { return settings_; }
    std::vector<int> sample_counts() const;

    // k'(z); real z is treated as the boundary value from the upper half-plane.
    std::complex<double> derivative(std::complex<double> z) const;
    // k(z), normalized by k(z) - z -> 0 at infinity.
    std::complex<double> value(std::complex<double> z) const;

    // z(k): local inversion of the map by damped Newton.
    std::complex<double> invert(std::complex<double> k, std::complex<double> guess) const;
    std::complex<double> invert(std::complex<double> k) const { return invert(k, k); }

    double closure_residual(int gap) const;
    double max_closure_residual() const;

    double length(int gap) const { return system_.gaps[gap].length(); }
    double position(int gap) const;  // Re k on the gap
    double height(int gap) const;    // max of Im k on the gap, attained at c
    double v_on_gap(int gap, double x) const;
    std::vector<double> positions() const;
    std::vector<double> heights() const;

    double action(int gap) const;            // series route
    double action_quadrature(int gap) const; // independent Gauss-Legendre route
    double sqrt_action(int gap) const;

    // (Q0, I_D) with I_D = 2 Q0; cross-checks the series route against the
    // quadrature route and throws IdentityViolation on disagreement.
    std::pair<double, double> q0_and_dirichlet() const;

    // curvature coefficients of the direct map at the gap ends: (mu^-, mu^+),
    // signed (mu^- < 0 < mu^+)
    std::pair<double, double> effective_masses(int gap) const;
    // tip curvature coefficient 1/|k''(c_n)|
    double tip_mass(int gap) const;
    // 2 * integral of sqrt(v'^2 + 1) over the gap
    double invariant_length(int gap) const;

    // correction factor V_n(x) relating v to the bare square-root profile
    // v_n(x) = |(x - lo)(x - hi)|^(1/2):  v = v_n (1 + V_n)
    double v_ratio_correction(int gap, double x) const;

    // (1/pi) * integral of |z'(k)-1|^2 over the vertical strip |Re k - u_n| < r
    double local_dirichlet(int gap, double r, double rel_tol = 1e-3) const;
    // raw integral of |z'(k)-1|^2 over (u_n, u_n + r) x (-h_n, h_n)
    double local_dirichlet_rect(int gap, double r, double rel_tol = 1e-3) const;

    double series_tail() const { return series_tail_; }

private:
    struct GapData {
        double lo = 0, hi = 0, c = 0;
        double mid = 0, rho = 0;
        int samples = 0;
        std::vector<double> coef_cos; // cosine coefficients of psi
        std::vector<double> coef_sin; // sine coefficients of v: B_k = -A_k / k
        double sum_sin = 0;           // S(1)
        double max_abs_sin = 0;
        double closure = 0;           // pi * A_0 = Im k at the right endpoint
    };

    GapSystem system_;
    QuadratureSettings settings_;
    std::vector<GapData> data_;
    double series_tail_ = 0.0;

    double psi(int gap, double t) const;
    bool newton_invert(std::complex<double> k, std::complex<double> guess,
                       std::complex<double>& out) const;
    void sample_psi(int gap, int samples, std::vector<double>& out) const;
    void rebuild_gap(int gap);
    void rebuild_all();
    void enforce_closure();
    std::vector<double> closure_vector_at(const std::vector<double>& c) const;
    std::complex<double> gap_series(int gap, std::complex<double> z) const;
    double series_v(int gap, double theta) const;
    double column_sum(int gap, double u, double r,
                      const std::vector<std::pair<double, double>>& vnodes) const;
};

// Endpoint-only entry matching the inverse-direction workflow: returns the
// gap system with critical points filled in.
GapSystem solve_critical_points(const std::vector<std::pair<double, double>>& endpoints,
                                QuadratureSettings settings = {});

} // namespace combmap
