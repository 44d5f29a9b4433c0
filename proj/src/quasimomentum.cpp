#include "combmap/quasimomentum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "combmap/errors.hpp"
#include "combmap/quadrature.hpp"

namespace combmap {

namespace {

constexpr double kPi = std::numbers::pi;

using cplx = std::complex<double>;

inline cplx upperize(cplx z) {
    if (z.imag() == 0.0) return {z.real(), 0.0}; // clear a possible -0.0
    return z;
}

// sqrt((t-lo)(t-hi)) for real t outside [lo, hi], with the sign of the
// boundary value from the upper half-plane: positive right of the gap,
// negative left of it.
inline double outer_sqrt(double lo, double hi, double t) {
    double p = (t - lo) * (t - hi);
    double s = std::sqrt(std::max(p, 0.0));
    return t > hi ? s : -s;
}

// w(zeta) = zeta - sqrt(zeta-1)sqrt(zeta+1); |w| <= 1, analytic off [-1,1]
inline cplx joukowski_w(cplx zeta) {
    return zeta - std::sqrt(zeta - 1.0) * std::sqrt(zeta + 1.0);
}

} // namespace

Quasimomentum::Quasimomentum(GapSystem gaps, QuadratureSettings settings)
    : system_(std::move(gaps)), settings_(settings) {
    system_.validate();
    const int G = count();
    data_.resize(G);
    for (int g = 0; g < G; ++g) {
        GapData& gd = data_[g];
        const Gap& gap = system_.gaps[g];
        gd.lo = gap.lo;
        gd.hi = gap.hi;
        gd.mid = gap.mid();
        gd.rho = gap.half();
        // warm start strictly inside the gap
        gd.c = std::clamp(gap.c, gd.lo + 1e-9 * gap.length(), gd.hi - 1e-9 * gap.length());
        int m = settings_.initial_samples;
        if (!settings_.fixed_samples.empty())
            m = settings_.fixed_samples[std::min<std::size_t>(g, settings_.fixed_samples.size() - 1)];
        gd.samples = std::max(8, m);
    }
    if (G > 0) enforce_closure();
    rebuild_all();
    for (int g = 0; g < G; ++g) system_.gaps[g].c = data_[g].c;
}

Quasimomentum Quasimomentum::solve(const std::vector<std::pair<double, double>>& endpoints,
                                   QuadratureSettings settings) {
    GapSystem sys;
    for (const auto& [lo, hi] : endpoints) {
        if (!(lo < hi)) throw InvalidInterlacing("gap endpoints must satisfy lo < hi");
        sys.gaps.push_back(Gap{lo, 0.5 * (lo + hi), hi});
    }
    return Quasimomentum(std::move(sys), settings);
}

GapSystem solve_critical_points(const std::vector<std::pair<double, double>>& endpoints,
                                QuadratureSettings settings) {
    return Quasimomentum::solve(endpoints, settings).gap_system();
}

std::vector<int> Quasimomentum::sample_counts() const {
    std::vector<int> out;
    for (const auto& gd : data_) out.push_back(gd.samples);
    return out;
}

double Quasimomentum::psi(int gap, double t) const {
    const int G = count();
    double r = -(t - data_[gap].c);
    for (int m = 0; m < G; ++m) {
        if (m == gap) continue;
        r *= (t - data_[m].c) / outer_sqrt(data_[m].lo, data_[m].hi, t);
    }
    return r;
}

void Quasimomentum::sample_psi(int gap, int samples, std::vector<double>& out) const {
    const GapData& gd = data_[gap];
    out.resize(samples + 1);
    for (int j = 0; j <= samples; ++j) {
        double theta = kPi * j / samples;
        out[j] = psi(gap, gd.mid + gd.rho * std::cos(theta));
    }
}

void Quasimomentum::rebuild_gap(int gap) {
    GapData& gd = data_[gap];
    std::vector<double> samples;
    sample_psi(gap, gd.samples, samples);
    gd.coef_cos = dct_interpolant(samples);
    const int M = gd.samples;
    gd.coef_sin.assign(M + 1, 0.0);
    gd.sum_sin = 0.0;
    gd.max_abs_sin = 0.0;
    for (int k = 1; k <= M; ++k) {
        gd.coef_sin[k] = -gd.coef_cos[k] / k;
        gd.sum_sin += gd.coef_sin[k];
        gd.max_abs_sin = std::max(gd.max_abs_sin, std::abs(gd.coef_sin[k]));
    }
    gd.closure = kPi * gd.coef_cos[0];
}

void Quasimomentum::rebuild_all() {
    series_tail_ = 0.0;
    for (int g = 0; g < count(); ++g) {
        rebuild_gap(g);
        const GapData& gd = data_[g];
        double ref = 0.0, tail = 0.0;
        for (int k = 0; k <= gd.samples; ++k) ref = std::max(ref, std::abs(gd.coef_cos[k]));
        for (int k = gd.samples - gd.samples / 8; k <= gd.samples; ++k)
            tail = std::max(tail, std::abs(gd.coef_cos[k]));
        if (ref > 0.0) series_tail_ = std::max(series_tail_, tail / ref);
    }
}

std::vector<double> Quasimomentum::closure_vector_at(const std::vector<double>& c) const {
    // closure residual Im k(hi_g) = pi * a0 of psi, trapezoid in theta
    const int G = count();
    std::vector<double> F(G, 0.0);
    for (int g = 0; g < G; ++g) {
        const GapData& gd = data_[g];
        const int M = gd.samples;
        double acc = 0.0;
        for (int j = 0; j <= M; ++j) {
            double t = gd.mid + gd.rho * std::cos(kPi * j / M);
            double r = -(t - c[g]);
            for (int m = 0; m < G; ++m) {
                if (m == g) continue;
                r *= (t - c[m]) / outer_sqrt(data_[m].lo, data_[m].hi, t);
            }
            acc += (j == 0 || j == M) ? 0.5 * r : r;
        }
        F[g] = kPi * acc / M;
    }
    return F;
}

void Quasimomentum::enforce_closure() {
    const int G = count();
    const double fd = 1e-7;

    std::vector<double> c(G);
    for (int g = 0; g < G; ++g) c[g] = data_[g].c;

    // node/psi caches at the current sampling level
    std::vector<std::vector<double>> tnodes(G), psis(G);
    auto refresh_nodes = [&]() {
        for (int g = 0; g < G; ++g) {
            const GapData& gd = data_[g];
            tnodes[g].resize(gd.samples + 1);
            for (int j = 0; j <= gd.samples; ++j)
                tnodes[g][j] = gd.mid + gd.rho * std::cos(kPi * j / gd.samples);
        }
    };

    auto psi_at = [&](int g, double t, const std::vector<double>& cv) {
        double r = -(t - cv[g]);
        for (int m = 0; m < G; ++m) {
            if (m == g) continue;
            r *= (t - cv[m]) / outer_sqrt(data_[m].lo, data_[m].hi, t);
        }
        return r;
    };

    // F_g = pi * a0; also refresh the psi cache
    auto eval_F = [&](const std::vector<double>& cv, std::vector<double>& F, bool cache) {
        F.assign(G, 0.0);
        for (int g = 0; g < G; ++g) {
            const int M = data_[g].samples;
            if (cache) psis[g].resize(M + 1);
            double acc = 0.0;
            for (int j = 0; j <= M; ++j) {
                double v = psi_at(g, tnodes[g][j], cv);
                if (cache) psis[g][j] = v;
                acc += (j == 0 || j == M) ? 0.5 * v : v;
            }
            F[g] = kPi * acc / M;
        }
    };

    // per-gap tolerance scale from the crude height estimate int |psi| / 2
    std::vector<double> tol(G, settings_.closure_tol);
    auto refresh_tol = [&]() {
        for (int g = 0; g < G; ++g) {
            const int M = data_[g].samples;
            double acc = 0.0;
            for (int j = 0; j <= M; ++j) acc += std::abs(psis[g][j]);
            double hEst = 0.5 * kPi * acc / M;
            tol[g] = settings_.closure_tol * std::max(1.0, hEst);
        }
    };

    auto sup_ratio = [&](const std::vector<double>& F) {
        double r = 0.0;
        for (int g = 0; g < G; ++g) r = std::max(r, std::abs(F[g]) / tol[g]);
        return r;
    };

    auto clamp_c = [&](std::vector<double>& cv) {
        for (int g = 0; g < G; ++g) {
            double margin = 1e-9 * (data_[g].hi - data_[g].lo);
            cv[g] = std::clamp(cv[g], data_[g].lo + margin, data_[g].hi - margin);
        }
    };

    // single-gap residual used by the bisection fallback
    auto F_single = [&](int g, const std::vector<double>& cv) {
        const int M = data_[g].samples;
        double acc = 0.0;
        for (int j = 0; j <= M; ++j) {
            double v = psi_at(g, tnodes[g][j], cv);
            acc += (j == 0 || j == M) ? 0.5 * v : v;
        }
        return kPi * acc / M;
    };

    // Gauss-Seidel bisection sweeps on the per-gap monotone closure condition
    auto bisection_fallback = [&](std::vector<double>& cv) {
        std::vector<double> F;
        for (int sweep = 0; sweep < 500; ++sweep) {
            for (int g = 0; g < G; ++g) {
                double margin = 1e-13 * (data_[g].hi - data_[g].lo);
                double a = data_[g].lo + margin, b = data_[g].hi - margin;
                std::vector<double> probe = cv;
                probe[g] = a;
                double Fa = F_single(g, probe);
                if (Fa >= 0.0) { cv[g] = a; continue; }
                probe[g] = b;
                double Fb = F_single(g, probe);
                if (Fb <= 0.0) { cv[g] = b; continue; }
                for (int it = 0; it < 90; ++it) {
                    double midc = 0.5 * (a + b);
                    probe[g] = midc;
                    double Fm = F_single(g, probe);
                    if (Fm > 0.0) b = midc; else a = midc;
                }
                cv[g] = 0.5 * (a + b);
            }
            eval_F(cv, F, true);
            refresh_tol();
            if (sup_ratio(F) <= 1.0) return true;
        }
        return false;
    };

    for (int round = 0; round < 8; ++round) {
        refresh_nodes();
        std::vector<double> F;
        eval_F(c, F, true);
        refresh_tol();
        double res = sup_ratio(F);
        bool converged = res <= 1.0;

        int iter = 0;
        while (!converged && iter++ < 60) {
            // finite-difference Jacobian from the cached samples: perturbing c_j
            // rescales each cached integrand value by (t - c_j - d)/(t - c_j)
            std::vector<double> J(static_cast<std::size_t>(G) * G, 0.0);
            for (int j = 0; j < G; ++j) {
                double delta = fd * (data_[j].hi - data_[j].lo);
                for (int g = 0; g < G; ++g) {
                    const int M = data_[g].samples;
                    double acc = 0.0;
                    for (int n = 0; n <= M; ++n) {
                        double r = tnodes[g][n] - c[j];
                        double pert;
                        if (r != 0.0) {
                            pert = psis[g][n] * ((r - delta) / r);
                        } else {
                            std::vector<double> cp = c;
                            cp[j] += delta;
                            pert = psi_at(g, tnodes[g][n], cp);
                        }
                        double dval = pert - psis[g][n];
                        acc += (n == 0 || n == M) ? 0.5 * dval : dval;
                    }
                    J[static_cast<std::size_t>(g) * G + j] = kPi * acc / (M * delta);
                }
            }
            std::vector<double> rhs(G);
            for (int g = 0; g < G; ++g) rhs[g] = -F[g];
            if (!solve_dense(J, rhs, G)) break;

            double lambda = 1.0;
            bool improved = false;
            std::vector<double> cand, Fc;
            while (lambda > 1e-7) {
                cand = c;
                for (int g = 0; g < G; ++g) cand[g] += lambda * rhs[g];
                clamp_c(cand);
                eval_F(cand, Fc, false);
                if (sup_ratio(Fc) < res) { improved = true; break; }
                lambda *= 0.5;
            }
            if (!improved) break;
            c = cand;
            eval_F(c, F, true);
            refresh_tol();
            res = sup_ratio(F);
            converged = res <= 1.0;
        }

        if (!converged) converged = bisection_fallback(c);
        if (!converged) {
            std::vector<double> F2;
            eval_F(c, F2, false);
            std::ostringstream msg;
            msg << "gap-closure iteration failed; residuals:";
            for (double f : F2) msg << ' ' << f;
            throw NewtonDivergence(msg.str());
        }

        for (int g = 0; g < G; ++g) data_[g].c = c[g];

        // adaptive sampling: grow gaps whose coefficient tail is not resolved
        if (!settings_.adaptive || !settings_.fixed_samples.empty()) break;
        bool grew = false;
        for (int g = 0; g < G; ++g) {
            rebuild_gap(g);
            const GapData& gd = data_[g];
            double ref = 0.0, tail = 0.0;
            for (int k = 0; k <= gd.samples; ++k) ref = std::max(ref, std::abs(gd.coef_cos[k]));
            for (int k = gd.samples - gd.samples / 8; k <= gd.samples; ++k)
                tail = std::max(tail, std::abs(gd.coef_cos[k]));
            if (ref > 0.0 && tail > settings_.series_tol * ref && gd.samples < settings_.max_samples) {
                data_[g].samples = std::min(settings_.max_samples, gd.samples * 2);
                grew = true;
            }
        }
        if (!grew) break;
    }
}

std::complex<double> Quasimomentum::derivative(cplx z) const {
    if (z.imag() < 0.0) return std::conj(derivative(std::conj(z)));
    z = upperize(z);
    cplx res(1.0, 0.0);
    for (int g = 0; g < count(); ++g) {
        const GapData& gd = data_[g];
        if (z.imag() == 0.0 && (z.real() == gd.lo || z.real() == gd.hi))
            throw EvaluationAtBranchPoint("derivative evaluated at a gap endpoint");
        res *= (z - gd.c) / (std::sqrt(z - gd.lo) * std::sqrt(z - gd.hi));
    }
    return res;
}

std::complex<double> Quasimomentum::gap_series(int gap, cplx z) const {
    const GapData& gd = data_[gap];
    cplx zeta = (z - gd.mid) / gd.rho;
    cplx w = joukowski_w(zeta);
    double aw = std::abs(w);
    const int M = gd.samples;
    int terms = M;
    if (aw < 0.97 && gd.max_abs_sin > 0.0) {
        double target = 1e-17 * std::max(1.0, gd.max_abs_sin);
        double need = std::log(target * (1.0 - aw) / gd.max_abs_sin) / std::log(std::max(aw, 1e-300));
        terms = std::clamp(static_cast<int>(need) + 1, 8, M);
    }
    cplx s(0.0, 0.0);
    for (int k = terms; k >= 1; --k) s = s * w + gd.coef_sin[k];
    return s * w;
}

std::complex<double> Quasimomentum::value(cplx z) const {
    if (count() == 0) return z;
    if (z.imag() < 0.0) return std::conj(value(std::conj(z)));
    z = upperize(z);
    cplx acc = z;
    for (int g = 0; g < count(); ++g) acc -= gap_series(g, z);
    return acc;
}

double Quasimomentum::closure_residual(int gap) const { return data_[gap].closure; }

double Quasimomentum::max_closure_residual() const {
    double r = 0.0;
    for (const auto& gd : data_) r = std::max(r, std::abs(gd.closure));
    return r;
}

double Quasimomentum::series_v(int gap, double theta) const {
    const GapData& gd = data_[gap];
    double acc = gd.coef_cos[0] * (kPi - theta);
    // sin(k theta) by forward recurrence
    double s1 = std::sin(theta), s0 = 0.0;
    double twoCos = 2.0 * std::cos(theta);
    for (int k = 1; k <= gd.samples; ++k) {
        acc += gd.coef_sin[k] * s1;
        double s2 = twoCos * s1 - s0;
        s0 = s1;
        s1 = s2;
    }
    return acc;
}

double Quasimomentum::position(int gap) const {
    return value(cplx(data_[gap].hi, 0.0)).real();
}

double Quasimomentum::height(int gap) const {
    const GapData& gd = data_[gap];
    double theta = std::acos(std::clamp((gd.c - gd.mid) / gd.rho, -1.0, 1.0));
    return series_v(gap, theta);
}

double Quasimomentum::v_on_gap(int gap, double x) const {
    const GapData& gd = data_[gap];
    if (x < gd.lo || x > gd.hi) throw OutOfGap("abscissa outside the gap");
    if (x == gd.lo || x == gd.hi) return 0.0;
    double theta = std::acos(std::clamp((x - gd.mid) / gd.rho, -1.0, 1.0));
    return series_v(gap, theta);
}

std::vector<double> Quasimomentum::positions() const {
    std::vector<double> out;
    for (int g = 0; g < count(); ++g) out.push_back(position(g));
    return out;
}

std::vector<double> Quasimomentum::heights() const {
    std::vector<double> out;
    for (int g = 0; g < count(); ++g) out.push_back(height(g));
    return out;
}

double Quasimomentum::action(int gap) const {
    const GapData& gd = data_[gap];
    return 2.0 * gd.rho * gd.coef_cos[0] + gd.rho * gd.coef_sin[1];
}

double Quasimomentum::action_quadrature(int gap) const {
    const GapData& gd = data_[gap];
    int n = std::max(64, std::min(gd.samples, 2048));
    const GaussRule& rule = gauss_legendre(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double theta = 0.5 * kPi * (rule.x[i] + 1.0);
        acc += rule.w[i] * psi(gap, gd.mid + gd.rho * std::cos(theta)) * (1.0 - std::cos(theta));
    }
    acc *= 0.5 * kPi;
    return 2.0 * gd.rho * acc / kPi;
}

double Quasimomentum::sqrt_action(int gap) const {
    return std::sqrt(std::max(0.0, action(gap)));
}

std::pair<double, double> Quasimomentum::q0_and_dirichlet() const {
    if (count() == 0) return {0.0, 0.0};
    double sumSeries = 0.0, sumQuad = 0.0;
    for (int g = 0; g < count(); ++g) {
        sumSeries += action(g);
        sumQuad += action_quadrature(g);
    }
    double q0 = 0.5 * sumSeries;
    if (std::abs(sumSeries - sumQuad) > 1e-8 * std::max(1.0, q0)) {
        std::ostringstream msg;
        msg << "action identity cross-check failed: series " << sumSeries
            << " vs quadrature " << sumQuad;
        throw IdentityViolation(msg.str());
    }
    return {q0, 2.0 * q0};
}

std::pair<double, double> Quasimomentum::effective_masses(int gap) const {
    const GapData& gd = data_[gap];
    const double len = gd.hi - gd.lo;
    double fp = (gd.hi - gd.c) / std::sqrt(len);
    double fm = (gd.c - gd.lo) / std::sqrt(len);
    for (int m = 0; m < count(); ++m) {
        if (m == gap) continue;
        const GapData& om = data_[m];
        fp *= (gd.hi - om.c) / std::sqrt(std::abs((gd.hi - om.lo) * (gd.hi - om.hi)));
        fm *= (gd.lo - om.c) / std::sqrt(std::abs((gd.lo - om.lo) * (gd.lo - om.hi)));
    }
    return {-2.0 * fm * fm, 2.0 * fp * fp};
}

double Quasimomentum::tip_mass(int gap) const {
    const GapData& gd = data_[gap];
    double vg = std::sqrt((gd.c - gd.lo) * (gd.hi - gd.c));
    double prod = 1.0;
    for (int m = 0; m < count(); ++m) {
        if (m == gap) continue;
        const GapData& om = data_[m];
        prod *= std::abs(gd.c - om.c) / std::sqrt(std::abs((gd.c - om.lo) * (gd.c - om.hi)));
    }
    return vg / prod;
}

double Quasimomentum::invariant_length(int gap) const {
    const GapData& gd = data_[gap];
    int n = std::max(64, std::min(gd.samples, 2048));
    const GaussRule& rule = gauss_legendre(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double theta = 0.5 * kPi * (rule.x[i] + 1.0);
        double p = psi(gap, gd.mid + gd.rho * std::cos(theta));
        acc += rule.w[i] * std::hypot(p, gd.rho * std::sin(theta));
    }
    return 2.0 * acc * 0.5 * kPi;
}

double Quasimomentum::v_ratio_correction(int gap, double x) const {
    const GapData& gd = data_[gap];
    if (x < gd.lo || x > gd.hi) throw OutOfGap("abscissa outside the gap");
    auto vn = [&](double t) {
        return std::sqrt(std::abs((t - gd.lo) * (t - gd.hi)));
    };
    auto eval = [&](int n) {
        const GaussRule& rule = gauss_legendre(n);
        double total = 0.0;
        for (int m = 0; m < count(); ++m) {
            if (m == gap) continue;
            const GapData& om = data_[m];
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                double theta = 0.5 * kPi * (rule.x[i] + 1.0);
                double t = om.mid + om.rho * std::cos(theta);
                double vt = series_v(m, theta);
                acc += rule.w[i] * vt * om.rho * std::sin(theta) / (std::abs(t - x) * vn(t));
            }
            total += acc * 0.5 * kPi;
        }
        return total / kPi;
    };
    double a = eval(256), b = eval(512);
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) b = eval(1024);
    return b;
}

bool Quasimomentum::newton_invert(cplx k, cplx guess, cplx& out) const {
    cplx z = upperize(guess);
    if (z.imag() < 0.0) z = std::conj(z);
    const double scale = std::max(1.0, std::abs(k));
    const double span = data_.back().hi - data_.front().lo + 1.0;
    int lifts = 0;
    for (int it = 0; it < 120; ++it) {
        if (z.imag() == 0.0) {
            for (const auto& gd : data_)
                if (z.real() == gd.lo || z.real() == gd.hi) {
                    z += cplx(0.0, 1e-14 * scale);
                    break;
                }
        }
        cplx f = value(z) - k;
        double af = std::abs(f);
        if (af <= 1e-12 * scale) {
            out = z;
            return true;
        }
        cplx d = derivative(z);
        double ad = std::abs(d);
        cplx step = (ad < 1e-300) ? cplx(0.0, 0.1 * scale) : -f / d;
        double as = std::abs(step);
        double cap = 10.0 * (span + scale);
        if (as > cap) step *= cap / as;
        double lambda = 1.0;
        bool ok = false;
        while (lambda > 1e-9) {
            cplx zc = z + lambda * step;
            if (zc.imag() < 0.0) zc = cplx(zc.real(), 0.0);
            double fc = std::abs(value(zc) - k);
            if (fc < af) {
                z = zc;
                ok = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!ok) {
            if (++lifts > 4) return false;
            z += cplx(0.0, std::max(1e-6 * scale, 0.5 * af));
        }
    }
    return false;
}

std::complex<double> Quasimomentum::invert(cplx k, cplx guess) const {
    if (count() == 0) return k;
    if (k.imag() < 0.0) return std::conj(invert(std::conj(k), std::conj(guess)));
    k = upperize(k);
    cplx z;
    if (newton_invert(k, guess, z)) return z;

    // Continuation down the vertical ray above k. The ray stays inside the
    // domain, so each warm-started solve is local.
    const double span = data_.back().hi - data_.front().lo + 1.0;
    double T = span + std::abs(k) + 1.0;
    z = cplx(k.real(), T);
    double factor = 0.6;
    int steps = 0;
    while (steps++ < 400) {
        double Tnext = std::max(k.imag(), factor * T);
        bool last = Tnext <= k.imag() + 1e-14 * std::max(1.0, k.imag());
        cplx target = last ? k : cplx(k.real(), Tnext);
        cplx znext;
        if (newton_invert(target, z, znext)) {
            z = znext;
            if (last) return z;
            T = Tnext;
            factor = std::min(0.85, factor + 0.0); // keep the pace once moving
        } else {
            factor = 0.5 * (1.0 + factor); // shrink more gently
            if (factor > 0.995) break;
        }
    }
    throw InversionFailure("map inversion did not converge");
}

double Quasimomentum::column_sum(int gap, double u, double r,
                                 const std::vector<std::pair<double, double>>& vnodes) const {
    (void)gap;
    (void)r;
    double acc = 0.0;
    cplx z(u, vnodes.front().first);
    for (const auto& [v, w] : vnodes) {
        cplx k(u, v);
        z = invert(k, cplx(z.real(), std::max(z.imag(), 0.0)));
        cplx zp = 1.0 / derivative(z);
        acc += w * std::norm(zp - 1.0);
    }
    return acc;
}

double Quasimomentum::local_dirichlet(int gap, double r, double rel_tol) const {
    const double u0 = position(gap);
    const double h = height(gap);
    const double big = std::max({6.0 * h, 2.0 * r, 1.0});

    auto run = [&](int P) {
        // v-nodes shared by every column, sorted from the far field downward
        std::vector<std::pair<double, double>> vnodes;
        const GaussRule& rule = gauss_legendre(P);
        auto add_panel = [&](double a, double b) {
            double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int i = 0; i < P; ++i)
                vnodes.emplace_back(mid + half * rule.x[i], half * rule.w[i]);
        };
        add_panel(0.0, 0.5 * h);
        add_panel(0.5 * h, h);
        add_panel(h, 1.5 * h);
        add_panel(1.5 * h, 3.0 * h);
        add_panel(3.0 * h, big);
        // tail: v = big / s, s in (0, 1)
        for (int i = 0; i < P; ++i) {
            double s = 0.5 * (rule.x[i] + 1.0);
            if (s <= 0.0) continue;
            double v = big / s;
            vnodes.emplace_back(v, 0.5 * rule.w[i] * big / (s * s));
        }
        std::sort(vnodes.begin(), vnodes.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });

        double total = 0.0;
        for (int side = 0; side < 2; ++side) {
            double a = side == 0 ? u0 - r : u0;
            double b = side == 0 ? u0 : u0 + r;
            double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int i = 0; i < P; ++i)
                total += half * rule.w[i] * column_sum(gap, mid + half * rule.x[i], r, vnodes);
        }
        return 2.0 * total / kPi; // lower half-plane by symmetry; strip integral carries 1/pi
    };

    double prev = run(12);
    for (int P = 20; P <= 56; P += 12) {
        double cur = run(P);
        if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    return prev;
}

double Quasimomentum::local_dirichlet_rect(int gap, double r, double rel_tol) const {
    const double u0 = position(gap);
    const double h = height(gap);

    auto run = [&](int P) {
        std::vector<std::pair<double, double>> vnodes;
        const GaussRule& rule = gauss_legendre(P);
        auto add_panel = [&](double a, double b) {
            double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int i = 0; i < P; ++i)
                vnodes.emplace_back(mid + half * rule.x[i], half * rule.w[i]);
        };
        add_panel(0.0, 0.5 * h);
        add_panel(0.5 * h, 0.9 * h);
        add_panel(0.9 * h, h);
        std::sort(vnodes.begin(), vnodes.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });

        double total = 0.0;
        double mid = u0 + 0.5 * r, half = 0.5 * r;
        for (int i = 0; i < P; ++i)
            total += half * rule.w[i] * column_sum(gap, mid + half * rule.x[i], r, vnodes);
        return 2.0 * total; // v < 0 half by symmetry
    };

    double prev = run(12);
    for (int P = 20; P <= 56; P += 12) {
        double cur = run(P);
        if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace combmap
