#include "combmap/forward_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "combmap/errors.hpp"
#include "combmap/quadrature.hpp"

namespace combmap {

namespace {

struct NewtonState {
    std::vector<double> logl;
    std::vector<double> mid;
    std::vector<double> c; // warm critical points
};

GapSystem state_to_gaps(const NewtonState& st) {
    GapSystem sys;
    const std::size_t G = st.logl.size();
    for (std::size_t g = 0; g < G; ++g) {
        double half = 0.5 * std::exp(st.logl[g]);
        Gap gap;
        gap.lo = st.mid[g] - half;
        gap.hi = st.mid[g] + half;
        gap.c = std::clamp(st.c[g], gap.lo + 1e-9 * gap.length(), gap.hi - 1e-9 * gap.length());
        sys.gaps.push_back(gap);
    }
    return sys;
}

bool interlaced(const GapSystem& sys, double marginScale) {
    for (std::size_t g = 0; g + 1 < sys.gaps.size(); ++g) {
        double span = sys.gaps[g + 1].hi - sys.gaps[g].lo;
        if (!(sys.gaps[g + 1].lo - sys.gaps[g].hi > marginScale * std::max(span, 1e-300)))
            return false;
    }
    return true;
}

} // namespace

bool CombSolution::slit_has_gap(std::size_t slit) const { return gap_of_slit(slit) >= 0; }

int CombSolution::gap_of_slit(std::size_t slit) const {
    for (std::size_t g = 0; g < gap_slit.size(); ++g)
        if (gap_slit[g] == slit) return static_cast<int>(g);
    return -1;
}

CombSolution solve_forward(const SlitConfig& config, const SolverOptions& opts) {
    CombSolution sol;
    sol.config = config;

    const double hmax = config.max_height();
    std::vector<std::size_t> active;
    for (std::size_t n = 0; n < config.size(); ++n)
        if (config.h[n] > 1e-13 * hmax) active.push_back(n);
    sol.gap_slit = active;

    const int G = static_cast<int>(active.size());
    if (G == 0) {
        sol.gaps = GapSystem{};
        sol.qm = std::make_shared<Quasimomentum>(GapSystem{});
        sol.residual = 0.0;
        return sol;
    }

    std::vector<double> uT(G), hFull(G);
    for (int g = 0; g < G; ++g) {
        uT[g] = config.u[active[g]];
        hFull[g] = config.h[active[g]];
    }

    // available horizontal room around each slit limits the initial gap length
    std::vector<double> room(G, std::numeric_limits<double>::infinity());
    for (int g = 0; g < G; ++g) {
        if (g > 0) room[g] = std::min(room[g], uT[g] - uT[g - 1]);
        if (g + 1 < G) room[g] = std::min(room[g], uT[g + 1] - uT[g]);
    }

    QuadratureSettings quad;
    quad.initial_samples = opts.initial_samples;
    quad.max_samples = opts.max_samples;

    int totalIters = 0;

    // residual: interleaved (position, height) per gap; returns sup-norm
    auto eval_residual = [&](NewtonState& st, const std::vector<double>& hT,
                             std::vector<double>& R,
                             std::shared_ptr<Quasimomentum>* out) -> double {
        GapSystem sys = state_to_gaps(st);
        if (!interlaced(sys, 1e-13)) return std::numeric_limits<double>::infinity();
        auto qm = std::make_shared<Quasimomentum>(sys, quad);
        for (int g = 0; g < G; ++g) st.c[g] = qm->gap_system().gaps[g].c;
        R.resize(2 * G);
        double sup = 0.0;
        for (int g = 0; g < G; ++g) {
            R[2 * g] = qm->position(g) - uT[g];
            R[2 * g + 1] = qm->height(g) - hT[g];
            sup = std::max({sup, std::abs(R[2 * g]), std::abs(R[2 * g + 1])});
        }
        if (out) *out = qm;
        return sup;
    };

    auto newton = [&](NewtonState& st, const std::vector<double>& hT,
                      std::shared_ptr<Quasimomentum>* qmOut, int* iters) -> double {
        std::vector<double> R;
        double res = eval_residual(st, hT, R, nullptr);
        if (!std::isfinite(res)) throw GapCollision("initial state is not interlaced");
        int it = 0;
        while (res > opts.residual_tol && it < opts.max_newton_iters) {
            ++it;
            // finite-difference Jacobian in (log l, mid)
            std::vector<double> J(static_cast<std::size_t>(2 * G) * (2 * G));
            for (int j = 0; j < 2 * G; ++j) {
                NewtonState pert = st;
                double delta;
                if (j % 2 == 0) {
                    delta = opts.fd_step;
                    pert.logl[j / 2] += delta;
                } else {
                    delta = opts.fd_step * std::max(1.0, std::abs(st.mid[j / 2]));
                    pert.mid[j / 2] += delta;
                }
                std::vector<double> Rp;
                double rp = eval_residual(pert, hT, Rp, nullptr);
                if (!std::isfinite(rp)) {
                    // FD collision: flip the perturbation
                    if (j % 2 == 0) pert.logl[j / 2] -= 2 * delta;
                    else pert.mid[j / 2] -= 2 * delta;
                    delta = -delta;
                    rp = eval_residual(pert, hT, Rp, nullptr);
                    if (!std::isfinite(rp)) throw GapCollision("finite-difference step collides gaps");
                }
                for (int i = 0; i < 2 * G; ++i)
                    J[static_cast<std::size_t>(i) * (2 * G) + j] = (Rp[i] - R[i]) / delta;
            }
            std::vector<double> rhs(2 * G);
            for (int i = 0; i < 2 * G; ++i) rhs[i] = -R[i];
            if (!solve_dense(J, rhs, 2 * G))
                throw NonConvergence("singular Jacobian in the forward Newton iteration");

            double lambda = 1.0;
            bool improved = false;
            NewtonState cand;
            std::vector<double> Rc;
            double resc = 0.0;
            while (lambda > 1e-5) {
                cand = st;
                for (int g = 0; g < G; ++g) {
                    cand.logl[g] += lambda * rhs[2 * g];
                    cand.mid[g] += lambda * rhs[2 * g + 1];
                }
                resc = eval_residual(cand, hT, Rc, nullptr);
                if (std::isfinite(resc) && resc < res) {
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!improved) throw NonConvergence("forward Newton stalled");
            st = cand;
            R = Rc;
            res = resc;
        }
        if (iters) *iters = it;
        totalIters += it;
        if (res > opts.residual_tol)
            throw NonConvergence("forward Newton exceeded the iteration budget");
        if (qmOut) {
            std::vector<double> Rf;
            res = eval_residual(st, hT, Rf, qmOut);
        }
        return res;
    };

    // continuation in the global height scale
    NewtonState st;
    st.logl.resize(G);
    st.mid = uT;
    st.c.resize(G);
    const double t0 = 1.0 / opts.continuation_steps;
    for (int g = 0; g < G; ++g) {
        double l0 = std::min(2.0 * t0 * hFull[g], 0.8 * room[g]);
        st.logl[g] = std::log(std::max(l0, 1e-8 * std::max(1.0, hmax)));
        st.c[g] = uT[g];
    }

    double tPrev = 0.0;
    double tGoal = t0;
    NewtonState lastGood = st;
    double tLastGood = 0.0;
    int halvings = 0;
    std::shared_ptr<Quasimomentum> qmFinal;

    while (tPrev < 1.0) {
        std::vector<double> hT(G);
        for (int g = 0; g < G; ++g) hT[g] = tGoal * hFull[g];
        NewtonState attempt = st;
        if (tPrev > 0.0) {
            // rescale gap lengths along with the height target
            double shift = std::log(tGoal / tPrev);
            for (int g = 0; g < G; ++g) attempt.logl[g] += shift;
        }
        try {
            int iters = 0;
            bool last = tGoal >= 1.0 - 1e-15;
            double res = newton(attempt, hT, last ? &qmFinal : nullptr, &iters);
            sol.continuation_path.push_back({tGoal, res, iters});
            st = attempt;
            lastGood = attempt;
            tLastGood = tGoal;
            tPrev = tGoal;
            tGoal = std::min(1.0, tGoal + t0);
        } catch (const Error&) {
            ++halvings;
            if (halvings > 1024 || (tGoal - tPrev) < 1e-6) {
                std::ostringstream msg;
                msg << "continuation exhausted at t = " << tLastGood;
                throw ContinuationExhausted(msg.str());
            }
            tGoal = 0.5 * (tPrev + tGoal);
        }
    }

    // refinement: let the sampling adapt further and re-polish when needed
    for (int cycle = 0; cycle < 3; ++cycle) {
        std::vector<double> R;
        std::shared_ptr<Quasimomentum> qm;
        double res = eval_residual(st, hFull, R, &qm);
        qmFinal = qm;
        if (res <= opts.residual_tol) break;
        newton(st, hFull, &qmFinal, nullptr);
    }

    sol.gaps = qmFinal->gap_system();
    sol.qm = qmFinal;
    sol.iterations = totalIters;
    double res = 0.0;
    for (int g = 0; g < G; ++g) {
        res = std::max(res, std::abs(qmFinal->position(g) - uT[g]));
        res = std::max(res, std::abs(qmFinal->height(g) - hFull[g]));
    }
    sol.residual = res;
    return sol;
}

RoundTripReport round_trip_check(const CombSolution& sol) {
    RoundTripReport rep;
    rep.du.assign(sol.config.size(), 0.0);
    rep.dh.assign(sol.config.size(), 0.0);
    if (sol.gaps.empty()) return rep;

    QuadratureSettings quad;
    int maxM = 64;
    if (sol.qm)
        for (int m : sol.qm->sample_counts()) maxM = std::max(maxM, m);
    quad.initial_samples = 2 * maxM;
    quad.max_samples = std::max(2 * maxM, 32768);
    Quasimomentum fine(sol.gaps, quad);

    for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
        std::size_t slit = sol.gap_slit[g];
        rep.du[slit] = fine.position(static_cast<int>(g)) - sol.config.u[slit];
        rep.dh[slit] = fine.height(static_cast<int>(g)) - sol.config.h[slit];
        rep.max_abs = std::max({rep.max_abs, std::abs(rep.du[slit]), std::abs(rep.dh[slit])});
    }
    return rep;
}

LindelofReport lindelof_pair_check(const SlitConfig& hSmall, const SlitConfig& hBig,
                                   const SolverOptions& opts, int gridPoints,
                                   bool throwOnViolation) {
    if (hSmall.size() != hBig.size()) throw Error("pair must share the slit grid");
    for (std::size_t n = 0; n < hSmall.size(); ++n) {
        if (hSmall.u[n] != hBig.u[n]) throw Error("pair must share the slit grid");
        if (hSmall.h[n] > hBig.h[n] + 1e-15)
            throw Error("pair must satisfy hSmall <= hBig pointwise");
    }

    LindelofReport rep;
    rep.configs_equal = true;
    for (std::size_t n = 0; n < hSmall.size(); ++n)
        if (hSmall.h[n] != hBig.h[n]) rep.configs_equal = false;

    CombSolution small = solve_forward(hSmall, opts);
    CombSolution big = solve_forward(hBig, opts);

    rep.q0_small = small.qm->q0_and_dirichlet().first;
    rep.q0_big = big.qm->q0_and_dirichlet().first;
    double q0tol = 1e-8 * std::max(1.0, rep.q0_big);
    rep.q0_monotone = rep.q0_small <= rep.q0_big + q0tol;
    rep.q0_strict = rep.configs_equal ? true : (rep.q0_small < rep.q0_big - q0tol);

    // gap lengths grow when other slits shrink; compare on slits kept equal
    rep.min_length_margin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < hSmall.size(); ++n) {
        if (hSmall.h[n] != hBig.h[n] || hBig.h[n] <= 0.0) continue;
        rep.kept.push_back(n);
        int gs = small.gap_of_slit(n);
        int gb = big.gap_of_slit(n);
        double ls = gs >= 0 ? small.gaps.gaps[gs].length() : 0.0;
        double lb = gb >= 0 ? big.gaps.gaps[gb].length() : 0.0;
        rep.min_length_margin = std::min(rep.min_length_margin, ls - lb);
    }
    if (rep.kept.empty()) rep.min_length_margin = 0.0;
    double ltol = 1e-8 * std::max(1.0, hBig.max_height());
    rep.lengths_monotone = rep.min_length_margin >= -ltol;

    // pointwise domination of y = Im z(k) on a grid inside the bigger domain
    const double uMin = hBig.u.front(), uMax = hBig.u.back();
    const double hMax = std::max(hBig.max_height(), 0.5);
    int nx = std::max(2, static_cast<int>(std::round(std::sqrt(double(gridPoints)))));
    int ny = (gridPoints + nx - 1) / nx;
    rep.min_y_margin = std::numeric_limits<double>::infinity();
    rep.grid_points = 0;
    double spacing = std::isfinite(hBig.u_star) ? hBig.u_star : 1.0;
    for (int i = 0; i < nx; ++i) {
        double x = uMin - 1.0 + (uMax - uMin + 2.0) * (i + 0.37) / nx;
        // keep a horizontal offset from every slit
        for (double un : hBig.u)
            if (std::abs(x - un) < 0.05 * spacing) x += 0.07 * spacing;
        for (int j = 0; j < ny; ++j) {
            double y = 0.15 + (2.0 * hMax) * j / std::max(1, ny - 1);
            std::complex<double> k(x, y);
            double ys = small.qm->invert(k).imag();
            double yb = big.qm->invert(k).imag();
            rep.min_y_margin = std::min(rep.min_y_margin, ys - yb);
            ++rep.grid_points;
        }
    }
    double ytol = 1e-8 * std::max(1.0, hMax);
    rep.y_dominates = rep.min_y_margin >= -ytol;

    if (throwOnViolation) {
        if (!rep.q0_monotone) throw MonotonicityViolation("Q0 monotonicity violated");
        if (!rep.lengths_monotone) throw MonotonicityViolation("gap-length monotonicity violated");
        if (!rep.y_dominates) throw MonotonicityViolation("pointwise y-domination violated");
    }
    return rep;
}

} // namespace combmap
