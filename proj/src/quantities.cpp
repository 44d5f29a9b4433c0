#include "combmap/quantities.hpp"

#include <cmath>
#include <numbers>

namespace combmap {

QuantityReport compute_quantities(const CombSolution& sol) {
    const std::size_t N = sol.config.size();
    QuantityReport rep;
    rep.l.assign(N, 0.0);
    rep.h_computed.assign(N, 0.0);
    rep.u_recovered = sol.config.u;
    rep.A.assign(N, 0.0);
    rep.J.assign(N, 0.0);
    rep.mu_plus_abs.assign(N, 0.0);
    rep.mu_minus_abs.assign(N, 0.0);
    rep.mu_plus_sign.assign(N, 0);
    rep.mu_minus_sign.assign(N, 0);
    rep.nu.assign(N, 0.0);
    rep.L.assign(N, 0.0);
    rep.e.assign(N, 0.0);
    rep.d.assign(N, 0.0);

    const Quasimomentum& qm = *sol.qm;
    for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
        const std::size_t n = sol.gap_slit[g];
        const int gi = static_cast<int>(g);
        rep.l[n] = qm.length(gi);
        rep.h_computed[n] = qm.height(gi);
        rep.u_recovered[n] = qm.position(gi);
        rep.A[n] = qm.action(gi);
        rep.J[n] = qm.sqrt_action(gi);
        auto [mm, mp] = qm.effective_masses(gi);
        rep.mu_plus_abs[n] = std::abs(mp);
        rep.mu_minus_abs[n] = std::abs(mm);
        rep.mu_plus_sign[n] = 1;
        rep.mu_minus_sign[n] = -1;
        rep.nu[n] = qm.tip_mass(gi);
        rep.L[n] = qm.invariant_length(gi);
        rep.e[n] = rep.l[n] / (4.0 * std::numbers::pi);
        rep.d[n] = rep.A[n] / 4.0;
    }

    auto [q0, id] = qm.q0_and_dirichlet();
    rep.Q0 = q0;
    rep.I_D = id;
    if (sol.gaps.size() >= 2) {
        rep.s_defined = true;
        rep.s = sol.gaps.min_interior_band();
    }
    return rep;
}

} // namespace combmap
