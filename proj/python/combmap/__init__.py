"""Comb conformal mappings for finite vertical-slit configurations."""

from ._combmap import (
    CombmapError,
    Quasimomentum,
    SlitConfig,
    ahlfors,
    ahlfors_derivative_at_infinity,
    capacity,
    example,
    greedy_energy_bounds,
    greedy_tilde,
    single_slit_map,
    solve,
    uniform_comb_gap_length,
    verify,
    weighted_norm,
)

__all__ = [
    "CombmapError",
    "Quasimomentum",
    "SlitConfig",
    "ahlfors",
    "ahlfors_derivative_at_infinity",
    "capacity",
    "example",
    "greedy_energy_bounds",
    "greedy_tilde",
    "single_slit_map",
    "solve",
    "uniform_comb_gap_length",
    "verify",
    "weighted_norm",
]
