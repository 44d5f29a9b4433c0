import math

import pytest

combmap = pytest.importorskip("combmap")


def test_solve_single_slit():
    out = combmap.solve([0.0], [1.0])
    q = out["quantities"]
    assert out["residual"] <= 1e-9
    assert abs(q["l"][0] - 2.0) <= 1e-8
    assert abs(q["Q0"] - 0.5) <= 1e-8
    assert abs(q["A"][0] - 1.0) <= 1e-8
    gap = out["gaps"][0]
    assert abs(gap["zminus"] + 1.0) <= 1e-8
    assert abs(gap["zplus"] - 1.0) <= 1e-8


def test_quasimomentum_evaluation():
    qm = combmap.Quasimomentum([(-1.0, 1.0)])
    assert abs(qm.height(0) - 1.0) <= 1e-10
    assert abs(qm.action(0) - 1.0) <= 1e-10
    k = qm.value(complex(math.sqrt(2.0), 0.0))
    assert abs(k - 1.0) <= 1e-10
    z = qm.invert(complex(0.5, 0.5))
    assert abs(qm.value(z) - complex(0.5, 0.5)) <= 1e-9


def test_greedy_and_norms():
    assert combmap.greedy_tilde([0, 1, 2], [1, 2, 1]) == [0.0, 2.0, 0.0]
    lo, hi = combmap.greedy_energy_bounds([0.0], [1.0])
    assert lo <= 0.5 <= hi
    assert abs(combmap.weighted_norm([3.0, 4.0], 2.0) - 5.0) <= 1e-14
    assert combmap.weighted_norm([2.0, -5.0], math.inf) == 5.0


def test_capacity_and_ahlfors():
    assert combmap.capacity([(0.0, 1.0)]) == 0.25
    assert abs(combmap.ahlfors_derivative_at_infinity([(0.0, 1.0)]) - 0.25) <= 1e-8
    f = combmap.ahlfors([(-1.0, 1.0)], complex(3.0, 0.0))
    assert abs(f.real - (math.sqrt(2) - 1) / (math.sqrt(2) + 1)) <= 1e-12
    assert abs(f) <= 1.0 + 1e-12


def test_closed_forms():
    v = combmap.single_slit_map(complex(0.0, 2.0), 0.0, 1.0)
    assert abs(v - complex(0.0, math.sqrt(3.0))) <= 1e-14
    assert abs(combmap.uniform_comb_gap_length(1.0) - 2 * math.asin(math.tanh(1.0))) == 0.0


def test_verify_clean_instance():
    checks = combmap.verify([0.0, 1.2], [0.8, 0.4])
    assert checks
    assert all(c["passed"] for c in checks if c["applicable"])


def test_validation_errors():
    with pytest.raises(combmap.CombmapError):
        combmap.SlitConfig([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(combmap.CombmapError):
        combmap.SlitConfig([0.0], [-1.0])
