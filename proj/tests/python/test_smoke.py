import json
import math

import numpy as np
import pytest

import qlat

OMEGA_C = 6.729


def lattice(n=4, ell=2 / 3, omega_q=OMEGA_C):
    return qlat.LatticeSpec(n, ell, omega_q)


def cavity(eta=0.1):
    return qlat.CavitySpec(OMEGA_C, eta)


def test_deformation_factor_is_mean_cos_squared():
    for ell in np.linspace(0.05, 0.95, 7):
        expected = np.mean(np.cos(np.arange(5) * math.pi * ell) ** 2)
        assert qlat.deformation_factor(lattice(5, ell)) == pytest.approx(expected, abs=1e-12)


def test_quasi_period():
    assert qlat.quasi_period(lattice(), cavity()) == pytest.approx(20.187, abs=1e-9)


def test_chi_matches_direct_sum():
    lat, cav = lattice(), cavity()
    k, l = 3.7, 0.25
    phase = math.pi * (2 / 3) * k / OMEGA_C
    expected = sum(math.cos(j * math.pi * l) * complex(math.cos(j * phase), math.sin(j * phase))
                   for j in range(4))
    assert abs(qlat.chi(lat, cav, l, k) - expected) < 1e-12


def test_first_excited_sector():
    lat, cav = lattice(omega_q=6.2), cavity()
    sector = qlat.diagonalize_sector(lat, cav, -1)
    f = qlat.deformation_factor(lat)
    delta = OMEGA_C - 6.2
    for eps in sector["stark_splittings"]:
        assert eps * eps - delta * eps - 4 * 0.01 * f == pytest.approx(0.0, abs=1e-12)
    assert sector["photon_numbers"] == [0, 1]


def test_decay_rate_and_errors():
    result = qlat.decay_rate(lattice(), cavity())
    assert result.gamma_normalized == pytest.approx(2 * result.s_at_kq**2 - result.s_at_zero**2)
    assert result.gamma_physical is None
    with pytest.raises(ValueError):
        qlat.decay_rate(lattice(), cavity(), mu=1.0)
    with pytest.raises(ValueError):
        qlat.diagonalize_sector(lattice(), cavity(), -0.3)


def test_short_dynamics_conserves_norm():
    out = qlat.integrate_normalized_bath(lattice(), cavity(), modes=100, bandwidth=1.0, t_final=10.0)
    assert max(abs(n - 1.0) for n in out["norm"]) < 1e-8
    assert abs(out["alpha"][0]) == pytest.approx(1.0)


def test_validate_report():
    passed, report = qlat.validate()
    doc = json.loads(report)
    assert passed
    assert doc["passed"] is True
    assert doc["hard"]
