import warnings

import numpy as np
import pytest

from quadising.io import read_csv
from quadising.model import DisorderSpec
from quadising.observables import (
    FiniteDifferenceWarning,
    ObservableSeries,
    chi_peak,
    magnetization,
    richardson_ratio,
    scaling_collapse,
    susceptibility,
    uniform_shift_derivative,
    write_observables_csv,
)

from conftest import ed_magnetization, profile


@pytest.mark.parametrize("N,g,delta", [(3, 0.1, 0.5), (4, 0.05, 0.3)])
def test_magnetization_matches_spin_ed(N, g, delta):
    p = profile(N, g, delta)
    s = magnetization(p)
    np.testing.assert_allclose(s.sigma_z, ed_magnetization(p.values), atol=1e-7)


def test_magnetization_disordered_matches_ed():
    p = profile(4, 0.1, 0.4, disorder=DisorderSpec(0.2, 1))
    np.testing.assert_allclose(magnetization(p).sigma_z, ed_magnetization(p.values), atol=1e-7)


def test_magnetization_symmetric_and_bounded():
    s = magnetization(profile(30, 3e-3, 0.3))
    np.testing.assert_allclose(s.sigma_z, s.sigma_z[::-1], atol=1e-8)
    # sign convention: E_g decreases with f, so <sigma^z> = dE/df is negative
    assert np.all(s.sigma_z < 0) and np.all(s.sigma_z >= -1 - 1e-9)
    assert s.N == 30 and s.xi[0] == -1


def test_uniform_shift_is_sum_of_magnetizations():
    p = profile(12, 0.01, 0.4)
    total = magnetization(p).sigma_z.sum()
    assert uniform_shift_derivative(p) == pytest.approx(total, abs=1e-6)


@pytest.mark.parametrize("j", [-5, 0, 3])
def test_richardson_ratio_near_four(j):
    p = profile(20, 3 / 400, 0.3)
    assert richardson_ratio(p, j, 0.05) == pytest.approx(4.0, abs=0.5)


def test_uniform_susceptibility_consistent_with_magnetization_shift():
    p = profile(10, 0.02, 0.3)
    s = susceptibility(p, kind="uniform")
    h = 1e-3
    up = magnetization(p.with_values(p.values + h)).sigma_z
    dn = magnetization(p.with_values(p.values - h)).sigma_z
    np.testing.assert_allclose(s.chi_z, (up - dn) / (2 * h), atol=1e-9)
    assert s.chi_kind == "uniform"


def test_local_susceptibility_is_second_derivative():
    p = profile(4, 0.05, 0.4)
    s = susceptibility(p, kind="local", step=1e-3)
    # compare to derivative of the ED magnetization in the site's own field
    k = 5
    h = 1e-4
    fp, fm = p.values.copy(), p.values.copy()
    fp[k] += h
    fm[k] -= h
    ref = (ed_magnetization(fp)[k] - ed_magnetization(fm)[k]) / (2 * h)
    assert s.chi_z[k] == pytest.approx(ref, rel=1e-4)


def test_unknown_kind():
    with pytest.raises(ValueError):
        susceptibility(profile(3, 0.1, 0.5), kind="other")


def test_noise_warning_for_tiny_step():
    with pytest.warns(FiniteDifferenceWarning):
        susceptibility(profile(20, 0.01, 0.3), kind="local", step=1e-9)


def _fake(N, center):
    xi = np.arange(-N, N + 1) / N
    return ObservableSeries(np.arange(-N, N + 1), xi, xi, sigma_z=-np.tanh(N * (center - np.abs(xi))) * 0.5 - 0.5)


def test_scaling_collapse_on_synthetic_curves():
    # all curves pass through -0.5 at |xi| = 0.4; slopes differ with N
    rep = scaling_collapse([_fake(N, 0.4) for N in (10, 20, 40)])
    assert rep.mean_plus == pytest.approx(0.4, abs=0.02)
    assert rep.mean_minus == pytest.approx(-0.4, abs=0.02)
    assert len(rep.plus) == 3 and not rep.at_edge


def test_scaling_collapse_needs_three_sizes():
    with pytest.raises(ValueError):
        scaling_collapse([_fake(10, 0.4), _fake(20, 0.4)])


def test_scaling_collapse_no_crossing():
    a = _fake(10, 0.4)
    curves = [ObservableSeries(a.sites, a.xi, a.fields, sigma_z=a.sigma_z + k) for k in (0, 1, 2)]
    with pytest.raises(ValueError, match="no crossing"):
        scaling_collapse(curves)


def test_chi_peak_refinement():
    N = 20
    xi = np.arange(-N, N + 1) / N
    chi = -np.exp(-((np.abs(xi) - 0.52) ** 2) / 0.01)
    s = ObservableSeries(np.arange(-N, N + 1), xi, xi, sigma_z=np.zeros_like(xi), chi_z=chi)
    x, h = chi_peak(s, 1)
    assert x == pytest.approx(0.52, abs=0.01)
    assert h == pytest.approx(1.0, abs=0.02)
    x2, _ = chi_peak(s, -1)
    assert x2 == pytest.approx(-0.52, abs=0.01)
    with pytest.raises(ValueError):
        chi_peak(ObservableSeries(s.sites, s.xi, s.fields), 1)


def test_csv(tmp_path):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = susceptibility(profile(5, 0.05, 0.3))
    write_observables_csv(tmp_path / "o.csv", s)
    d = read_csv(tmp_path / "o.csv")
    assert list(d) == ["j", "xi_j", "f_j", "sigma_z_j", "chi_z_j"]
    np.testing.assert_array_equal(d["sigma_z_j"], s.sigma_z)
