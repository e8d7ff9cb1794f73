import numpy as np
import pytest

from quadising.io import read_csv
from quadising.ldos import (
    continued_fraction,
    energy_grid,
    jacobi_moments,
    l1_distance,
    lanczos,
    ldos_histogram,
    ldos_recursion,
    ldos_recursion_grid,
    square_root_terminator,
    write_heatmap_csv,
)
from quadising.majorana import build_h_m, spectrum
from quadising.model import params_from_scaled

from conftest import profile


@pytest.fixture(scope="module")
def mid_chain():
    p = params_from_scaled(40, 3.0, 0.3)
    return spectrum(profile(p.N, p.g, p.delta))


def test_unsmoothed_sum_rule_is_exact(mid_chain):
    grid = ldos_histogram(mid_chain, bins=300)
    np.testing.assert_allclose(grid.total_weight(), 2.0, rtol=1e-12)


def test_smoothed_sum_rule_within_one_percent(mid_chain):
    grid = ldos_histogram(mid_chain, bins=500, eta=0.02)
    w = grid.total_weight()
    assert np.all(np.abs(w - 2.0) < 0.02)


def test_normalisation_uses_bandwidth(mid_chain):
    grid = ldos_histogram(mid_chain, bins=100)
    bw = mid_chain.lambdas[-1] - mid_chain.lambdas[0]
    assert grid.norm_lambda == pytest.approx(bw / 80)


def test_exact_recursion_equals_lorentzian_histogram():
    # depth = dim: the continued fraction is finite and exact
    p = profile(4, 0.05, 0.4)
    s = spectrum(p)
    m = build_h_m(p)
    eta = 0.05
    hist = ldos_histogram(s, bins=200, eta=eta)
    for j in (-4, 0, 2):
        rec = ldos_recursion(m, j, depth=m.dim, eta=eta, energies=hist.energies)
        np.testing.assert_allclose(rec, hist.cell(j), atol=1e-9)


def test_lanczos_moments_match_matrix_powers():
    m = build_h_m(profile(15, 0.004, 0.3))
    h = m.dense()
    seed = np.zeros(m.dim)
    k0 = m.index(-3, "B")
    seed[k0] = 1.0
    c = lanczos(m, seed, depth=20)
    mom = jacobi_moments(c, 12)
    ref = [np.linalg.matrix_power(h, k)[k0, k0] for k in range(13)]
    np.testing.assert_allclose(mom, ref, atol=1e-12)
    # zero diagonal and a bipartite lattice make all a_k vanish
    np.testing.assert_allclose(c.a, 0.0, atol=1e-14)


def test_breakdown_flagged():
    m = build_h_m(profile(2, 0.1, 0.5))
    seed = np.zeros(m.dim)
    seed[0] = 1.0
    c = lanczos(m, seed, depth=50)
    assert c.breakdown and len(c.a) <= m.dim


def test_terminator_is_retarded():
    z = np.linspace(-3, 3, 101) + 0.01j
    t = square_root_terminator(z, 0.0, 0.5)
    assert np.all(t.imag <= 0)
    far = square_root_terminator(np.array([1e4 + 1e-3j]), 0.0, 0.5)
    assert far[0] == pytest.approx(1e-4, rel=1e-3)


def test_continued_fraction_single_level():
    from quadising.ldos import LanczosCoefficients

    c = LanczosCoefficients(np.array([0.3]), np.array([]), True)
    z = np.array([1.0 + 0.1j])
    assert continued_fraction(z, c)[0] == pytest.approx(1 / (z[0] - 0.3))


def test_recursion_agrees_with_histogram(mid_chain):
    m = mid_chain.matrix
    hist = ldos_histogram(mid_chain, bins=500, eta=0.02, cells=[-40, -20, 0, 25])
    rec = ldos_recursion_grid(m, depth=150, eta=0.02, bins=500, cells=[-40, -20, 0, 25])
    for k in range(4):
        assert l1_distance(hist.values[k], rec.values[k], hist) < 0.05


def test_midgap_weight_at_interfaces(mid_chain):
    grid = ldos_histogram(mid_chain, bins=500, eta=0.02)
    w = grid.window_weight(-0.05, 0.05)
    j_peak = grid.cells[np.argmax(w)]
    # interface at sqrt(0.7 / 3) * 40 ~ 19.3
    assert abs(abs(j_peak) - 19) <= 1
    assert w.max() > 10 * w[grid.cells == 0][0]


def test_argument_errors(mid_chain):
    m = mid_chain.matrix
    with pytest.raises(ValueError):
        energy_grid(m, 1)
    with pytest.raises(ValueError):
        lanczos(m, np.ones(m.dim), 1)
    with pytest.raises(ValueError):
        ldos_recursion(m, 0, depth=10, eta=0.0)


def test_heatmap_csv(tmp_path):
    s = spectrum(profile(3, 0.1, 0.5))
    grid = ldos_histogram(s, bins=20, eta=0.05)
    write_heatmap_csv(tmp_path / "h.csv", grid)
    d = read_csv(tmp_path / "h.csv")
    assert list(d) == ["j", "epsilon", "D"]
    assert len(d["D"]) == 7 * 20
    assert np.all(np.isfinite(d["D"]))


def test_ldos_even_in_energy(mid_chain):
    grid = ldos_histogram(mid_chain, bins=400, eta=0.02)
    # the energy grid is symmetric, so reversing it maps eps -> -eps
    np.testing.assert_allclose(grid.values, grid.values[:, ::-1], atol=1e-8)
    rec = ldos_recursion_grid(mid_chain.matrix, depth=80, eta=0.02, bins=400, cells=[-10, 7])
    np.testing.assert_allclose(rec.values, rec.values[:, ::-1], atol=1e-6 * rec.values.max())


def test_recursion_distribution_converges_as_eta_shrinks():
    p = profile(30, 3 / 900, 0.3)
    s = spectrum(p)
    m = build_h_m(p)
    exact = ldos_histogram(s, bins=2000)
    ref_cdf = np.cumsum(exact.cell(5)) * exact.bin_width / exact.norm_lambda
    ks = []
    for eta in (0.1, 0.03, 0.01):
        r = ldos_recursion(m, 5, depth=m.dim, eta=eta, energies=exact.energies)
        cdf = np.cumsum(r) * exact.bin_width / exact.norm_lambda
        ks.append(np.max(np.abs(cdf - ref_cdf)))
    assert ks[0] > ks[1] > ks[2]
