"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary, and printed
with ``-s``). The full five-site-half-chain quench is marked ``slow``; it runs by
default and takes roughly a quarter of an hour on one core.
"""

import json
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from quadising.cli import main
from quadising.io import read_csv
from quadising.ldos import l1_distance, ldos_histogram, ldos_recursion_grid
from quadising.majorana import build_h_m, check_chiral_pairing, spectrum
from quadising.model import ChainParams, DisorderSpec, interface_sites, params_from_scaled
from quadising.observables import chi_peak, richardson_ratio
from quadising.quench import (
    build_spin_hamiltonian,
    evolve_and_fidelity,
    extract_period,
    pairing_spectrum,
    quench_setup,
)
from quadising.sweeps import disorder_ensemble, scaling_sweep
from quadising.zeromodes import analytic_modes, gaussian_fit, pair_fidelity

from conftest import ACCEPTANCE, profile

GOLDEN = json.loads((Path(__file__).parent / "golden" / "disorder_ensemble.json").read_text())


@contextmanager
def criterion(number: int, part: str = ""):
    """Record the outcome of a criterion (or one part of it) and re-raise failures."""
    note = {"detail": ""}
    try:
        yield note
    except BaseException as exc:
        ACCEPTANCE.setdefault(number, {})[part] = (False, f"{note['detail']} [{type(exc).__name__}: {exc}]".strip())
        print(f"FAIL criterion {number} {part}".rstrip())
        raise
    ACCEPTANCE.setdefault(number, {})[part] = (True, note["detail"])
    print(f"PASS criterion {number} {part}: {note['detail']}")


def test_criterion_01_cross_representation():
    with criterion(1) as note:
        t0 = time.perf_counter()
        worst = 0.0
        for N, g, delta in [(3, 0.1, 0.5), (4, 0.05, 0.3), (5, 0.1, 0.5)]:
            p = profile(N, g, delta)
            H = build_spin_hamiltonian(p)
            e_ed = np.linalg.eigvalsh(H.dense())[0]
            s = spectrum(p)
            worst = max(worst, abs(e_ed - (-0.5 * s.epsilons.sum())))
        elapsed = time.perf_counter() - t0
        note["detail"] = f"max |E_ED - E_g| = {worst:.2e}, {elapsed:.1f} s"
        assert worst <= 1e-8
        assert elapsed < 60


def test_criterion_02_chiral_pairing():
    with criterion(2) as note:
        params = ChainParams(80, 5e-4, 0.3)
        profiles = [profile(80, 5e-4, 0.3)] + [profile(80, 5e-4, 0.3, disorder=DisorderSpec(0.05, s)) for s in range(10)]
        reports = [check_chiral_pairing(spectrum(p), tol=1e-9) for p in profiles]
        radius = max(spectrum(p).spectral_radius for p in profiles)
        note["detail"] = (
            f"11 profiles, max residual {max(r.max_pairing_residual for r in reports):.1e}, "
            f"max partner gap {max(r.max_partner_gap for r in reports):.1e} (radius {radius:.2f})"
        )
        assert params.L == 161
        assert all(r.ok for r in reports)


def test_criterion_03_zero_mode_anchor():
    with criterion(3) as note:
        p = profile(80, 5e-4, 0.3)
        d = analytic_modes(p)
        fid = pair_fidelity(d, spectrum(p))
        fit = gaussian_fit(d)
        target = np.sqrt((1 - 0.3) * 5e-4)
        note["detail"] = f"fidelity {fid:.6f}, center {fit.center:.2f} (m_- = {d.m_minus}), curvature {fit.curvature:.5f} vs {target:.5f}"
        assert d.m_minus == -37
        assert fid >= 0.99
        assert abs(fit.center - (-37)) <= 1
        assert abs(fit.curvature - target) <= 0.1 * target


def test_criterion_04_disorder_robustness():
    with criterion(4) as note:
        e = disorder_ensemble(ChainParams(80, 5e-4, 0.3), 0.05, range(50))
        note["detail"] = (
            f"50 seeds, max eps0 {e.max_epsilon0:.1e}, center drift {e.center_drift:.2f}, "
            f"offset from +-37 {e.interface_offset:.2f} (golden drift {GOLDEN['observed']['center_drift']:.2f})"
        )
        assert e.max_epsilon0 < GOLDEN["thresholds"]["max_epsilon0"]
        assert e.center_drift <= GOLDEN["thresholds"]["center_drift"]
        assert e.interface_offset <= 2.0
        assert e.center_drift == pytest.approx(GOLDEN["observed"]["center_drift"], abs=1e-6)


def test_criterion_05_phase_boundary_scaling():
    with criterion(5) as note:
        t0 = time.perf_counter()
        sw = scaling_sweep([30, 60, 120], 3.0, 0.3)
        elapsed = time.perf_counter() - t0
        xc = np.sqrt(0.7 / 3)
        crossings = [c.xi for c in sw.crossings.plus] + [c.xi for c in sw.crossings.minus]
        heights = [h for _, h in sw.peaks]
        xs = [x for x, _ in sw.peaks]
        minus = [chi_peak(s, -1)[0] for s in sw.series]
        note["detail"] = (
            f"crossings {', '.join(f'{x:+.4f}' for x in crossings)} vs +-{xc:.4f}; "
            f"|chi| peaks {', '.join(f'{h:.3f}@{x:.3f}' for x, h in sw.peaks)}; {elapsed:.0f} s"
        )
        assert all(abs(abs(x) - xc) <= 0.02 for x in crossings)
        assert all(c.xi > 0 for c in sw.crossings.plus) and all(c.xi < 0 for c in sw.crossings.minus)
        assert heights[0] < heights[1] < heights[2]
        dist = [abs(x - xc) for x in xs]
        assert dist[0] > dist[1] > dist[2]
        # mirror symmetry, up to finite-difference noise
        np.testing.assert_allclose(minus, [-x for x in xs], atol=1e-4)
        assert elapsed < 300


def test_criterion_06_ldos_equivalence():
    with criterion(6) as note:
        params = params_from_scaled(120, 3.0, 0.3)
        p = profile(params.N, params.g, params.delta)
        s = spectrum(p)
        hist = ldos_histogram(s, bins=500, eta=0.02)
        rec = ldos_recursion_grid(build_h_m(p), depth=150, eta=0.02, bins=500)
        l1 = np.array([l1_distance(hist.values[k], rec.values[k], hist) for k in range(len(hist.cells))])
        m = interface_sites(params).m_plus
        center = int(np.flatnonzero(hist.cells == 0)[0])
        peaks = []
        for grid in (hist, rec):
            w = grid.window_weight(-0.05, 0.05)
            peaks.append((int(grid.cells[np.argmax(w[: center + 1])]), int(grid.cells[center + np.argmax(w[center:])]), w.max() / w[center]))
        note["detail"] = f"max L1 {100 * l1.max():.2f}% over {len(l1)} cells; mid-gap peaks {peaks[0][:2]} / {peaks[1][:2]} (m = +-{m}), contrast {peaks[0][2]:.0f}x"
        assert l1.max() <= 0.05
        for lo, hi, contrast in peaks:
            assert abs(lo + m) <= 1 and abs(hi - m) <= 1
            assert contrast > 5


def _period_law(N, steps, periods=2.5):
    periods_out, refs = [], []
    for g in (0.1, 0.2, 0.3):
        p = profile(N, g, 0.5)
        eps_ana = analytic_modes(p).epsilon0_analytic
        times = np.linspace(0.0, periods * 2 * np.pi / eps_ana, steps)
        res = evolve_and_fidelity(quench_setup(p, times=times, beta=1.0))
        assert res.kappa == pytest.approx(10 * res.epsilon0_ref)
        periods_out.append(extract_period(res.times, res.fidelity).period)
        refs.append(2 * np.pi / res.epsilon0_ref)
    return np.array(periods_out), np.array(refs)


def test_criterion_07_quench_period_reduced():
    with criterion(7, "N=4") as note:
        t0 = time.perf_counter()
        T, ref = _period_law(4, 120)
        elapsed = time.perf_counter() - t0
        note["detail"] = f"T/(2pi/eps0) = {', '.join(f'{r:.4f}' for r in T / ref)}, T = {', '.join(f'{t:.2f}' for t in T)}, {elapsed:.0f} s"
        assert np.all(np.abs(T / ref - 1) <= 0.05)
        assert T[0] > T[1] > T[2]
        assert elapsed <= 180


@pytest.mark.slow
def test_criterion_07_quench_period_full():
    with criterion(7, "N=5") as note:
        t0 = time.perf_counter()
        T, ref = _period_law(5, 105)
        elapsed = time.perf_counter() - t0
        note["detail"] = f"T/(2pi/eps0) = {', '.join(f'{r:.4f}' for r in T / ref)}, T = {', '.join(f'{t:.2f}' for t in T)}, {elapsed / 60:.1f} min"
        assert np.all(np.abs(T / ref - 1) <= 0.05)
        assert T[0] > T[1] > T[2]
        assert elapsed <= 1800


def test_criterion_08_stationarity_controls():
    with criterion(8) as note:
        p = profile(4, 0.1, 0.5)
        dev = {}
        for label, kw in (("kappa=0", dict(kappa=0.0)), ("beta=0", dict(beta=0.0))):
            res = evolve_and_fidelity(quench_setup(p, steps=40, **kw))
            dev[label] = float(np.max(np.abs(res.fidelity - 1)))
        note["detail"] = ", ".join(f"{k}: max |L-1| = {v:.1e}" for k, v in dev.items())
        assert all(v <= 1e-9 for v in dev.values())


def test_criterion_09_pairing_spectrum():
    with criterion(9) as note:
        p = profile(5, 0.1, 0.5)
        eps0 = spectrum(p).epsilon0
        pairs = pairing_spectrum(p, k=5)
        ratios = [pr.gap / eps0 for pr in pairs]
        note["detail"] = f"|E+ - E-|/eps0 = {', '.join(f'{r:.6f}' for r in ratios)}; weights {min(pr.overlap for pr in pairs):.3f}+"
        assert len(pairs) == 5
        assert all(abs(r - 1) <= 0.2 for r in ratios)


def _all_csv_finite(root: Path) -> int:
    n = 0
    for f in root.rglob("*.csv"):
        for col in read_csv(f).values():
            assert np.all(np.isfinite(col)), f
        n += 1
    return n


def test_criterion_10_numerical_hygiene(tmp_path):
    with criterion(10) as note:
        params = params_from_scaled(30, 3.0, 0.3)
        p = profile(params.N, params.g, params.delta)
        ratios = [richardson_ratio(p, j, 0.05) for j in range(-20, 21, 5)]
        runs = [
            ["spectrum", "--N", "80", "--g", "5e-4", "--delta", "0.3"],
            ["zeromodes", "--N", "80", "--g", "5e-4", "--delta", "0.3"],
            ["observables", "--N", "30", "--g", str(params.g), "--delta", "0.3"],
            ["ldos", "--N", "40", "--g", str(3 / 1600), "--delta", "0.3", "--method", "histogram"],
            ["ldos", "--N", "40", "--g", str(3 / 1600), "--delta", "0.3", "--method", "recursion"],
            ["quench", "--N", "3", "--g", "0.2", "--delta", "0.5", "--steps", "120"],
            ["sweep", "figure4a", "--N", "5", "--delta", "0.5", "--g-min", "0.05", "--g-max", "0.35", "--points", "30"],
            ["sweep", "disorder", "--N", "80", "--g", "5e-4", "--delta", "0.3", "--w", "0.05", "--n-seeds", "5"],
        ]
        identical = 0
        files = 0
        for k, argv in enumerate(runs):
            a, b = tmp_path / f"{k}a", tmp_path / f"{k}b"
            assert main([*argv, "--out", str(a)]) == 0
            assert main([argv[0], "--config", str(a / "manifest.json"), "--out", str(b)]) == 0
            files += _all_csv_finite(a)
            for f in a.rglob("*.csv"):
                assert f.read_bytes() == (b / f.relative_to(a)).read_bytes(), f
                identical += 1
        note["detail"] = f"Richardson ratios {min(ratios):.3f}..{max(ratios):.3f}; {files} CSV files finite; {identical} reruns bit-identical"
        assert all(abs(r - 4) <= 0.5 for r in ratios)
