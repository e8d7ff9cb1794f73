import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from quadising import tridiag
from quadising.tridiag import EigensolverError, tridiag_eigh, tridiag_eigvalsh


@given(n=st.integers(1, 60), seed=st.integers(0, 2**32 - 1), scale=st.floats(1e-6, 1e6))
@settings(max_examples=80, deadline=None)
def test_matches_lapack(n, seed, scale):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=n) * scale
    e = rng.normal(size=n - 1) * scale
    ref = eigh_tridiagonal(d, e, eigvals_only=True)
    w = tridiag_eigvalsh(d, e)
    norm = np.abs(d).max() + 2 * np.abs(e).max(initial=0)
    assert np.max(np.abs(w - ref)) <= 1e-13 * norm
    w2, V = tridiag_eigh(d, e)
    np.testing.assert_array_equal(w, w2)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.max(np.abs(T @ V - V * w2)) <= 1e-12 * norm
    assert np.max(np.abs(V.T @ V - np.eye(n))) <= 1e-12


def test_large_majorana_like_matrix():
    rng = np.random.default_rng(5)
    n = 482
    e = np.where(np.arange(n - 1) % 2 == 0, 0.5 * (0.3 + 1e-3 * rng.random(n - 1)), -0.5)
    w, V = tridiag_eigh(np.zeros(n), e)
    ref = eigh_tridiagonal(np.zeros(n), e, eigvals_only=True)
    assert np.max(np.abs(w - ref)) < 1e-13


def test_decoupled_and_degenerate_blocks():
    d = np.array([1.0, 1.0, 1.0, -2.0])
    e = np.zeros(3)
    w, V = tridiag_eigh(d, e)
    np.testing.assert_array_equal(w, [-2.0, 1.0, 1.0, 1.0])
    assert np.allclose(np.abs(V).sum(axis=0), 1.0)


def test_single_element():
    w, V = tridiag_eigh([3.5], [])
    assert w[0] == 3.5 and V[0, 0] == 1.0


def test_bad_shapes():
    with pytest.raises(ValueError):
        tridiag_eigvalsh([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        tridiag_eigvalsh([], [])


def test_sweep_cap_reports_failure(monkeypatch):
    monkeypatch.setattr(tridiag, "MAX_SWEEPS_PER_EIGENVALUE", 0)
    with pytest.raises(EigensolverError, match="failed to converge"):
        tridiag.tridiag_eigvalsh(np.zeros(6), np.ones(5))
