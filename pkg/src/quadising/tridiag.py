"""Implicit-shift QL eigensolver for real symmetric tridiagonal matrices.

The kernel follows the classic ``tql2`` recurrence (Bowdler, Martin, Reinsch and
Wilkinson): plane rotations chase the bulge from the bottom of the unreduced block
up to row ``l`` with an origin shift taken from the leading 2x2 block. Deflation is
tested against the running max of ``|d_i| + |e_i|``, so eigenvalues come out with
absolute accuracy of a few ulps of the matrix norm.

Eigenvectors are accumulated as *rows* of ``Z`` so every rotation touches two
contiguous rows.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_SWEEPS_PER_EIGENVALUE = 60


class EigensolverError(RuntimeError):
    """QL iteration did not converge within the sweep cap."""


@njit(cache=True)
def _tql(d, e, Z, want_vectors, max_iter):
    # d: diagonal (n), overwritten by eigenvalues; e: off-diagonal padded to n,
    # e[i] couples i and i+1, e[n-1] = 0. Returns -1 on success or the failing row.
    n = d.shape[0]
    eps = 2.0**-52
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n - 1:
            if abs(e[m]) <= eps * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    return l
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = np.hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h

                p = d[m]
                c = 1.0
                c2 = c
                c3 = c
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = np.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if want_vectors:
                        for k in range(n):
                            h = Z[i + 1, k]
                            Z[i + 1, k] = s * Z[i, k] + c * h
                            Z[i, k] = c * Z[i, k] - s * h
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= eps * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return -1


def _prepare(diagonal, offdiagonal):
    d = np.array(diagonal, dtype=np.float64)
    n = d.shape[0]
    off = np.asarray(offdiagonal, dtype=np.float64)
    if n == 0:
        raise ValueError("empty matrix")
    if off.shape != (n - 1,):
        raise ValueError(f"off-diagonal must have length {n - 1}, got {off.shape}")
    e = np.zeros(n)
    e[: n - 1] = off
    return d, e


def _fail(diagonal, offdiagonal, row):
    off = np.asarray(offdiagonal)
    norm = float(np.max(np.abs(diagonal)) + 2 * np.max(np.abs(off), initial=0.0))
    raise EigensolverError(
        f"QL iteration failed to converge at row {row} of {len(diagonal)} "
        f"(norm bound {norm:.3e}, max |offdiag| {np.max(np.abs(off), initial=0.0):.3e}, "
        f"cap {MAX_SWEEPS_PER_EIGENVALUE} sweeps)"
    )


def tridiag_eigvalsh(diagonal, offdiagonal) -> np.ndarray:
    """Eigenvalues (ascending) of the symmetric tridiagonal matrix."""
    d, e = _prepare(diagonal, offdiagonal)
    dummy = np.zeros((1, 1))
    row = _tql(d, e, dummy, False, MAX_SWEEPS_PER_EIGENVALUE)
    if row >= 0:
        _fail(diagonal, offdiagonal, row)
    return np.sort(d)


def tridiag_eigh(diagonal, offdiagonal) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition ``(w, V)``, ``T V[:, k] = w[k] V[:, k]``, ascending ``w``.

    No sign or tie normalisation is applied here; see ``majorana.diagonalize``.
    """
    d, e = _prepare(diagonal, offdiagonal)
    n = d.shape[0]
    Z = np.eye(n)
    row = _tql(d, e, Z, True, MAX_SWEEPS_PER_EIGENVALUE)
    if row >= 0:
        _fail(diagonal, offdiagonal, row)
    order = np.argsort(d, kind="stable")
    return d[order], Z[order].T.copy()
