"""Local density of states of the Majorana lattice.

Two independent routes: exact eigenvector weights binned on an energy grid
(histogram), and the Haydock recursion, a Lanczos tridiagonalisation from a
single-site seed closed by a continued fraction. Energies are eigenvalues of
``h_M``. Both are scaled by ``lambda = bandwidth / (2N)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .io import write_csv
from .majorana import MajoranaMatrix, SpectralData
from .tridiag import tridiag_eigvalsh

BREAKDOWN_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class LdosGrid:
    """``values[c, k]`` is ``D_j(energies[k])`` for cell ``cells[c]``."""

    energies: np.ndarray
    values: np.ndarray
    cells: np.ndarray
    norm_lambda: float
    bandwidth: float
    bin_width: float
    eta: float

    def cell(self, j: int) -> np.ndarray:
        return self.values[int(np.flatnonzero(self.cells == j)[0])]

    def total_weight(self) -> np.ndarray:
        """Per-cell number of states, ``sum_eps D_j * d_eps / lambda`` (2 when complete)."""
        return self.values.sum(axis=1) * self.bin_width / self.norm_lambda

    def window_weight(self, lo: float, hi: float) -> np.ndarray:
        mask = (self.energies >= lo) & (self.energies <= hi)
        return self.values[:, mask].sum(axis=1) * self.bin_width / self.norm_lambda


@dataclass(frozen=True)
class LanczosCoefficients:
    """Diagonal ``a_k`` and couplings ``b_k`` (``b_k`` links levels k and k+1)."""

    a: np.ndarray
    b: np.ndarray
    breakdown: bool


def normalisation(m: MajoranaMatrix, bandwidth: float) -> float:
    return bandwidth / (2 * m.N) if m.N > 0 else bandwidth


def energy_grid(m: MajoranaMatrix, bins: int, eta: float = 0.0) -> tuple[np.ndarray, float]:
    """Bin centres on ``[-Lambda, Lambda]``.

    ``Lambda`` is the Gershgorin radius padded so that Lorentzian tails of width
    ``eta`` keep all but ~1% of the weight inside the grid.
    """
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    R = m.spectral_radius_bound()
    half = 1.1 * R + 50.0 * eta
    edges = np.linspace(-half, half, bins + 1)
    return 0.5 * (edges[1:] + edges[:-1]), float(edges[1] - edges[0])


def lorentzian(x, eta: float):
    return (eta / np.pi) / (x * x + eta * eta)


def cell_weights(s: SpectralData) -> np.ndarray:
    """``|<psi|j>_A|^2 + |<psi|j>_B|^2`` as an ``(L, 2L)`` array."""
    v2 = s.vectors**2
    return v2[0::2] + v2[1::2]


def ldos_histogram(s: SpectralData, bins: int, eta: float = 0.0, cells=None) -> LdosGrid:
    """Histogram LDOS from the full eigendecomposition.

    With ``eta == 0`` each eigenvector's cell weight lands in the bin containing its
    eigenvalue (density = mass / bin width). With ``eta > 0`` every eigenvalue is
    replaced by a Lorentzian of half-width ``eta`` sampled at the bin centres, the
    smoothing used when comparing against the recursion.

    Raises:
        ValueError: ``bins < 2``.
    """
    m = s.matrix
    E, width = energy_grid(m, bins, eta)
    w = cell_weights(s)
    all_cells = np.arange(-m.N, m.N + 1)
    cells = all_cells if cells is None else np.asarray(cells)
    w = w[cells + m.N]
    bandwidth = float(s.lambdas[-1] - s.lambdas[0])
    lam = normalisation(m, bandwidth)
    if eta > 0:
        kern = lorentzian(E[:, None] - s.lambdas[None, :], eta)
        dens = w @ kern.T
    else:
        edges = np.concatenate((E - width / 2, [E[-1] + width / 2]))
        dens = np.stack([np.histogram(s.lambdas, bins=edges, weights=row)[0] for row in w]) / width
    return LdosGrid(E, lam * dens, cells, lam, bandwidth, width, eta)


def lanczos(m: MajoranaMatrix, seed: np.ndarray, depth: int) -> LanczosCoefficients:
    """Three-term Lanczos recursion without reorthogonalisation.

    Stops early (``breakdown``) when a coupling falls below ``1e-14``; the finite
    continued fraction is then exact. ``depth`` is capped at the matrix dimension.
    """
    if depth < 2:
        raise ValueError("recursion depth must be >= 2")
    depth = min(depth, m.dim)
    v = np.asarray(seed, dtype=float)
    v = v / np.linalg.norm(v)
    v_prev = np.zeros_like(v)
    a = np.empty(depth)
    b = np.empty(depth)
    b_prev = 0.0
    for k in range(depth):
        w = m.matvec(v) - b_prev * v_prev
        a[k] = w @ v
        w -= a[k] * v
        b[k] = np.linalg.norm(w)
        if b[k] < BREAKDOWN_TOL:
            return LanczosCoefficients(a[: k + 1], b[:k], True)
        v_prev, v, b_prev = v, w / b[k], b[k]
    if depth == m.dim:
        # Krylov space exhausted; the final coupling is rounding noise
        return LanczosCoefficients(a, b[: depth - 1], True)
    return LanczosCoefficients(a, b, False)


def square_root_terminator(z: np.ndarray, a_inf: float, b_inf: float) -> np.ndarray:
    """Green's function of a uniform semi-infinite chain, ``Im t < 0`` for ``Im z > 0``."""
    zz = z - a_inf
    return (zz - np.sqrt(zz - 2 * b_inf) * np.sqrt(zz + 2 * b_inf)) / (2 * b_inf**2)


def continued_fraction(z: np.ndarray, c: LanczosCoefficients, terminate: bool = True) -> np.ndarray:
    """Diagonal Green's function ``<seed|(z - h_M)^-1|seed>``.

    The tail beyond the last level is a square-root terminator built from the
    coefficients averaged over the final quarter of levels, unless the recursion
    broke down (finite fraction, exact).
    """
    z = np.asarray(z, dtype=complex)
    K = c.a.shape[0]
    if terminate and not c.breakdown:
        q = max(1, K // 4)
        tail = square_root_terminator(z, float(c.a[-q:].mean()), float(c.b[-q:].mean()))
        g = 1.0 / (z - c.a[-1] - c.b[-1] ** 2 * tail)
    else:
        g = 1.0 / (z - c.a[-1])
    for k in range(K - 2, -1, -1):
        g = 1.0 / (z - c.a[k] - c.b[k] ** 2 * g)
    return g


def jacobi_moments(c: LanczosCoefficients, kmax: int) -> np.ndarray:
    """``(T^k)_{00}`` for the Jacobi matrix of the recursion, ``k = 0..kmax``."""
    K = c.a.shape[0]
    nb = min(K - 1, c.b.shape[0])
    T = np.diag(c.a) + np.diag(c.b[:nb], 1) + np.diag(c.b[:nb], -1)
    e = np.zeros(K)
    e[0] = 1.0
    out = np.empty(kmax + 1)
    v = e
    for k in range(kmax + 1):
        out[k] = v[0]
        v = T @ v
    return out


def ldos_recursion(
    m: MajoranaMatrix,
    cell: int,
    depth: int,
    eta: float,
    energies: np.ndarray | None = None,
    bins: int = 500,
    bandwidth: float | None = None,
) -> np.ndarray:
    """Haydock LDOS of one unit cell on ``energies`` (default: the histogram grid).

    Runs the recursion from ``|j>_A`` and from ``|j>_B`` and sums
    ``-Im G(eps + i eta) / pi``; the result carries the same ``lambda`` factor as the
    histogram.

    Raises:
        ValueError: ``depth < 2`` or ``eta <= 0``.
    """
    if eta <= 0:
        raise ValueError("broadening eta must be > 0")
    if energies is None:
        energies, _ = energy_grid(m, bins, eta)
    z = np.asarray(energies) + 1j * eta
    total = np.zeros(z.shape[0])
    for sub in ("A", "B"):
        seed = np.zeros(m.dim)
        seed[m.index(cell, sub)] = 1.0
        c = lanczos(m, seed, depth)
        total += -continued_fraction(z, c).imag / np.pi
    if bandwidth is None:
        bandwidth = _bandwidth(m)
    return normalisation(m, bandwidth) * total


def _bandwidth(m: MajoranaMatrix) -> float:
    lam = tridiag_eigvalsh(m.diagonal, m.subdiagonal)
    return float(lam[-1] - lam[0])


def ldos_recursion_grid(m: MajoranaMatrix, depth: int, eta: float, bins: int = 500, cells=None) -> LdosGrid:
    E, width = energy_grid(m, bins, eta)
    cells = np.arange(-m.N, m.N + 1) if cells is None else np.asarray(cells)
    bandwidth = _bandwidth(m)
    lam = normalisation(m, bandwidth)
    vals = np.stack([ldos_recursion(m, int(j), depth, eta, E, bandwidth=bandwidth) for j in cells])
    return LdosGrid(E, vals, cells, lam, bandwidth, width, eta)


def l1_distance(x: np.ndarray, y: np.ndarray, grid: LdosGrid) -> float:
    """``int |x - y| d eps`` relative to the cell's total weight (2 states)."""
    return float(np.sum(np.abs(x - y)) * grid.bin_width / (2.0 * grid.norm_lambda))


def write_heatmap_csv(path, grid: LdosGrid):
    jj, ee = np.meshgrid(grid.cells, grid.energies, indexing="ij")
    return write_csv(path, ["j", "epsilon", "D"], [jj.ravel(), ee.ravel(), grid.values.ravel()])
