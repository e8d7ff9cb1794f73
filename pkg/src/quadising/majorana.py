"""Majorana-lattice core matrix, its spectrum and the chiral pairing.

With ``a_j = c_j^+ + c_j`` and ``b_j = -i(c_j^+ - c_j)`` the spin chain becomes
``H = phi^+ h_M phi`` for ``phi^+ = (a_{-N}, i b_{-N}, ..., a_N, i b_N)``. In the
interleaved basis ``A_{-N}, B_{-N}, A_{-N+1}, ...`` the core matrix is tridiagonal
with zero diagonal: ``f_j/2`` on the intracell bond ``A_j - B_j`` and ``-J/2`` on the
intercell bond ``B_j - A_{j+1}``. Quasiparticle energies are ``eps_n = 4 |lambda_n|``
and ``E_g = -(1/2) sum_n eps_n = -sum_{lambda > 0} 2 lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .io import write_csv
from .model import FieldProfile
from .tridiag import tridiag_eigh, tridiag_eigvalsh

# relative tolerance (times spectral radius) for treating eigenvalues as tied
TIE_TOL = 64 * np.finfo(float).eps
DEGENERATE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class MajoranaMatrix:
    """``2L x 2L`` real symmetric tridiagonal ``h_M``.

    ``diagonal`` is identically zero for any field profile; it is a field only so
    that tests can inject a chirality-breaking perturbation.
    """

    subdiagonal: np.ndarray
    diagonal: np.ndarray
    N: int
    J: float

    @property
    def dim(self) -> int:
        return self.diagonal.shape[0]

    @property
    def L(self) -> int:
        return self.dim // 2

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.subdiagonal, 1)
            + np.diag(self.subdiagonal, -1)
        )

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.subdiagonal * v[1:]
        out[1:] += self.subdiagonal * v[:-1]
        return out

    def spectral_radius_bound(self) -> float:
        """Gershgorin bound on ``max |lambda|``."""
        e = np.abs(self.subdiagonal)
        row = np.abs(self.diagonal).copy()
        row[:-1] += e
        row[1:] += e
        return float(row.max())

    def index(self, j: int, sublattice: str) -> int:
        """Basis position of ``|j>_A`` or ``|j>_B``."""
        if abs(j) > self.N:
            raise IndexError(f"cell {j} outside -{self.N}..{self.N}")
        return 2 * (j + self.N) + {"A": 0, "B": 1}[sublattice]

    def with_diagonal(self, diagonal) -> MajoranaMatrix:
        return MajoranaMatrix(self.subdiagonal, np.asarray(diagonal, float), self.N, self.J)


@dataclass(frozen=True)
class ChiralOperator:
    """Diagonal involution ``C = diag(+1, -1, +1, -1, ...)`` (A -> +, B -> -)."""

    signs: np.ndarray

    @classmethod
    def for_dim(cls, dim: int) -> ChiralOperator:
        signs = np.ones(dim)
        signs[1::2] = -1.0
        return cls(signs)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return (self.signs * v.T).T

    def anticommutes(self, m: MajoranaMatrix) -> bool:
        """``C h_M C^-1 == -h_M`` exactly (bonds only connect A to B, zero diagonal)."""
        C = np.diag(self.signs)
        h = m.dense()
        return bool(np.array_equal(C @ h @ C, -h))


@dataclass(frozen=True, eq=False)
class SpectralData:
    lambdas: np.ndarray
    vectors: np.ndarray
    epsilons: np.ndarray
    ground_energy: float
    matrix: MajoranaMatrix
    numerically_degenerate: bool = False

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.lambdas)))

    @property
    def epsilon0(self) -> float:
        """Splitting of the hybridised near-zero pair (0 when numerically degenerate)."""
        return 0.0 if self.numerically_degenerate else float(self.epsilons[0])

    def near_zero_pair(self) -> np.ndarray:
        """Indices of the two smallest-``|lambda|`` eigenpairs, ordered by ``lambda``."""
        idx = np.argsort(np.abs(self.lambdas), kind="stable")[:2]
        return np.sort(idx)


@dataclass(frozen=True)
class ChiralReport:
    max_pairing_residual: float
    max_partner_gap: float
    anticommutes: bool
    tolerance: float
    ok: bool = field(default=False)


def majorana_offdiagonal(values, J: float) -> np.ndarray:
    f = np.asarray(values, dtype=float)
    off = np.empty(2 * f.shape[0] - 1)
    off[0::2] = 0.5 * f
    off[1::2] = -0.5 * J
    return off


def build_h_m(profile: FieldProfile, J: float | None = None) -> MajoranaMatrix:
    """Core matrix of the Majorana lattice for a field profile."""
    J = profile.J if J is None else float(J)
    off = majorana_offdiagonal(profile.values, J)
    return MajoranaMatrix(off, np.zeros(2 * profile.L), profile.N, J)


def quasiparticle_energies(lambdas: np.ndarray) -> np.ndarray:
    """``eps_n = 4|lambda_n|``, one per chiral pair, ascending.

    Each pair contributes the mean of its two magnitudes so tiny numerical
    asymmetry between ``lambda`` and ``-lambda`` does not bias the result.
    """
    mags = np.sort(np.abs(lambdas))
    if mags.shape[0] % 2:
        raise ValueError("odd number of eigenvalues; not a Majorana spectrum")
    return 2.0 * (mags[0::2] + mags[1::2])


def ground_energy_from_fields(values, J: float = 1.0) -> float:
    """``E_g = -sum |lambda|`` from eigenvalues only (no eigenvectors)."""
    off = majorana_offdiagonal(values, J)
    lam = tridiag_eigvalsh(np.zeros(off.shape[0] + 1), off)
    return -float(np.sum(np.abs(lam)))


def ground_energy(profile: FieldProfile) -> float:
    return ground_energy_from_fields(profile.values, profile.J)


def _canonicalise(lam: np.ndarray, vecs: np.ndarray, radius: float):
    n = lam.shape[0]
    tol = TIE_TOL * max(radius, 1.0)
    peak = np.argmax(np.abs(vecs), axis=0)
    order = np.argsort(lam, kind="stable")
    lam, vecs, peak = lam[order], vecs[:, order], peak[order]
    # reorder runs of tied eigenvalues by the position of the largest component
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and lam[stop] - lam[start] <= tol:
            stop += 1
        if stop - start > 1:
            sub = np.argsort(peak[start:stop], kind="stable") + start
            lam[start:stop] = lam[sub]
            vecs[:, start:stop] = vecs[:, sub]
            peak[start:stop] = peak[sub]
        start = stop
    signs = np.sign(vecs[peak, np.arange(n)])
    signs[signs == 0] = 1.0
    return lam, vecs * signs


def diagonalize(m: MajoranaMatrix) -> SpectralData:
    """Full eigendecomposition of ``h_M`` with deterministic ordering and signs.

    Eigenvalues ascend; exact ties are ordered by the index of each vector's
    largest-magnitude component, and that component is made positive.

    Raises:
        EigensolverError: QL iteration hit its sweep cap.
    """
    lam, vecs = tridiag_eigh(m.diagonal, m.subdiagonal)
    radius = float(np.max(np.abs(lam)))
    lam, vecs = _canonicalise(lam, vecs, radius)
    eps = quasiparticle_energies(lam)
    mags = np.sort(np.abs(lam))
    degenerate = bool(mags[1] < DEGENERATE_TOL * radius) if lam.shape[0] >= 2 else False
    return SpectralData(
        lambdas=lam,
        vectors=vecs,
        epsilons=eps,
        ground_energy=-0.5 * float(np.sum(eps)),
        matrix=m,
        numerically_degenerate=degenerate,
    )


def spectrum(profile: FieldProfile) -> SpectralData:
    return diagonalize(build_h_m(profile))


def check_chiral_pairing(s: SpectralData, tol: float = 1e-9) -> ChiralReport:
    """Verify that ``C phi_n`` is an eigenvector with eigenvalue ``-lambda_n``.

    Reports the largest ``|| h_M C phi + lambda C phi ||`` over all eigenpairs and
    the largest mismatch between the sorted spectrum and its negation.
    """
    m = s.matrix
    C = ChiralOperator.for_dim(m.dim)
    cphi = C.apply(s.vectors)
    hc = np.column_stack([m.matvec(cphi[:, k]) for k in range(m.dim)])
    resid = np.linalg.norm(hc + cphi * s.lambdas, axis=0)
    gap = np.abs(np.sort(s.lambdas) + np.sort(s.lambdas)[::-1])
    anti = C.anticommutes(m)
    max_resid = float(resid.max())
    max_gap = float(gap.max())
    ok = anti and max_resid <= tol and max_gap <= 1e-10 * max(s.spectral_radius, 1e-300)
    return ChiralReport(max_resid, max_gap, anti, tol, ok)


def write_spectrum_csv(path, s: SpectralData):
    n = np.arange(s.lambdas.shape[0])
    return write_csv(path, ["n", "lambda", "epsilon"], [n, s.lambdas, 4.0 * np.abs(s.lambdas)])


def dump_banded(path, m: MajoranaMatrix) -> None:
    """Plain-text band dump: one row per basis state ``k  label  diag  sub(k,k+1)``."""
    lines = [f"# dim {m.dim} N {m.N} J {m.J!r}"]
    for k in range(m.dim):
        j = k // 2 - m.N
        label = f"{'AB'[k % 2]}{j}"
        sub = repr(float(m.subdiagonal[k])) if k < m.dim - 1 else "-"
        lines.append(f"{k} {label} {float(m.diagonal[k])!r} {sub}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
