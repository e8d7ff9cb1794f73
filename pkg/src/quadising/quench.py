"""Many-body engine: spin Hamiltonian, zero-mode operator, thermal quench, fidelity.

Basis: ``sigma^z`` product states with site ``-N`` as the most significant bit;
bit value 0 is spin up (``sigma^z = +1``, occupied Jordan-Wigner fermion).
Parity ``P = prod_j (-sigma_j^z)`` is ``(-1)^{#up}``.

The fidelity kernel works in the eigenbases of ``H_pos`` (``W, E``) and
``H_pre`` (``V, p``): with ``B = W^T V diag(sqrt p)``,
``sqrt(rho0) rho(t) sqrt(rho0)`` is unitarily similar to ``K K^+`` where
``K = B^T exp(-iEt) B``, so each time point costs one matmul and one Hermitian
eigenvalue problem.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .majorana import build_h_m, diagonalize
from .model import FieldProfile
from .zeromodes import ZeroModeData, analytic_modes

MAX_SITES = 14
NEGATIVE_EIG_TOL = 1e-10


class NumericalDegradationError(RuntimeError):
    """A matrix that must be positive semidefinite has a clearly negative eigenvalue."""


class NoOscillationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ManyBodyOperator:
    matrix: sp.csr_matrix
    L: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def hermiticity_error(self) -> float:
        d = self.matrix - self.matrix.conj().T
        return float(abs(d).max()) if d.nnz else 0.0

    def parity_commutator_norm(self, n_vectors: int = 4, seed: int = 0) -> float:
        """Largest ``|[H, P] v| / |v|`` over random vectors."""
        rng = np.random.default_rng(seed)
        P = parity_diagonal(self.L)
        worst = 0.0
        for _ in range(n_vectors):
            v = rng.normal(size=self.dim)
            v /= np.linalg.norm(v)
            c = self.matrix @ (P * v) - P * (self.matrix @ v)
            worst = max(worst, float(np.linalg.norm(c)))
        return worst


@dataclass(frozen=True, eq=False)
class ZeroModeOperator:
    d0: sp.csr_matrix
    route: str
    modes: ZeroModeData

    @property
    def majorana(self) -> sp.csr_matrix:
        """``d0 + d0^+`` (real: ``sum_j alpha_j a_j``)."""
        return (self.d0 + self.d0.conj().T).real.tocsr()


@dataclass(frozen=True, eq=False)
class QuenchSetup:
    kappa: float
    beta: float
    times: np.ndarray
    H_pre: ManyBodyOperator
    H_pos: ManyBodyOperator
    d0: ZeroModeOperator
    epsilon0_numeric: float
    epsilon0_analytic: float


@dataclass(frozen=True, eq=False)
class QuenchResult:
    times: np.ndarray
    fidelity: np.ndarray
    epsilon0_ref: float
    epsilon0_analytic: float
    kappa: float
    beta: float
    period: float | None = None

    @property
    def period_predicted(self) -> float:
        return 2 * np.pi / self.epsilon0_ref

    def summary(self) -> dict:
        return {
            "kappa": self.kappa,
            "beta": self.beta,
            "epsilon0_numeric": self.epsilon0_ref,
            "epsilon0_analytic": self.epsilon0_analytic,
            "period_extracted": self.period,
            "period_predicted": self.period_predicted,
        }


@dataclass(frozen=True)
class PeriodEstimate:
    period: float
    frequency: float
    revival_time: float | None
    periods_covered: float
    points_per_period: float


@dataclass(frozen=True)
class PartnerPair:
    E_plus: float
    E_minus: float
    overlap: float

    @property
    def gap(self) -> float:
        return abs(self.E_plus - self.E_minus)


# ---------------------------------------------------------------- basis helpers


def _bits(L: int) -> np.ndarray:
    """``bits[k, s]``: occupation bit of tensor position ``k`` in basis state ``s``."""
    s = np.arange(2**L)
    return (s[None, :] >> (L - 1 - np.arange(L))[:, None]) & 1


def _check_size(L: int, cap: int) -> None:
    if L > cap:
        dim = 2**L
        gib = dim * dim * 16 / 2**30
        raise MemoryError(
            f"L={L} exceeds the cap of {cap} sites: dim={dim}, "
            f"a dense complex operator needs ~{gib:.1f} GiB"
        )


def sigma_z_diagonal(L: int, k: int) -> np.ndarray:
    return 1.0 - 2.0 * _bits(L)[k]


def parity_diagonal(L: int) -> np.ndarray:
    """Diagonal of ``prod_j (-sigma_j^z)``."""
    ups = np.sum(1 - _bits(L), axis=0)
    return np.where(ups % 2 == 0, 1.0, -1.0)


def build_spin_hamiltonian(profile: FieldProfile, J: float | None = None, cap: int = MAX_SITES) -> ManyBodyOperator:
    """``H = -J sum sigma^x_j sigma^x_{j+1} + sum f_j sigma^z_j`` as a sparse matrix.

    Raises:
        MemoryError: more than ``cap`` sites.
    """
    L = profile.L
    _check_size(L, cap)
    J = profile.J if J is None else float(J)
    dim = 2**L
    bits = _bits(L)
    diag = np.asarray(profile.values) @ (1.0 - 2.0 * bits)
    s = np.arange(dim)
    rows, cols, vals = [s], [s], [diag]
    if J != 0:
        for k in range(L - 1):
            mask = (1 << (L - 1 - k)) | (1 << (L - 2 - k))
            rows.append(s)
            cols.append(s ^ mask)
            vals.append(np.full(dim, -J))
    H = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim))
    H.sum_duplicates()
    return ManyBodyOperator(H, L)


def jw_annihilation(L: int, k: int) -> sp.csr_matrix:
    """``c_k = prod_{l<k}(-sigma^z_l) sigma^-_k`` built from bit arithmetic."""
    bits = _bits(L)
    s = np.arange(2**L)
    occupied = bits[k] == 0
    string = np.prod(2.0 * bits[:k] - 1.0, axis=0) if k else np.ones(2**L)
    src = s[occupied]
    dst = src | (1 << (L - 1 - k))
    return sp.csr_matrix((string[occupied], (dst, src)), shape=(2**L, 2**L))


def _pauli_string(ops: dict, L: int) -> sp.csr_matrix:
    eye = sp.identity(2, format="csr", dtype=complex)
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), [ops.get(k, eye) for k in range(L)])


_SX = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
_SY = sp.csr_matrix(np.array([[0, -1j], [1j, 0]]))
_MSZ = sp.csr_matrix(np.array([[-1, 0], [0, 1]], dtype=complex))


def build_d0(profile: FieldProfile, modes: ZeroModeData | None = None, route: str = "fermion") -> ZeroModeOperator:
    """Zero-mode fermion ``d0 = (1/2) sum_j alpha_j (c_j^+ + c_j) - (i/2) sum_j beta_j b_j``.

    ``route="fermion"`` assembles it from Jordan-Wigner ``c_j`` matrices;
    ``route="spin"`` from the Pauli strings ``prod(-sigma^z) sigma^x`` and
    ``prod(-sigma^z) sigma^y``. On a clean profile ``beta_j = alpha_{-j}``.
    """
    if modes is None:
        modes = analytic_modes(profile)
    L, N = profile.L, profile.N
    _check_size(L, MAX_SITES)
    dim = 2**L
    d0 = sp.csr_matrix((dim, dim), dtype=complex)
    if route == "fermion":
        for j, a in zip(modes.sites_A, modes.alpha):
            c = jw_annihilation(L, j + N)
            d0 = d0 + 0.5 * a * (c + c.T)
        for j, b in zip(modes.sites_B, modes.beta):
            c = jw_annihilation(L, j + N)
            # b_j = -i (c^+ - c)
            d0 = d0 - 0.5j * b * (-1j) * (c.T - c)
    elif route == "spin":
        for j, a in zip(modes.sites_A, modes.alpha):
            k = j + N
            d0 = d0 + 0.5 * a * _pauli_string({**{l: _MSZ for l in range(k)}, k: _SX}, L)
        for j, b in zip(modes.sites_B, modes.beta):
            k = j + N
            d0 = d0 - 0.5j * b * _pauli_string({**{l: _MSZ for l in range(k)}, k: _SY}, L)
    else:
        raise ValueError(f"unknown route {route!r}")
    return ZeroModeOperator(d0.tocsr(), route, modes)


# ---------------------------------------------------------------- thermal state and fidelity


def _thermal_weights(energies: np.ndarray, beta: float) -> np.ndarray:
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def thermal_state(H: ManyBodyOperator | np.ndarray, beta: float) -> np.ndarray:
    """``exp(-beta H) / Z`` via eigendecomposition, eigenvalues shifted by their minimum."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    M = H.dense() if isinstance(H, ManyBodyOperator) else np.asarray(H)
    E, V = sla.eigh(M)
    p = _thermal_weights(E, beta)
    return (V * p) @ V.conj().T


def hermitian_sqrt(rho: np.ndarray, tol: float = NEGATIVE_EIG_TOL) -> np.ndarray:
    w, V = sla.eigh(rho)
    if w.min() < -tol:
        raise NumericalDegradationError(f"eigenvalue {w.min():.3e} below -{tol:g}")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray, tol: float = NEGATIVE_EIG_TOL) -> float:
    """``[Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2`` with Hermitian square roots."""
    s = hermitian_sqrt(rho, tol)
    inner = s @ sigma @ s
    w = sla.eigvalsh(0.5 * (inner + inner.conj().T))
    if w.min() < -tol:
        raise NumericalDegradationError(f"inner-product eigenvalue {w.min():.3e} below -{tol:g}")
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def quench_setup(
    profile: FieldProfile,
    kappa: float | None = None,
    beta: float | None = None,
    times=None,
    steps: int = 400,
    periods: float = 2.5,
) -> QuenchSetup:
    """Pre/post-quench pair ``H_pre = H + kappa (d0 + d0^+)``, ``H_pos = H``.

    Defaults: ``kappa = 10 eps0`` (numerical splitting from the Majorana spectrum),
    ``beta = 1/J``, and ``steps`` times over ``periods`` multiples of
    ``2 pi / eps0_analytic``.
    """
    modes = analytic_modes(profile)
    eps_num = diagonalize(build_h_m(profile)).epsilon0
    eps_ana = modes.epsilon0_analytic
    if kappa is None:
        kappa = 10.0 * eps_num
    if beta is None:
        beta = 1.0 / profile.J
    if times is None:
        if eps_ana <= 0:
            raise ValueError("cannot build a default time grid: analytic splitting is zero")
        times = np.linspace(0.0, periods * 2 * np.pi / eps_ana, steps)
    H = build_spin_hamiltonian(profile)
    d0 = build_d0(profile, modes)
    H_pre = ManyBodyOperator((H.matrix + kappa * d0.majorana).tocsr(), H.L)
    return QuenchSetup(float(kappa), float(beta), np.asarray(times, dtype=float), H_pre, H, d0, eps_num, eps_ana)


class FidelityKernel:
    """Precomputed eigenbases for repeated ``L(t)`` evaluations."""

    def __init__(self, setup: QuenchSetup):
        self.setup = setup
        self.E, W = sla.eigh(setup.H_pos.dense())
        Ep, V = sla.eigh(setup.H_pre.dense())
        self.p = _thermal_weights(Ep, setup.beta)
        self._V = V
        self._W = W
        self.B = (W.T @ V) * np.sqrt(self.p)

    def rho0(self) -> np.ndarray:
        return (self._V * self.p) @ self._V.T

    def rho(self, t: float) -> np.ndarray:
        """``exp(-iHt) rho0 exp(iHt)`` in the computational basis."""
        U = (self._W * np.exp(-1j * self.E * t)) @ self._W.T
        r0 = self.rho0()
        return U @ r0 @ U.conj().T

    def fidelity(self, t: float) -> float:
        phase = np.exp(-1j * self.E * t)
        Bt = self.B.T
        K = Bt @ (phase.real[:, None] * self.B) + 1j * (Bt @ (phase.imag[:, None] * self.B))
        # numpy's heevd is the fastest Hermitian driver here; only the lower triangle is read
        w = np.linalg.eigvalsh(K @ K.conj().T)
        if w.min() < -NEGATIVE_EIG_TOL:
            raise NumericalDegradationError(f"t={t}: inner-product eigenvalue {w.min():.3e}")
        return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def evolve_and_fidelity(setup: QuenchSetup) -> QuenchResult:
    """Uhlmann-Jozsa fidelity ``L(t)`` between ``rho(0)`` and ``rho(t)`` on the time grid."""
    kern = FidelityKernel(setup)
    L = np.array([kern.fidelity(t) for t in setup.times])
    return QuenchResult(
        times=setup.times,
        fidelity=L,
        epsilon0_ref=setup.epsilon0_numeric,
        epsilon0_analytic=setup.epsilon0_analytic,
        kappa=setup.kappa,
        beta=setup.beta,
    )


# ---------------------------------------------------------------- period analysis


def _parabolic_peak(y0: float, y1: float, y2: float) -> float:
    den = y0 - 2 * y1 + y2
    return 0.5 * (y0 - y2) / den if den != 0 else 0.0


def extract_period(times, fidelity, pad_factor: int = 64) -> PeriodEstimate:
    """Dominant oscillation period of ``1 - L(t)``.

    The mean-removed, Hann-windowed signal is zero-padded and Fourier transformed;
    the peak bin is refined by a parabola through the log-magnitudes of its
    neighbours. The first revival (first local maximum after the first local
    minimum) is reported as a cross-check.

    Raises:
        NoOscillationError: the signal is flat or has no nonzero-frequency peak.
    """
    t = np.asarray(times, dtype=float)
    y = 1.0 - np.asarray(fidelity, dtype=float)
    if t.shape != y.shape or t.size < 8:
        raise ValueError("need matching time and fidelity arrays with >= 8 samples")
    dt = t[1] - t[0]
    if np.ptp(y) < 1e-9:
        raise NoOscillationError("no oscillation detected (flat signal)")
    y = (y - y.mean()) * np.hanning(y.size)
    n = pad_factor * y.size
    F = np.abs(np.fft.rfft(y, n))
    k = int(np.argmax(F[1:])) + 1
    if k >= F.size - 1 or F[k] <= 0:
        raise NoOscillationError("no oscillation detected (no interior spectral peak)")
    with np.errstate(divide="ignore"):
        lf = np.log(F[k - 1 : k + 2])
    off = _parabolic_peak(*lf) if np.all(np.isfinite(lf)) else 0.0
    freq = (k + off) / (n * dt)
    period = 1.0 / freq
    span = t[-1] - t[0]
    covered = span / period
    ppp = period / dt
    if covered < 2 or ppp < 40:
        warnings.warn(
            f"period estimate from {covered:.2f} periods at {ppp:.0f} points/period "
            "(want >= 2 periods, >= 40 points/period)",
            stacklevel=2,
        )
    return PeriodEstimate(period, freq, _first_revival(t, np.asarray(fidelity, float)), covered, ppp)


def _first_revival(t: np.ndarray, L: np.ndarray) -> float | None:
    d = np.diff(L)
    mins = np.flatnonzero((d[:-1] < 0) & (d[1:] >= 0)) + 1
    if mins.size == 0:
        return None
    after = np.flatnonzero((d[:-1] > 0) & (d[1:] <= 0)) + 1
    after = after[after > mins[0]]
    if after.size == 0:
        return None
    k = int(after[0])
    off = _parabolic_peak(L[k - 1], L[k], L[k + 1])
    return float(t[k] + off * (t[1] - t[0]))


def run_quench(profile: FieldProfile, **kwargs) -> QuenchResult:
    """Setup, evolve and attach the extracted period."""
    res = evolve_and_fidelity(quench_setup(profile, **kwargs))
    est = extract_period(res.times, res.fidelity)
    return QuenchResult(**{**res.__dict__, "period": est.period})


# ---------------------------------------------------------------- spectrum pairing


def sector_spectra(H: ManyBodyOperator) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Eigenpairs in each parity sector, vectors embedded in the full space."""
    P = parity_diagonal(H.L)
    M = H.dense()
    out = {}
    for sign in (1, -1):
        idx = np.flatnonzero(P == sign)
        E, V = sla.eigh(M[np.ix_(idx, idx)])
        full = np.zeros((H.dim, idx.size), dtype=V.dtype)
        full[idx] = V
        out[sign] = (E, full)
    return out


def pairing_spectrum(profile: FieldProfile, k: int = 5, modes: ZeroModeData | None = None) -> list[PartnerPair]:
    """Parity-odd partners of the ``k`` lowest parity-even eigenstates.

    The partner of ``|psi+>`` is the odd eigenstate with the largest weight in
    ``(d0 + d0^+)|psi+>``; a perfect zero mode gives weight 1 and an energy
    difference of exactly ``eps0`` in magnitude.
    """
    H = build_spin_hamiltonian(profile)
    gamma = build_d0(profile, modes).majorana
    spec = sector_spectra(H)
    E_even, V_even = spec[1]
    E_odd, V_odd = spec[-1]
    pairs = []
    for n in range(min(k, E_even.size)):
        w = gamma @ V_even[:, n]
        amp = V_odd.T @ w
        m = int(np.argmax(amp**2))
        pairs.append(PartnerPair(float(E_even[n]), float(E_odd[m]), float(amp[m] ** 2)))
    return pairs


@dataclass(frozen=True)
class BlockDiagnostic:
    min_pair_weight: float
    trace_distance: float
    pair_weights: np.ndarray = field(repr=False)


def block_pairing_diagnostic(setup: QuenchSetup) -> BlockDiagnostic:
    """How well ``H_pre`` reduces to independent 2x2 blocks in the ``H`` eigenbasis.

    Each ``H`` eigenstate is paired with the state carrying most of
    ``(d0 + d0^+)|n>``. Reports the smallest such weight and the trace distance
    between the exact thermal state and the one of the paired (block) model.
    """
    E, W = sla.eigh(setup.H_pos.dense())
    X = W.T @ (setup.d0.majorana @ W)
    partner = np.argmax(X**2, axis=0)
    weights = X[partner, np.arange(E.size)] ** 2
    Xb = np.zeros_like(X)
    idx = np.arange(E.size)
    Xb[partner, idx] = X[partner, idx]
    Xb = 0.5 * (Xb + Xb.T)
    Hb = np.diag(E) + setup.kappa * Xb
    rho_b = W @ thermal_state(Hb, setup.beta) @ W.T
    rho = thermal_state(setup.H_pre, setup.beta)
    td = 0.5 * float(np.sum(np.abs(sla.eigvalsh(rho - rho_b))))
    return BlockDiagnostic(float(weights.min()), td, weights)
