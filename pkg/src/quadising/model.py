"""Chain geometry and the quadratic transverse-field profile.

Sites are labelled ``j = -N, ..., N`` and stored in that order, so the array
index of site ``j`` is ``j + N``. Energies are in units of the coupling ``J``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np


class DomainWarning(UserWarning):
    """Parameters outside the regime where the interface picture applies."""


@dataclass(frozen=True)
class ChainParams:
    """Ising chain of length ``L = 2N + 1`` in the field ``g j^2 + delta``."""

    N: int
    g: float
    delta: float
    J: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise ValueError(f"N must be a non-negative integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.J < 0:
            raise ValueError(f"J must be >= 0, got {self.J}")

    @property
    def L(self) -> int:
        return 2 * self.N + 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def check_domain(self) -> bool:
        """Warn (never raise) when ``g < (J - delta)/N^2`` or delta is outside (0, J)."""
        ok = True
        if not 0 < self.delta < self.J:
            warnings.warn(
                f"delta={self.delta} outside (0, J={self.J})", DomainWarning, stacklevel=2
            )
            ok = False
        if self.N > 0 and self.g < (self.J - self.delta) / self.N**2:
            warnings.warn(
                f"g={self.g} below (J - delta)/N^2 = {(self.J - self.delta) / self.N**2:.3g}; "
                "the ferromagnetic region reaches the chain ends",
                DomainWarning,
                stacklevel=2,
            )
            ok = False
        return ok


@dataclass(frozen=True)
class DisorderSpec:
    """Multiplicative uniform field noise ``f_j -> f_j (1 + w u_j)``, ``u_j ~ U[-1, 1]``."""

    w: float
    seed: int

    def __post_init__(self):
        if self.w < 0:
            raise ValueError(f"disorder amplitude must be >= 0, got {self.w}")
        if int(self.seed) != self.seed:
            raise ValueError(f"seed must be an integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True, eq=False)
class FieldProfile:
    """Per-site transverse field; the single input to every Hamiltonian builder."""

    values: np.ndarray
    params: ChainParams
    disorder: DisorderSpec | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.params.L,):
            raise ValueError(f"expected {self.params.L} field values, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def L(self) -> int:
        return self.params.L

    @property
    def J(self) -> float:
        return self.params.J

    @property
    def sites(self) -> np.ndarray:
        return self.params.sites

    @property
    def is_clean(self) -> bool:
        return self.disorder is None or self.disorder.w == 0

    def at(self, j: int) -> float:
        """Field on site ``j`` (``-N <= j <= N``)."""
        if abs(j) > self.N:
            raise IndexError(f"site {j} outside -{self.N}..{self.N}")
        return float(self.values[j + self.N])

    def with_values(self, values) -> FieldProfile:
        return FieldProfile(np.asarray(values, dtype=float), self.params, self.disorder)


@dataclass(frozen=True)
class ScaledCoords:
    xi: np.ndarray
    gN: float


@dataclass(frozen=True)
class Interfaces:
    """Phase-boundary cells ``m_-`` and ``m_+``; iterates as ``(m_minus, m_plus)``."""

    m_minus: int
    m_plus: int
    clamped: bool = field(default=False)

    def __iter__(self):
        return iter((self.m_minus, self.m_plus))


def clean_field(params: ChainParams, j) -> np.ndarray | float:
    """``g j^2 + delta`` evaluated on arbitrary (possibly out-of-chain) sites."""
    return params.g * np.asarray(j, dtype=float) ** 2 + params.delta


def build_profile(params: ChainParams, disorder: DisorderSpec | None = None) -> FieldProfile:
    """Evaluate the field on every site, optionally with seeded multiplicative noise.

    The clean profile is exactly mirror symmetric. With ``disorder`` the values are
    ``(g j^2 + delta)(1 + w u_j)`` with ``u_j`` drawn from ``numpy.random.default_rng(seed)``,
    so equal seeds give bit-identical profiles.
    """
    params.check_domain()
    j = params.sites
    values = params.g * (j * j).astype(float) + params.delta
    if disorder is not None and disorder.w > 0:
        rng = np.random.default_rng(disorder.seed)
        u = rng.uniform(-1.0, 1.0, size=params.L)
        values = values * (1.0 + disorder.w * u)
    return FieldProfile(values, params, disorder)


def interface_sites(params: ChainParams) -> Interfaces:
    """Sites ``m_+- = +-floor(sqrt((J - delta)/g))``, clamped to the chain.

    ``m_+`` is the largest ``m`` with ``g m^2 + delta <= J``; when that exceeds ``N``
    the whole chain is ferromagnetic and ``clamped`` is set.
    """
    if params.g == 0:
        raise ValueError("no interior interface (uniform chain, g = 0)")
    if params.delta >= params.J:
        raise ValueError(f"no ferromagnetic region: delta={params.delta} >= J={params.J}")
    m = int(math.floor(math.sqrt((params.J - params.delta) / params.g)))
    # repair floating-point rounding at exact squares
    while params.g * (m + 1) ** 2 + params.delta <= params.J:
        m += 1
    while m > 0 and params.g * m**2 + params.delta > params.J:
        m -= 1
    clamped = m > params.N
    m = min(m, params.N)
    return Interfaces(-m, m, clamped)


def scaled_coords(params: ChainParams) -> ScaledCoords:
    """``xi_j = j/N`` and ``g_N = N^2 g``."""
    if params.N == 0:
        raise ValueError("scaled coordinates need N >= 1")
    return ScaledCoords(params.sites / params.N, params.N**2 * params.g)


def params_from_scaled(N: int, gN: float, delta: float, J: float = 1.0) -> ChainParams:
    """Chain parameters at fixed ``g_N``: ``g = g_N / N^2``."""
    return ChainParams(N=N, g=gN / N**2, delta=delta, J=J)
