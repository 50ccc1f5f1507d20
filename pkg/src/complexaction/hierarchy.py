"""Phase jets and the truncated equations of motion for S_0..S_N.

A phase jet is the vector of spatial derivatives of the complex action
S(x, t) evaluated at a trajectory point, with psi = exp(iS/hbar). All
derivatives above the truncation order N are exactly zero.

Jet arrays may carry trailing batch axes: ``S[n, ...]`` is S_n for a whole
fan of trajectories at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Optional

import numpy as np

MAX_ORDER = 32


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")


ATOMIC_UNITS = PhysicalConstants()


@dataclass(frozen=True)
class PhaseJet:
    """Complex phase derivatives ``[S_0, ..., S_N]`` at one point."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("PhaseJet values must be a non-empty 1-D array")
        if v.size - 1 > MAX_ORDER:
            raise ValueError(f"truncation order above {MAX_ORDER} is not supported")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def order(self) -> int:
        return self.values.size - 1

    def __getitem__(self, n: int) -> complex:
        # closure: everything past the truncation order is zero
        if n < 0:
            raise IndexError(n)
        return complex(self.values[n]) if n <= self.order else 0j

    def __len__(self):
        return self.values.size

    @classmethod
    def zeros(cls, order: int) -> "PhaseJet":
        return cls(np.zeros(order + 1, dtype=complex))


@dataclass(frozen=True)
class TrajectoryState:
    t: float
    x: complex
    jet: PhaseJet
    v_aux: Optional[complex] = None


@lru_cache(maxsize=None)
def binomial_table(order: int) -> np.ndarray:
    """``table[n, j] = C(n, j)`` for 0 <= j <= n <= order."""
    if order > MAX_ORDER:
        raise ValueError(f"truncation order above {MAX_ORDER} is not supported")
    t = np.zeros((order + 1, order + 1))
    for n in range(order + 1):
        for j in range(n + 1):
            t[n, j] = comb(n, j)
    t.setflags(write=False)
    return t


def _as_array(jet) -> np.ndarray:
    return jet.values if isinstance(jet, PhaseJet) else np.asarray(jet)


def leibniz_square(jet, n: int):
    """n-th derivative of S_1^2: sum_j C(n, j) S_{j+1} S_{n-j+1}.

    ``jet`` is a :class:`PhaseJet` or an array whose first axis is the jet
    index. Entries beyond the stored order read as zero.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    S = _as_array(jet)
    top = S.shape[0] - 1
    total = np.zeros(S.shape[1:], dtype=complex)
    for j in range(n + 1):
        a, b = j + 1, n - j + 1
        if a > top or b > top:
            continue
        total = total + comb(n, j) * S[a] * S[b]
    return total[()] if total.ndim == 0 else total


def leibniz_squares(S: np.ndarray) -> np.ndarray:
    """All of ``(S_1^2)_n`` for n = 0..N at once."""
    N = S.shape[0] - 1
    C = binomial_table(N)
    out = np.zeros(S.shape, dtype=np.result_type(S, complex))
    for n in range(N + 1):
        for j in range(n + 1):
            a, b = j + 1, n - j + 1
            if a > N or b > N:
                continue
            out[n] += C[n, j] * S[a] * S[b]
    return out


def jet_rhs(x, S: np.ndarray, v, potential, consts: PhysicalConstants, V=None) -> np.ndarray:
    """Time derivatives of S_0..S_N along a trajectory moving with velocity v.

    dS_n/dt = -(S_1^2)_n / 2m - V_n + v S_{n+1} + (i hbar / 2m) S_{n+2},
    with S_{N+1} = S_{N+2} = 0. ``V`` may carry precomputed potential
    derivatives ``[V_0..V_N]`` at x.
    """
    N = S.shape[0] - 1
    m, hbar = consts.mass, consts.hbar
    if V is None:
        V = potential.derivatives(x, N)
    out = -leibniz_squares(S) / (2.0 * m) - V
    if N >= 1:
        out[:-1] += v * S[1:]
    if N >= 2:
        out[:-2] += (0.5j * hbar / m) * S[2:]
    return out


def hierarchy_rhs(state: TrajectoryState, v, potential, consts: PhysicalConstants = ATOMIC_UNITS) -> np.ndarray:
    """Derivatives ``dS_n/dt`` (n = 0..N) for a single trajectory state."""
    return jet_rhs(state.x, state.jet.values, v, potential, consts)


def reconstruct_amplitude(S0, consts: PhysicalConstants = ATOMIC_UNITS):
    """psi = exp(i S_0 / hbar).

    Overflow (Im S_0 / hbar far below -700) returns inf/nan instead of
    raising; check with ``np.isfinite``.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return np.exp(1j * np.asarray(S0) / consts.hbar)[()]
