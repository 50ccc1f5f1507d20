"""Analytic 1-D potentials with derivatives of any order at complex positions.

Every family here is an entire function, so evaluation at complex ``x``
(needed by complex-trajectory propagation) involves no branch cuts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


class Potential:
    """Base class. Subclasses implement :meth:`derivatives`."""

    name = "potential"

    def derivatives(self, x, order: int) -> np.ndarray:
        """Return ``[V_0(x), ..., V_order(x)]`` stacked along a new leading axis."""
        raise NotImplementedError

    def derivative(self, x, n: int):
        return self.derivatives(x, n)[n]

    def __call__(self, x):
        return self.derivatives(x, 0)[0]


@dataclass(frozen=True)
class Free(Potential):
    name = "free"

    def derivatives(self, x, order):
        x = np.asarray(x)
        return np.zeros((order + 1,) + x.shape, dtype=np.result_type(x, float))


@dataclass(frozen=True)
class Harmonic(Potential):
    """V(x) = m omega^2 x^2 / 2."""

    omega: float = 1.0
    mass: float = 1.0
    name = "harmonic"

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"harmonic omega must be positive, got {self.omega}")
        if not self.mass > 0:
            raise ValueError(f"harmonic mass must be positive, got {self.mass}")

    def derivatives(self, x, order):
        x = np.asarray(x)
        k = self.mass * self.omega**2
        out = np.zeros((order + 1,) + x.shape, dtype=np.result_type(x, float))
        out[0] = 0.5 * k * x * x
        if order >= 1:
            out[1] = k * x
        if order >= 2:
            out[2] = k
        return out


@dataclass(frozen=True)
class Morse(Potential):
    """V(x) = A[(1 - exp(-beta x))^2 - 1], minimum -A at x = 0.

    Written as A[exp(-2 beta x) - 2 exp(-beta x)], so that the n-th
    derivative is A[(-2 beta)^n exp(-2 beta x) - 2 (-beta)^n exp(-beta x)].
    """

    depth: float = 10.25
    range: float = 0.2209
    name = "morse"

    def __post_init__(self):
        if not self.depth > 0:
            raise ValueError(f"morse depth must be positive, got {self.depth}")
        if not self.range > 0:
            raise ValueError(f"morse range must be positive, got {self.range}")

    def derivatives(self, x, order):
        x = np.asarray(x)
        c2, c1 = _morse_coefficients(self.depth, self.range, order)
        shape = (-1,) + (1,) * x.ndim
        with np.errstate(over="ignore", invalid="ignore"):
            e1 = np.exp(-self.range * x)
            return c2.reshape(shape) * (e1 * e1) + c1.reshape(shape) * e1


@lru_cache(maxsize=64)
def _morse_coefficients(depth, beta, order):
    n = np.arange(order + 1)
    return depth * (-2.0 * beta) ** n, -2.0 * depth * (-beta) ** n


@dataclass(frozen=True)
class Polynomial(Potential):
    """V(x) = sum_k coefficients[k] x^k (ascending order)."""

    coefficients: tuple = field(default=(0.0,))
    name = "polynomial"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if len(self.coefficients) == 0:
            raise ValueError("polynomial potential needs at least one coefficient")

    def derivatives(self, x, order):
        x = np.asarray(x)
        c = np.asarray(self.coefficients)
        out = np.zeros((order + 1,) + x.shape, dtype=np.result_type(x, float))
        for n in range(min(order, len(c) - 1) + 1):
            out[n] = np.polynomial.polynomial.polyval(x, c)
            c = np.polynomial.polynomial.polyder(c)
        return out


def eval_derivative(p: Potential, x, n: int):
    """n-th spatial derivative of ``p`` at (possibly complex) ``x``.

    Overflow far out on the exponential wall yields a non-finite value
    rather than an exception; callers treat that as a divergence signal.
    """
    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    return p.derivative(x, n)


def potential_from_dict(d: dict) -> Potential:
    kind = str(d.get("kind", "free")).lower()
    if kind == "free":
        return Free()
    if kind == "harmonic":
        return Harmonic(omega=float(d.get("omega", 1.0)), mass=float(d.get("mass", 1.0)))
    if kind == "morse":
        return Morse(depth=float(d.get("depth", 10.25)), range=float(d.get("range", 0.2209)))
    if kind == "polynomial":
        coeffs = d.get("coefficients", (0.0,))
        if isinstance(coeffs, str):
            coeffs = [float(c) for c in coeffs.replace(",", " ").split()]
        elif np.isscalar(coeffs):
            coeffs = [coeffs]
        return Polynomial(coefficients=tuple(coeffs))
    raise ValueError(f"unknown potential kind {kind!r}")
