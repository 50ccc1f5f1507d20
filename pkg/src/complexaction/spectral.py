"""Split-operator Fourier propagation and closed-form Gaussian solutions.

These are the ground truth the trajectory methods are measured against.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from complexaction.hierarchy import ATOMIC_UNITS, PhysicalConstants


class GridCoverageError(ValueError):
    """The grid truncates a wavefunction that is still non-negligible at its edges."""


@dataclass(frozen=True)
class GridSpec:
    """Periodic grid of ``n_points`` samples on [x_min, x_max)."""

    x_min: float = -10.0
    x_max: float = 30.0
    n_points: int = 4096

    def __post_init__(self):
        n = self.n_points
        if n < 2 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 2, got {n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)


@dataclass
class GridWavefunction:
    x_min: float
    dx: float
    n_points: int
    psi: np.ndarray

    def __post_init__(self):
        n = self.n_points
        if n < 2 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 2, got {n}")
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.psi.shape != (n,):
            raise ValueError(f"psi has shape {self.psi.shape}, expected ({n},)")

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.dx)

    @classmethod
    def on(cls, grid: GridSpec, psi) -> "GridWavefunction":
        return cls(grid.x_min, grid.dx, grid.n_points, psi)


def sample_wavepacket(w, grid: GridSpec, consts: PhysicalConstants = ATOMIC_UNITS, edge_tol: float = 1e-12) -> GridWavefunction:
    """Evaluate the initial packet on the grid; refuse grids that clip it."""
    psi = w(grid.x, consts)
    peak = np.abs(psi).max()
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge > edge_tol * peak:
        raise GridCoverageError(
            f"grid [{grid.x_min}, {grid.x_max}) does not cover the packet: edge amplitude {edge:.3e} "
            f"is {edge / peak:.3e} of peak (tolerance {edge_tol:g})"
        )
    return GridWavefunction.on(grid, psi)


def split_operator_propagate(
    psi: GridWavefunction,
    potential,
    dt: float,
    n_steps: int,
    consts: PhysicalConstants = ATOMIC_UNITS,
    alias_tol: float = 1e-8,
) -> GridWavefunction:
    """Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2), repeated n_steps times."""
    hbar, m = consts.hbar, consts.mass
    x = psi.x
    k = psi.k
    V = np.real(potential(x))
    half_v = np.exp(-0.5j * dt * V / hbar)
    full_v = half_v * half_v
    kin = np.exp(-0.5j * hbar * dt * k * k / m)
    y = psi.psi.copy()
    if n_steps > 0:
        y *= half_v
        for step in range(n_steps):
            y = np.fft.ifft(kin * np.fft.fft(y))
            y *= full_v if step < n_steps - 1 else half_v
    _check_aliasing(y, k, alias_tol)
    return GridWavefunction(psi.x_min, psi.dx, psi.n_points, y)


def _check_aliasing(y, k, tol):
    phi = np.abs(np.fft.fft(y)) ** 2
    total = phi.sum()
    if total == 0:
        return
    kmax = np.abs(k).max()
    frac = phi[np.abs(k) > 0.9 * kmax].sum() / total
    if frac > tol:
        warnings.warn(f"{frac:.2e} of the norm sits in the top 10% of the momentum grid; refine dx", RuntimeWarning, stacklevel=3)


def harmonic_ground_state(x, t, omega: float = 1.0, consts: PhysicalConstants = ATOMIC_UNITS):
    """Stationary ground state exp(-alpha0 x^2 - i omega t / 2 + i gamma0 / hbar), alpha0 = m omega / 2 hbar."""
    a0 = consts.mass * omega / (2.0 * consts.hbar)
    x = np.asarray(x)
    norm = (2.0 * a0 / np.pi) ** 0.25
    return (norm * np.exp(-a0 * x * x - 0.5j * omega * t))[()]


def free_gaussian(x, t, w, consts: PhysicalConstants = ATOMIC_UNITS):
    """Free evolution of a Gaussian packet; width follows alpha(t) = alpha0 / (1 + 2 i hbar alpha0 t / m)."""
    hbar, m = consts.hbar, consts.mass
    a0 = complex(w.alpha0)
    x = np.asarray(x, dtype=float)
    den = 1.0 + 2j * hbar * a0 * t / m
    a = a0 / den
    vel = w.pc / m
    k = w.pc / hbar
    d = x - w.xc - vel * t
    log_psi = -a * d * d + 1j * k * (x - w.xc) - 0.5j * hbar * k * k * t / m
    return (np.exp(log_psi + 1j * w.phase_constant(consts) / hbar) / np.sqrt(den))[()]


def harmonic_gaussian(x, t, w, omega: float = 1.0, consts: PhysicalConstants = ATOMIC_UNITS):
    """Exact harmonic evolution of an arbitrary Gaussian packet (thawed-Gaussian closed form).

    S(x, t) = gamma(t) + p(t)(x - q(t)) + a(t)(x - q(t))^2 / 2 with (q, p)
    on the classical orbit, a = m J'/J and gamma picking up the classical
    action (p q - p0 q0)/2 plus (i hbar / 2) ln J, where
    J(t) = cos wt + a0 sin wt / (m w). The logarithm follows J continuously
    from J(0) = 1.
    """
    hbar, m = consts.hbar, consts.mass
    a0 = 2j * hbar * complex(w.alpha0)
    mw = m * omega
    c, s = math.cos(omega * t), math.sin(omega * t)
    q = w.xc * c + w.pc / mw * s
    p = w.pc * c - mw * w.xc * s
    J = c + a0 / mw * s
    a = mw * (a0 * c - mw * s) / (mw * c + a0 * s)
    gamma = w.phase_constant(consts) + 0.5 * (p * q - w.pc * w.xc) + 0.5j * hbar * _continuous_log(t, omega, a0 / mw)
    x = np.asarray(x)
    d = x - q
    return np.exp(1j / hbar * (gamma + p * d + 0.5 * a * d * d))[()]


def _continuous_log(t, omega, ratio):
    """ln(cos wt + ratio sin wt) on the branch continuous from 0 at t = 0."""
    n = max(8, int(abs(omega * t) * 64))
    ts = np.linspace(0.0, t, n + 1)
    J = np.cos(omega * ts) + ratio * np.sin(omega * ts)
    phase = np.unwrap(np.angle(J))
    return math.log(abs(J[-1])) + 1j * phase[-1]
