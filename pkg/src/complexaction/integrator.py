"""Fixed-step classical RK4 for (possibly complex) state arrays.

State arrays have shape ``(n_vars,)`` for a single system or
``(n_vars, n_traj)`` for a fan of independent trajectories. Divergence is
tracked per trajectory (per column): once any component of a column turns
non-finite, that column is frozen at its last finite value and flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

Rhs = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class IntegrationConfig:
    dt: float = 1e-3
    t_final: float = 0.0
    store_every: int = 1
    # second pass at dt/2 to estimate the global error
    error_estimate: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= 0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")
        if int(self.store_every) != self.store_every or self.store_every < 1:
            raise ValueError(f"store_every must be an integer >= 1, got {self.store_every}")


@dataclass
class IntegrationResult:
    times: np.ndarray
    states: np.ndarray  # (n_samples,) + state shape
    diverged: np.ndarray  # bool, shape of state.shape[1:]
    max_error: float  # step-halving estimate, nan when disabled

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def rk4_step(y: np.ndarray, rhs: Rhs, dt: float, t: float = 0.0) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step."""
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k1)
    k3 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _finite_columns(y: np.ndarray) -> np.ndarray:
    return np.isfinite(y).all(axis=0)


def _step_schedule(t_final: float, dt: float):
    """Number of steps and the (possibly shortened) last step length."""
    if t_final == 0:
        return 0, dt
    ratio = t_final / dt
    n = round(ratio) if abs(ratio - round(ratio)) < 1e-9 * max(1.0, ratio) else math.ceil(ratio)
    n = max(1, n)
    last = t_final - (n - 1) * dt
    return n, last


def _run(y0, rhs, dt, t_final, store_every, t0):
    n_steps, last = _step_schedule(t_final, dt)
    y = np.array(y0, copy=True)
    diverged = ~_finite_columns(y)
    times, states = [t0], [y.copy()]
    with np.errstate(all="ignore"):
        for k in range(n_steps):
            h = last if k == n_steps - 1 else dt
            t = t0 + k * dt
            y_new = rk4_step(y, rhs, h, t)
            bad = ~_finite_columns(y_new)
            if bad.any() or diverged.any():
                diverged = diverged | bad
                y_new = np.where(diverged, y, y_new)
            y = y_new
            if (k + 1) % store_every == 0 or k == n_steps - 1:
                times.append(t0 + t_final if k == n_steps - 1 else t0 + (k + 1) * dt)
                states.append(y.copy())
    return np.array(times), np.array(states), diverged


def integrate(y0: np.ndarray, rhs: Rhs, config: IntegrationConfig, t0: float = 0.0) -> IntegrationResult:
    """Integrate ``dy/dt = rhs(t, y)`` from ``t0`` to ``t0 + config.t_final``.

    Samples are taken every ``store_every`` steps and at the final time
    (the last step is shortened to land on it exactly). With
    ``config.error_estimate`` the run is repeated at ``dt/2`` and the largest
    deviation at the shared sample times, over non-diverged trajectories,
    is reported as ``max_error``.
    """
    y0 = np.asarray(y0)
    times, states, diverged = _run(y0, rhs, config.dt, config.t_final, config.store_every, t0)
    err = float("nan")
    if config.error_estimate and config.t_final > 0:
        _, fine, div2 = _run(y0, rhs, 0.5 * config.dt, config.t_final, 2 * config.store_every, t0)
        ok = ~(diverged | div2)
        # both passes share the same sample times
        diff = np.abs(states - fine)
        diff = diff[..., ok] if diff.ndim > 2 else (diff if ok else diff[:0])
        err = float(diff.max()) if diff.size else 0.0
    return IntegrationResult(times=times, states=states, diverged=diverged, max_error=err)
