"""Velocity-field choices for the complex-action hierarchy.

Every method shares the same jet equations; they differ only in the
velocity v that carries the trajectory and, for the real-classical
variant, in an extra Newtonian equation for an independent velocity.

Packed state layout used for fan propagation (complex, shape
``(rows, n_traj)``)::

    row 0            x
    row 1            v_aux            (RealClassical only)
    remaining rows   S_0 .. S_N
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from complexaction.hierarchy import (
    ATOMIC_UNITS,
    PhaseJet,
    PhysicalConstants,
    TrajectoryState,
    jet_rhs,
)


class VelocityStrategy:
    name = "strategy"
    has_aux = False

    def velocity(self, x, S, v_aux, consts: PhysicalConstants):
        raise NotImplementedError

    def aux_derivative(self, x, v_aux, potential, consts: PhysicalConstants):
        return None

    @property
    def jet_row(self) -> int:
        return 2 if self.has_aux else 1

    def __repr__(self):
        return f"{type(self).__name__}()"

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))


class Zevca(VelocityStrategy):
    """v = 0: trajectories sit at fixed grid points."""

    name = "zevca"

    def velocity(self, x, S, v_aux, consts):
        return np.zeros_like(S[0])


class Bomca(VelocityStrategy):
    """v = S_1 / m: complex classical trajectories (at N = 2)."""

    name = "bomca"

    def velocity(self, x, S, v_aux, consts):
        return S[1] / consts.mass


class Dpm(VelocityStrategy):
    """v = Re(S_1) / m: real trajectories with a quantum force."""

    name = "dpm"

    def velocity(self, x, S, v_aux, consts):
        return S[1].real / consts.mass


class RealClassical(VelocityStrategy):
    """Independent velocity obeying dv/dt = -V_1(x) / m."""

    name = "real-classical"
    has_aux = True

    def velocity(self, x, S, v_aux, consts):
        return v_aux

    def aux_derivative(self, x, v_aux, potential, consts):
        return -potential.derivative(x, 1) / consts.mass


STRATEGIES = {cls.name: cls for cls in (Zevca, Bomca, Dpm, RealClassical)}


def strategy_from_name(name: str) -> VelocityStrategy:
    key = name.strip().lower().replace("_", "-")
    if key in ("realclassical", "real"):
        key = "real-classical"
    try:
        return STRATEGIES[key]()
    except KeyError:
        raise ValueError(f"unknown velocity strategy {name!r}; expected one of {sorted(STRATEGIES)}") from None


def _check_state(strategy: VelocityStrategy, state: TrajectoryState):
    if strategy.has_aux and state.v_aux is None:
        raise ValueError(f"{strategy.name} needs an independent velocity v_aux")
    if not strategy.has_aux and state.v_aux is not None:
        raise ValueError(f"{strategy.name} does not carry an independent velocity")


def velocity_of(strategy: VelocityStrategy, state: TrajectoryState, consts: PhysicalConstants = ATOMIC_UNITS):
    _check_state(strategy, state)
    S = state.jet.values
    if S.size < 2 and not strategy.has_aux:
        S = np.append(S, 0j)
    return complex(strategy.velocity(state.x, S, state.v_aux, consts))


@dataclass(frozen=True)
class StateDerivative:
    dx: complex
    djet: np.ndarray
    dv_aux: complex | None = None


def full_rhs(strategy: VelocityStrategy, state: TrajectoryState, potential, consts: PhysicalConstants = ATOMIC_UNITS) -> StateDerivative:
    """dx/dt, dS_n/dt and (RealClassical) dv_aux/dt for one trajectory state."""
    v = velocity_of(strategy, state, consts)
    djet = jet_rhs(state.x, state.jet.values, v, potential, consts)
    dv = None
    if strategy.has_aux:
        dv = complex(strategy.aux_derivative(state.x, state.v_aux, potential, consts))
    return StateDerivative(dx=v, djet=djet, dv_aux=dv)


def pack(strategy: VelocityStrategy, x, S, v_aux=None) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    S = np.asarray(S, dtype=complex)
    if S.ndim == 1:
        S = S[:, None]
    rows = [x[None, :]]
    if strategy.has_aux:
        rows.append(np.atleast_1d(np.asarray(v_aux, dtype=complex))[None, :])
    rows.append(S)
    return np.concatenate(rows, axis=0)


def unpack(strategy: VelocityStrategy, y: np.ndarray):
    """Split packed rows (or a stack of them) into (x, v_aux, S)."""
    r = strategy.jet_row
    x = y[..., 0, :]
    v_aux = y[..., 1, :] if strategy.has_aux else None
    return x, v_aux, y[..., r:, :]


def make_fan_rhs(strategy: VelocityStrategy, potential, consts: PhysicalConstants = ATOMIC_UNITS, real_axis: bool = False):
    """Vectorised right-hand side ``rhs(t, y)`` on packed fan states.

    ``real_axis=True`` promises that positions stay real, so the potential
    is evaluated on ``x.real`` (cheaper real arithmetic, same values).
    """
    r = strategy.jet_row

    def rhs(t, y):
        x = y[0]
        S = y[r:]
        N = S.shape[0] - 1
        xe = x.real if real_axis else x
        order = max(N, 1) if strategy.has_aux else N
        V = potential.derivatives(xe, order)
        v_aux = y[1] if strategy.has_aux else None
        S_for_v = S if N >= 1 else np.concatenate([S, np.zeros_like(S)])
        v = strategy.velocity(x, S_for_v, v_aux, consts)
        out = np.empty_like(y)
        if strategy.has_aux:
            if real_axis:
                # real trajectories stay exactly on the real axis
                out[0] = v_aux.real
                out[1] = -V[1].real / consts.mass
            else:
                out[0] = v_aux
                out[1] = -V[1] / consts.mass
        else:
            out[0] = v
        out[r:] = jet_rhs(x, S, v, potential, consts, V=V[: N + 1])
        return out

    return rhs


# -- DPM in real/imaginary split form ------------------------------------------


@dataclass(frozen=True)
class DpmSplitState:
    """Real DPM variables: S_n = s_n - i hbar c_n for n = 0, 1, 2."""

    t: float
    x: float
    s: tuple
    c: tuple

    def __post_init__(self):
        if len(self.s) != 3 or len(self.c) != 3:
            raise ValueError("DPM split form is defined for truncation order N = 2 only")


def split_to_jet(state: DpmSplitState, consts: PhysicalConstants = ATOMIC_UNITS) -> TrajectoryState:
    S = np.asarray(state.s, dtype=float) - 1j * consts.hbar * np.asarray(state.c, dtype=float)
    return TrajectoryState(t=state.t, x=complex(state.x), jet=PhaseJet(S))


def jet_to_split(state: TrajectoryState, consts: PhysicalConstants = ATOMIC_UNITS) -> DpmSplitState:
    S = state.jet.values
    if S.size != 3:
        raise ValueError("DPM split form is defined for truncation order N = 2 only")
    return DpmSplitState(
        t=state.t,
        x=float(np.real(state.x)),
        s=tuple(float(v) for v in S.real),
        c=tuple(float(v) for v in -S.imag / consts.hbar),
    )


def split_rhs_arrays(x, s, c, potential, consts: PhysicalConstants):
    """Seven real DPM equations; ``s`` and ``c`` have leading length 3."""
    m, hbar = consts.mass, consts.hbar
    V = potential.derivatives(x, 2).real
    s0, s1, s2 = s
    c0, c1, c2 = c
    hh = hbar * hbar
    dx = s1 / m
    ds = np.array([
        s1 * s1 / (2 * m) - V[0] + hh / (2 * m) * (c2 + c1 * c1),
        -V[1] + hh / m * c1 * c2,
        -s2 * s2 / m + hh / m * c2 * c2 - V[2],
    ])
    dc = np.array([
        -s2 / (2 * m),
        -c1 * s2 / m,
        -2 * c2 * s2 / m,
    ])
    return dx, ds, dc


def dpm_split_rhs(state: DpmSplitState, potential, consts: PhysicalConstants = ATOMIC_UNITS) -> DpmSplitState:
    """Time derivative of a split DPM state, returned in the same container."""
    dx, ds, dc = split_rhs_arrays(state.x, np.asarray(state.s, float), np.asarray(state.c, float), potential, consts)
    return DpmSplitState(t=1.0, x=float(dx), s=tuple(map(float, ds)), c=tuple(map(float, dc)))


def make_split_rhs(potential, consts: PhysicalConstants = ATOMIC_UNITS):
    """Packed real rhs on rows ``[x, s0, s1, s2, c0, c1, c2]``."""

    def rhs(t, y):
        dx, ds, dc = split_rhs_arrays(y[0], y[1:4], y[4:7], potential, consts)
        return np.concatenate([np.asarray(dx)[None], ds, dc])

    return rhs
