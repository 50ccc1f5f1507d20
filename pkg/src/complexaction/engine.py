"""Initial jets, trajectory fans, and the complex root search for BOMCA."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from complexaction.hierarchy import ATOMIC_UNITS, PhaseJet, PhysicalConstants, reconstruct_amplitude
from complexaction.integrator import IntegrationConfig, integrate
from complexaction.strategies import Bomca, RealClassical, VelocityStrategy, make_fan_rhs, pack, unpack


@dataclass(frozen=True)
class GaussianWavepacket:
    """psi(x, 0) = exp[-alpha0 (x - xc)^2 + i pc (x - xc)/hbar + i gamma0/hbar].

    ``gamma0=None`` selects the normalising constant
    -(i hbar / 4) ln(2 Re(alpha0) / pi).
    """

    alpha0: complex = 0.5
    xc: float = 0.0
    pc: float = 0.0
    gamma0: Optional[complex] = None

    def __post_init__(self):
        if not complex(self.alpha0).real > 0:
            raise ValueError(f"Re(alpha0) must be positive for a normalisable packet, got {self.alpha0}")

    @property
    def sigma(self) -> float:
        return (4.0 * complex(self.alpha0).real) ** -0.5

    def phase_constant(self, consts: PhysicalConstants = ATOMIC_UNITS) -> complex:
        if self.gamma0 is not None:
            return complex(self.gamma0)
        return -0.25j * consts.hbar * math.log(2.0 * complex(self.alpha0).real / math.pi)

    def action_derivatives(self, x, order: int, consts: PhysicalConstants = ATOMIC_UNITS) -> np.ndarray:
        """``[S_0(x), ..., S_order(x)]`` of S = -i hbar ln psi, at complex x."""
        x = np.asarray(x, dtype=complex)
        hbar = consts.hbar
        a = complex(self.alpha0)
        d = x - self.xc
        out = np.zeros((order + 1,) + x.shape, dtype=complex)
        out[0] = 1j * hbar * a * d * d + self.pc * d + self.phase_constant(consts)
        if order >= 1:
            out[1] = 2j * hbar * a * d + self.pc
        if order >= 2:
            out[2] = 2j * hbar * a
        return out

    def __call__(self, x, consts: PhysicalConstants = ATOMIC_UNITS):
        return reconstruct_amplitude(self.action_derivatives(x, 0, consts)[0], consts)


@dataclass(frozen=True)
class PolynomialLogWavepacket:
    """psi(x, 0) = exp(sum_k coefficients[k] x^k), complex coefficients.

    The analytic continuation to complex x is the same polynomial, so the
    initial jet has a closed form for every order.
    """

    coefficients: tuple = (0j,)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))

    def action_derivatives(self, x, order, consts: PhysicalConstants = ATOMIC_UNITS):
        x = np.asarray(x, dtype=complex)
        c = np.asarray(self.coefficients)
        out = np.zeros((order + 1,) + x.shape, dtype=complex)
        for n in range(order + 1):
            if c.size == 0:
                break
            out[n] = -1j * consts.hbar * np.polynomial.polynomial.polyval(x, c)
            c = np.polynomial.polynomial.polyder(c)
        return out

    def __call__(self, x, consts: PhysicalConstants = ATOMIC_UNITS):
        return reconstruct_amplitude(self.action_derivatives(x, 0, consts)[0], consts)


def init_jet(w, x0, N: int, consts: PhysicalConstants = ATOMIC_UNITS) -> PhaseJet:
    """S_n(x0, 0) = -i hbar d^n ln psi / dx^n for n = 0..N."""
    if N < 0:
        raise ValueError(f"truncation order must be >= 0, got {N}")
    return PhaseJet(w.action_derivatives(complex(x0), N, consts))


def init_velocity_real(w, x0, consts: PhysicalConstants = ATOMIC_UNITS):
    """Real starting velocity Im(S_1(x0, 0)) / m; (2 alpha0/m)(x0 - xc) for a real-width Gaussian."""
    S1 = w.action_derivatives(np.asarray(x0, dtype=float), 1, consts)[1]
    v = S1.imag / consts.mass
    return v[()] if np.ndim(v) == 0 else v


def default_fan(w: GaussianWavepacket, count: int = 2001, width_sigmas: float = 5.0) -> np.ndarray:
    half = width_sigmas * w.sigma
    return np.linspace(w.xc - half, w.xc + half, count)


@dataclass
class Trajectory:
    x0: complex
    times: np.ndarray
    x: np.ndarray
    jets: np.ndarray  # (n_samples, N + 1)
    v_aux: Optional[np.ndarray]
    diverged: bool

    @property
    def psi_final(self):
        return reconstruct_amplitude(self.jets[-1, 0])


@dataclass
class FanResult:
    """Sampled histories of a trajectory fan; the last sample is at t_f."""

    strategy: VelocityStrategy
    x0: np.ndarray
    times: np.ndarray
    x: np.ndarray  # (n_samples, n_traj)
    jets: np.ndarray  # (n_samples, N + 1, n_traj)
    v_aux: Optional[np.ndarray]  # (n_samples, n_traj) or None
    diverged: np.ndarray  # (n_traj,)
    psi_final: np.ndarray  # exp(i S_0(t_f) / hbar)
    max_error: float

    def __len__(self):
        return self.x0.size

    def __getitem__(self, i) -> Trajectory:
        return Trajectory(
            x0=self.x0[i],
            times=self.times,
            x=self.x[:, i],
            jets=self.jets[:, :, i],
            v_aux=None if self.v_aux is None else self.v_aux[:, i],
            diverged=bool(self.diverged[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def order(self) -> int:
        return self.jets.shape[1] - 1

    @property
    def x_final(self):
        return self.x[-1]

    @property
    def S0_final(self):
        return self.jets[-1, 0]


def propagate_fan(
    w,
    potential,
    strategy: VelocityStrategy,
    x0_list: Sequence,
    N: int,
    config: IntegrationConfig,
    consts: PhysicalConstants = ATOMIC_UNITS,
    v0: Optional[Sequence] = None,
    threads: int = 1,
) -> FanResult:
    """Propagate one trajectory per starting point, all on a common time grid.

    For the real-classical strategy the independent velocity starts at
    Im(S_1)/m unless ``v0`` is given (a complex ``v0 = S_1/m`` turns it
    into a complex classical trajectory). ``threads > 1`` splits the fan
    into contiguous chunks; trajectories are independent, so the result
    does not depend on the split.
    """
    x0 = np.atleast_1d(np.asarray(x0_list, dtype=complex))
    if x0.size == 0:
        raise ValueError("x0_list must not be empty")
    if threads > 1 and x0.size > 1:
        return _propagate_chunked(w, potential, strategy, x0, N, config, consts, v0, threads)
    if isinstance(strategy, RealClassical) and v0 is None and np.any(x0.imag != 0):
        raise ValueError("real-classical trajectories need real starting positions")
    S = w.action_derivatives(x0, N, consts)
    v_aux = None
    if strategy.has_aux:
        v_aux = init_velocity_real(w, x0.real, consts) if v0 is None else np.broadcast_to(np.asarray(v0, dtype=complex), x0.shape)
    y0 = pack(strategy, x0, S, v_aux)
    real_axis = (
        strategy.name in ("zevca", "dpm", "real-classical")
        and not np.any(x0.imag)
        and (v_aux is None or not np.any(np.imag(v_aux)))
    )
    res = integrate(y0, make_fan_rhs(strategy, potential, consts, real_axis), config)
    xs, vs, jets = unpack(strategy, res.states)
    return FanResult(
        strategy=strategy,
        x0=x0,
        times=res.times,
        x=xs,
        jets=jets,
        v_aux=vs,
        diverged=np.asarray(res.diverged),
        psi_final=reconstruct_amplitude(jets[-1, 0], consts),
        max_error=res.max_error,
    )


def _propagate_chunked(w, potential, strategy, x0, N, config, consts, v0, threads):
    from concurrent.futures import ThreadPoolExecutor

    chunks = np.array_split(np.arange(x0.size), min(threads, x0.size))
    v0s = [None if v0 is None else np.broadcast_to(np.asarray(v0, dtype=complex), x0.shape)[c] for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(
            lambda a: propagate_fan(w, potential, strategy, x0[a[0]], N, config, consts, a[1]),
            zip(chunks, v0s),
        ))
    errs = [p.max_error for p in parts]
    return FanResult(
        strategy=strategy,
        x0=x0,
        times=parts[0].times,
        x=np.concatenate([p.x for p in parts], axis=1),
        jets=np.concatenate([p.jets for p in parts], axis=2),
        v_aux=None if parts[0].v_aux is None else np.concatenate([p.v_aux for p in parts], axis=1),
        diverged=np.concatenate([p.diverged for p in parts]),
        psi_final=np.concatenate([p.psi_final for p in parts]),
        max_error=float("nan") if np.all(np.isnan(errs)) else float(np.nanmax(errs)),
    )


# -- BOMCA root search ---------------------------------------------------------


@dataclass(frozen=True)
class RootSearchConfig:
    max_iter: int = 20
    tol_imag: float = 1e-10
    # half-width of the central secant pair x0 +- step
    step: complex = 1e-3 + 1e-3j
    # integrator time step used for the probe propagations
    dt: float = 1e-3

    def __post_init__(self):
        if not self.tol_imag > 0:
            raise ValueError(f"tol_imag must be positive, got {self.tol_imag}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if complex(self.step) == 0:
            raise ValueError("secant probe step must be nonzero")


@dataclass
class RootSearchResult:
    target: np.ndarray
    x0: np.ndarray  # complex starting points
    x_final: np.ndarray
    jet_final: np.ndarray  # (N + 1, n_targets)
    converged: np.ndarray
    diverged: np.ndarray
    iterations: np.ndarray
    jumps: np.ndarray  # continuation discontinuity flags

    @property
    def psi(self):
        return reconstruct_amplitude(self.jet_final[0])


def _bomca_final(x0, w, potential, N, t_f, dt, consts):
    """x(t_f) and jet(t_f) for a batch of complex starting points."""
    cfg = IntegrationConfig(dt=dt, t_final=t_f, store_every=max(1, math.ceil(t_f / dt) + 1), error_estimate=False)
    fan = propagate_fan(w, potential, Bomca(), x0, N, cfg, consts)
    return fan.x_final, fan.jets[-1], fan.diverged


def _newton_batch(targets, guesses, w, potential, N, t_f, cfg, consts):
    """Damped Newton on x0 -> x(t_f) for all targets simultaneously.

    The derivative comes from a complex central secant through the probes
    x0 +- step, propagated alongside x0 in the same batch.
    """
    n = targets.size
    x0 = guesses.astype(complex).copy()
    h = complex(cfg.step)
    xf = np.full(n, np.nan + 0j)
    jet = np.full((N + 1, n), np.nan + 0j)
    iters = np.zeros(n, dtype=int)
    done = np.zeros(n, dtype=bool)
    diverged = np.zeros(n, dtype=bool)
    prev_res = np.full(n, np.inf)
    prev_x0 = x0.copy()
    step = np.zeros(n, dtype=complex)

    def converged_mask(xf_, tg):
        return (np.abs(xf_.imag) < cfg.tol_imag) & (np.abs(xf_.real - tg) < cfg.tol_imag)

    for it in range(cfg.max_iter + 1):
        active = ~done & ~diverged
        if not active.any():
            break
        idx = np.flatnonzero(active)
        batch = np.concatenate([x0[idx], x0[idx] + h, x0[idx] - h])
        xb, jb, db = _bomca_final(batch, w, potential, N, t_f, cfg.dt, consts)
        k = idx.size
        xf_a, xf_p, xf_m = xb[:k], xb[k:2 * k], xb[2 * k:]
        xf[idx] = xf_a
        jet[:, idx] = jb[:, :k]
        bad = db[:k] | db[k:2 * k] | db[2 * k:]
        diverged[idx[db[:k]]] = True
        conv = converged_mask(xf_a, targets[idx]) & ~db[:k]
        done[idx[conv]] = True
        res = np.abs(xf_a - targets[idx])
        go = ~conv & ~db[:k]
        if it == cfg.max_iter:
            break
        for j in np.flatnonzero(go):
            i = idx[j]
            if res[j] > prev_res[i] and np.isfinite(prev_res[i]):
                # residual grew: backtrack halfway along the last step
                step[i] *= 0.5
                x0[i] = prev_x0[i] + step[i]
                iters[i] += 1
                continue
            if bad[j]:
                diverged[i] = True
                continue
            deriv = (xf_p[j] - xf_m[j]) / (2 * h)
            if deriv == 0 or not np.isfinite(deriv):
                diverged[i] = True
                continue
            prev_res[i] = res[j]
            prev_x0[i] = x0[i]
            step[i] = -(xf_a[j] - targets[i]) / deriv
            x0[i] = x0[i] + step[i]
            iters[i] += 1
    return x0, xf, jet, done, diverged, iters


def bomca_root_search(
    target_x: float,
    potential,
    w,
    N: int,
    t_f: float,
    cfg: RootSearchConfig = RootSearchConfig(),
    consts: PhysicalConstants = ATOMIC_UNITS,
    guess: Optional[complex] = None,
) -> RootSearchResult:
    """Complex x0 whose BOMCA trajectory lands on the real point ``target_x`` at ``t_f``."""
    return bomca_root_grid([target_x], potential, w, N, t_f, cfg, consts, guesses=None if guess is None else [guess])


def bomca_root_grid(
    targets: Sequence[float],
    potential,
    w,
    N: int,
    t_f: float,
    cfg: RootSearchConfig = RootSearchConfig(),
    consts: PhysicalConstants = ATOMIC_UNITS,
    guesses: Optional[Sequence[complex]] = None,
    sweep: str = "forward",
) -> RootSearchResult:
    """Root search over a grid of real targets.

    All targets are first solved together from the default seed (the target
    itself, or ``guesses``). Targets that fail are retried in sweep order,
    seeded by linear continuation from already-converged neighbours.
    Solutions jumping by more than ten grid spacings between neighbours are
    flagged in ``jumps``.
    """
    targets = np.asarray(targets, dtype=float)
    n = targets.size
    if t_f == 0:
        x0 = targets.astype(complex)
        jet = w.action_derivatives(x0, N, consts)
        ones = np.ones(n, dtype=bool)
        return RootSearchResult(targets, x0, x0.copy(), jet, ones, ~ones, np.zeros(n, int), ~ones)
    seeds = targets.astype(complex) if guesses is None else np.asarray(guesses, dtype=complex)
    x0, xf, jet, done, div, iters = _newton_batch(targets, seeds, w, potential, N, t_f, cfg, consts)

    order = np.arange(n) if sweep == "forward" else np.arange(n)[::-1]
    for pos, i in enumerate(order):
        if done[i] or pos == 0:
            continue
        prev = order[pos - 1]
        if not done[prev]:
            continue
        seed = x0[prev]
        if pos >= 2 and done[order[pos - 2]]:
            p2 = order[pos - 2]
            slope = (x0[prev] - x0[p2]) / (targets[prev] - targets[p2])
            seed = x0[prev] + slope * (targets[i] - targets[prev])
        r = _newton_batch(targets[i:i + 1], np.array([seed]), w, potential, N, t_f, cfg, consts)
        x0[i], xf[i], jet[:, i], done[i], div[i] = r[0][0], r[1][0], r[2][:, 0], r[3][0], r[4][0]
        iters[i] += r[5][0]
    jumps = np.zeros(n, dtype=bool)
    if n > 1:
        spacing = np.abs(np.diff(targets))
        dj = np.abs(np.diff(x0))
        big = (dj > 10 * spacing) & done[1:] & done[:-1]
        jumps[1:] |= big
    if (~done).any():
        warnings.warn(f"BOMCA root search did not converge for {(~done).sum()} of {n} targets", RuntimeWarning, stacklevel=2)
    return RootSearchResult(targets, x0, xf, jet, done, div, iters, jumps)
