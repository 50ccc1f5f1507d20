"""End-to-end checks with fixed tolerances, shared by ``complexaction validate`` and the test suite."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from complexaction.branches import branch_amplitude, classify_branches, find_nodes
from complexaction.config import load_config
from complexaction.engine import GaussianWavepacket, bomca_root_grid, propagate_fan
from complexaction.hierarchy import ATOMIC_UNITS, leibniz_square
from complexaction.integrator import IntegrationConfig, integrate
from complexaction.potentials import Free, Harmonic, Morse
from complexaction.runs import exact_wavefunction, method_wavefunction, compare_wavefunctions, fan_for
from complexaction.spectral import (
    GridSpec,
    free_gaussian,
    harmonic_gaussian,
    harmonic_ground_state,
    sample_wavepacket,
    split_operator_propagate,
)
from complexaction.strategies import Bomca, Dpm, Zevca, make_split_rhs

TWO_PI = 2.0 * np.pi


@dataclass
class CheckResult:
    name: str
    passed: bool
    summary: str
    seconds: float = 0.0
    metrics: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.summary} ({self.seconds:.1f} s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_quadratic_exactness(time_limit: float = 10.0) -> CheckResult:
    """N = 2 ZEVCA, DPM and BOMCA reproduce harmonic Gaussian evolution to 1e-6 on t in [0, 2 pi]."""
    t0 = time.perf_counter()
    w = GaussianWavepacket(alpha0=0.5, xc=1.0, pc=0.0)
    pot = Harmonic(1.0)
    cfg = IntegrationConfig(dt=1e-3, t_final=TWO_PI, store_every=100, error_estimate=False)
    grid = np.linspace(-3.0, 5.0, 41)
    errs = {}
    for strat in (Zevca(), Dpm()):
        fan = propagate_fan(w, pot, strat, grid, 2, cfg)
        err = 0.0
        for k, t in enumerate(fan.times):
            psi = np.exp(1j * fan.jets[k, 0])
            err = max(err, np.abs(psi - harmonic_gaussian(fan.x[k].real, t, w, 1.0)).max())
        errs[strat.name] = float(err)
    err = 0.0
    converged = True
    for t_f in (TWO_PI / 4, TWO_PI / 2, 3 * TWO_PI / 4, TWO_PI):
        roots = bomca_root_grid(grid, pot, w, 2, t_f)
        converged &= bool(roots.converged.all())
        err = max(err, np.abs(roots.psi - harmonic_gaussian(grid, t_f, w, 1.0)).max())
    errs["bomca"] = float(err) if converged else float("inf")
    elapsed = time.perf_counter() - t0
    worst = max(errs.values())
    ok = worst < 1e-6 and elapsed < time_limit
    summary = ", ".join(f"{k} {v:.2e}" for k, v in errs.items()) + f" (tol 1e-6, runtime {elapsed:.1f}/{time_limit:.0f} s)"
    return CheckResult("quadratic exactness", ok, summary, metrics={**errs, "runtime": elapsed})


@_timed
def check_dpm_ground_state() -> CheckResult:
    """Straight DPM trajectories, s_1 = 0, and hbar^2 c_1 c_2 / m = m omega^2 x(0) in the harmonic ground state."""
    c = ATOMIC_UNITS
    omega = 1.0
    w = GaussianWavepacket(alpha0=c.mass * omega / (2 * c.hbar), xc=0.0, pc=0.0)
    x0 = np.array([2.0, -2.0, 1.0, -1.0, 0.5])
    cfg = IntegrationConfig(dt=1e-3, t_final=TWO_PI, store_every=10, error_estimate=False)
    fan = propagate_fan(w, Harmonic(omega), Dpm(), x0, 2, cfg, c)
    drift = float(np.abs(fan.x - x0[None, :]).max())
    s1 = float(np.abs(fan.jets[:, 1].real).max())
    c1 = -fan.jets[:, 1].imag / c.hbar
    c2 = -fan.jets[:, 2].imag / c.hbar
    qforce = c.hbar**2 * c1 * c2 / c.mass
    classical = c.mass * omega**2 * x0[None, :]
    rel = float((np.abs(qforce - classical) / np.abs(classical)).max())
    ok = drift < 1e-8 and s1 < 1e-8 and rel < 1e-6
    summary = f"max |x-x0| {drift:.1e}, max |s1| {s1:.1e} (tol 1e-8); quantum force rel err {rel:.1e} (tol 1e-6)"
    return CheckResult("DPM ground-state structure", ok, summary, metrics={"drift": drift, "s1": s1, "force_rel": rel})


def dpm_form_mismatch(w, potential, x0, t_final, dt=1e-3):
    """Largest |x| and |S| discrepancy between complex-form and split-form DPM runs."""
    c = ATOMIC_UNITS
    cfg = IntegrationConfig(dt=dt, t_final=t_final, store_every=50, error_estimate=False)
    fan = propagate_fan(w, potential, Dpm(), x0, 2, cfg, c)
    S0 = w.action_derivatives(np.asarray(x0, dtype=complex), 2, c)
    y0 = np.concatenate([np.asarray(x0, float)[None], S0.real, -S0.imag / c.hbar])
    res = integrate(y0, make_split_rhs(potential, c), cfg)
    x_split = res.states[:, 0]
    S_split = res.states[:, 1:4] - 1j * c.hbar * res.states[:, 4:7]
    dx = float(np.abs(fan.x.real - x_split).max())
    dS = float(np.abs(fan.jets - S_split).max())
    return dx, dS


@_timed
def check_dpm_equivalence() -> CheckResult:
    """Complex-form and real split-form DPM agree to 1e-9 (harmonic to 2 pi, Morse to 5.93)."""
    out = {}
    wh = GaussianWavepacket(alpha0=0.5, xc=1.0, pc=0.0)
    out["harmonic"] = dpm_form_mismatch(wh, Harmonic(1.0), np.linspace(-1.0, 3.0, 9), TWO_PI)
    wm = GaussianWavepacket(alpha0=0.5, xc=9.342, pc=0.0)
    out["morse"] = dpm_form_mismatch(wm, Morse(10.25, 0.2209), np.linspace(7.342, 11.342, 9), 5.93)
    worst = max(max(v) for v in out.values())
    ok = worst < 1e-9
    summary = ", ".join(f"{k}: x {v[0]:.1e}, S {v[1]:.1e}" for k, v in out.items()) + " (tol 1e-9)"
    return CheckResult("DPM form equivalence", ok, summary, metrics={"worst": worst})


@_timed
def check_fig2(time_limit: float = 30.0, config: str = "fig2") -> CheckResult:
    """Real-classical Morse fan splits into two branches that both cover every x_f in [-2.5, 10]."""
    t0 = time.perf_counter()
    cfg = load_config(config)
    fan = fan_for(cfg)
    reflected, direct, n_div = classify_branches(fan)
    grid = np.linspace(-2.5, 10.0, 1251)
    _, c1 = branch_amplitude(reflected, grid, cfg.consts)  # raises on a fold inside a branch
    _, c2 = branch_amplitude(direct, grid, cfg.consts)
    elapsed = time.perf_counter() - t0
    covered = c1 & c2
    ok = len(reflected) > 0 and len(direct) > 0 and n_div == 0 and bool(covered.all()) and elapsed < time_limit
    summary = (
        f"{len(reflected)} reflected + {len(direct)} direct, {n_div} diverged; reflected x_f in "
        f"[{reflected.x_range[0]:.3f}, {reflected.x_range[1]:.3f}], direct x_f in "
        f"[{direct.x_range[0]:.3f}, {direct.x_range[1]:.3f}]; {covered.sum()}/{grid.size} grid points "
        f"covered by both; step-halving error {fan.max_error:.1e}; runtime {elapsed:.1f}/{time_limit:.0f} s"
    )
    return CheckResult("fig2 two-branch coverage", ok, summary, metrics={
        "reflected": len(reflected), "direct": len(direct), "covered": int(covered.sum()),
        "max_error": fan.max_error, "runtime": elapsed,
    })


@_timed
def check_fig3(time_limit: float = 60.0, config: str = "fig3") -> CheckResult:
    """Superposed branch amplitudes match split-operator nodes within 0.1 and |psi| within 10 % (L2)."""
    t0 = time.perf_counter()
    cfg = load_config(config)
    mw = method_wavefunction(cfg)
    ref = exact_wavefunction(cfg, mw.x)
    rep = compare_wavefunctions(mw.x, mw.psi, ref, mw.excluded_below)
    strict = compare_wavefunctions(mw.x, mw.psi, ref)
    ba = mw.extra["branches"]
    sel = (ba.x_grid >= cfg.window[0]) & (ba.x_grid <= cfg.window[1])
    n1 = find_nodes(ba.x_grid[sel], np.abs(ba.psi1[sel]))
    n2 = find_nodes(ba.x_grid[sel], np.abs(ba.psi2[sel]))
    elapsed = time.perf_counter() - t0
    nodes_ok = len(rep["nodes_reference"]) > 0 and rep["max_node_displacement"] < 0.1
    ok = nodes_ok and rep["rel_l2_modulus"] < 0.10 and not n1 and not n2 and elapsed < time_limit
    summary = (
        f"{len(rep['nodes_reference'])} reference nodes, max displacement {rep['max_node_displacement']:.3f} (tol 0.1); "
        f"rel L2 |psi| {rep['rel_l2_modulus']:.3f} on x >= {rep['excluded_below']:.3f} (tol 0.10; "
        f"{strict['rel_l2_modulus']:.3f} with no caustic exclusion); "
        f"branch nodes {len(n1)}/{len(n2)}; runtime {elapsed:.1f}/{time_limit:.0f} s"
    )
    return CheckResult("fig3 interference nodes", ok, summary, metrics={
        **{k: v for k, v in rep.items() if not isinstance(v, list)},
        "nodes_reference": rep["nodes_reference"], "nodes_method": rep["nodes_method"],
        "rel_l2_modulus_unexcluded": strict["rel_l2_modulus"], "runtime": elapsed,
    })


@_timed
def check_spectral(ground_state_dt: float = 2e-4) -> CheckResult:
    """Split-operator unitarity, harmonic stationarity and free-Gaussian spreading."""
    w = GaussianWavepacket(alpha0=0.5, xc=9.342, pc=0.0)
    psi0 = sample_wavepacket(w, GridSpec(-10.0, 30.0, 4096))
    psi1 = split_operator_propagate(psi0, Morse(10.25, 0.2209), 5e-4, 10_000)
    drift = abs(psi1.norm() - psi0.norm())

    g = GridSpec(-10.0, 10.0, 256)
    wg = GaussianWavepacket(alpha0=0.5, xc=0.0, pc=0.0)
    n = round(TWO_PI / ground_state_dt)
    dt = TWO_PI / n
    psi = sample_wavepacket(wg, g)
    gs_err = 0.0
    chunks = 8
    for k in range(chunks):
        psi = split_operator_propagate(psi, Harmonic(1.0), dt, n // chunks)
        t = (k + 1) * (n // chunks) * dt
        gs_err = max(gs_err, float(np.abs(psi.psi - harmonic_ground_state(psi.x, t, 1.0)).max()))

    wf = GaussianWavepacket(alpha0=0.5, xc=0.0, pc=1.0)
    gf = GridSpec(-30.0, 50.0, 2048)
    f = split_operator_propagate(sample_wavepacket(wf, gf), Free(), 0.01, 300)
    free_err = float(np.abs(f.psi - free_gaussian(f.x, 3.0, wf)).max())
    ok = drift < 1e-10 and gs_err < 1e-8 and free_err < 1e-8
    summary = (
        f"norm drift {drift:.1e} over 1e4 steps (tol 1e-10); ground state error {gs_err:.1e} at dt={dt:.1e} "
        f"(tol 1e-8); free Gaussian error {free_err:.1e} (tol 1e-8)"
    )
    return CheckResult("spectral reference integrity", ok, summary,
                       metrics={"drift": drift, "ground_state": gs_err, "free": free_err})


def leibniz_brute_force(S, n):
    """Expand d^n(S_1^2) term by term: every ordered pair (a, b) with a + b = n + 2, weighted by C(n, a-1)."""
    total = 0j
    top = len(S) - 1
    for a in range(1, n + 2):
        for b in range(1, n + 2):
            if a + b != n + 2 or a > top or b > top:
                continue
            total += comb(n, a - 1) * S[a] * S[b]
    return total


@_timed
def check_leibniz(seed: int = 20240601) -> CheckResult:
    """leibniz_square vs term-by-term expansion on 100 random jets, n <= 10."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        S = rng.normal(size=12) + 1j * rng.normal(size=12)
        for n in range(11):
            a = leibniz_square(S, n)
            b = leibniz_brute_force(S, n)
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    ok = worst < 1e-12
    return CheckResult("Leibniz square", ok, f"max relative error {worst:.1e} (tol 1e-12)", metrics={"worst": worst})


@_timed
def check_root_search() -> CheckResult:
    """Harmonic ground-state BOMCA roots equal target * exp(-i omega t_f) within 3 Newton iterations."""
    w = GaussianWavepacket(alpha0=0.5, xc=0.0, pc=0.0)
    targets = np.linspace(-2.0, 2.0, 21)
    err = 0.0
    iters = 0
    conv = True
    for t_f in (0.5, 1.0, 2.5):
        r = bomca_root_grid(targets, Harmonic(1.0), w, 2, t_f)
        conv &= bool(r.converged.all())
        err = max(err, float(np.abs(r.x0 - targets * np.exp(-1j * t_f)).max()))
        iters = max(iters, int(r.iterations.max()))
    ok = conv and err < 1e-8 and iters <= 3
    return CheckResult("BOMCA root search", ok, f"max |x0 - closed form| {err:.1e} (tol 1e-8), max iterations {iters} (limit 3)",
                       metrics={"err": err, "iterations": iters})


ALL_CHECKS = (
    check_quadratic_exactness,
    check_dpm_ground_state,
    check_dpm_equivalence,
    check_fig2,
    check_fig3,
    check_spectral,
    check_leibniz,
    check_root_search,
)


def run_all(echo=print) -> list[CheckResult]:
    results = []
    for i, check in enumerate(ALL_CHECKS, 1):
        r = check()
        results.append(r)
        echo(f"{i}. {r.line()}")
    return results
