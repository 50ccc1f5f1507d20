"""Experiment drivers behind the command-line subcommands."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from complexaction import __version__
from complexaction.branches import BranchedAmplitudes, find_nodes, interfere
from complexaction.config import RunConfig
from complexaction.engine import FanResult, RootSearchResult, bomca_root_grid, propagate_fan
from complexaction.hierarchy import reconstruct_amplitude
from complexaction.potentials import Free, Harmonic
from complexaction.spectral import (
    GridWavefunction,
    free_gaussian,
    harmonic_gaussian,
    sample_wavepacket,
    split_operator_propagate,
)
from complexaction.tables import branch_columns, trajectory_columns, wavefunction_columns, write_table


class UncoveredRegionError(ValueError):
    """The comparison window reaches outside what the trajectory method covers."""


def _metadata(cfg: RunConfig, kind: str) -> dict:
    return {"complexaction": __version__, "config": cfg.name, "config_sha256": cfg.digest(), "table": kind}


# -- building blocks -----------------------------------------------------------


def fan_for(cfg: RunConfig, x0=None, threads: int = 1) -> FanResult:
    pts = cfg.fan.points(cfg.wavepacket) if x0 is None else x0
    return propagate_fan(
        cfg.wavepacket, cfg.potential, cfg.strategy, pts, cfg.truncation, cfg.integration, cfg.consts, threads=threads
    )


def reference_for(cfg: RunConfig) -> GridWavefunction:
    psi0 = sample_wavepacket(cfg.wavepacket, cfg.reference.grid, cfg.consts)
    n_steps = max(1, round(cfg.t_final / cfg.reference.dt))
    dt = cfg.t_final / n_steps if cfg.t_final > 0 else 0.0
    return split_operator_propagate(psi0, cfg.potential, dt, n_steps if cfg.t_final > 0 else 0, cfg.consts)


def fourier_interpolate(g: GridWavefunction, x) -> np.ndarray:
    """Evaluate the band-limited interpolant of a periodic grid wavefunction at arbitrary x."""
    x = np.asarray(x, dtype=float)
    coeffs = np.fft.fft(g.psi) / g.n_points
    k = g.k
    out = np.empty(x.shape, dtype=complex)
    for lo in range(0, x.size, 256):
        xs = x.ravel()[lo:lo + 256]
        out.ravel()[lo:lo + 256] = np.exp(1j * np.outer(xs - g.x_min, k)) @ coeffs
    return out


def exact_wavefunction(cfg: RunConfig, x, reference: GridWavefunction | None = None) -> np.ndarray:
    """Closed form when one exists (free, harmonic), else the split-operator reference."""
    pot = cfg.potential
    if isinstance(pot, Harmonic) and np.isclose(pot.mass, cfg.consts.mass):
        return harmonic_gaussian(x, cfg.t_final, cfg.wavepacket, pot.omega, cfg.consts)
    if isinstance(pot, Free):
        return free_gaussian(x, cfg.t_final, cfg.wavepacket, cfg.consts)
    if reference is None:
        reference = reference_for(cfg)
    return fourier_interpolate(reference, x)


def caustic_exclusion(cfg: RunConfig, ba: BranchedAmplitudes, x_caustic: float):
    """Upper edge of the zone past the inner caustic excluded from error norms.

    ``airy`` uses the Airy length (hbar^2 / (2 m |V'(x_c)|))^(1/3) at the
    caustic, the scale over which a fold's primitive two-branch amplitude
    breaks down.
    """
    excl = cfg.interference.exclusion
    if excl == "none":
        return -np.inf
    if excl == "airy":
        force = abs(float(np.real(cfg.potential.derivative(x_caustic, 1))))
        width = (cfg.consts.hbar**2 / (2.0 * cfg.consts.mass * force)) ** (1.0 / 3.0) if force > 0 else 0.0
    else:
        width = float(excl)
    return x_caustic + width


@dataclass
class MethodWavefunction:
    x: np.ndarray
    psi: np.ndarray
    excluded_below: float = -np.inf
    extra: dict = field(default_factory=dict)


def _window_points(x, window, what):
    lo, hi = window
    if x.min() > lo + 1e-12 or x.max() < hi - 1e-12:
        raise UncoveredRegionError(
            f"window [{lo}, {hi}] is not covered by the {what} (covers [{x.min():.6g}, {x.max():.6g}])"
        )
    return (x >= lo - 1e-12) & (x <= hi + 1e-12)


def method_wavefunction(cfg: RunConfig, threads: int = 1, sweep: str = "forward") -> MethodWavefunction:
    name = cfg.strategy.name
    if name == "real-classical":
        fan = fan_for(cfg, threads=threads)
        ba = interfere(fan, cfg.interference.grid.x, cfg.consts)
        sel = _window_points(ba.x_grid, cfg.window, "interference grid")
        both = ba.both[sel]
        if not both.all():
            bad = ba.x_grid[sel][~both]
            raise UncoveredRegionError(
                f"window [{cfg.window[0]}, {cfg.window[1]}] has {bad.size} points not covered by both branches "
                f"(first at x = {bad[0]:.6g})"
            )
        x_caustic = float(np.nanmin(fan.x_final.real[~fan.diverged]))
        return MethodWavefunction(
            ba.x_grid[sel], ba.psi_sum[sel], caustic_exclusion(cfg, ba, x_caustic),
            {"branches": ba, "fan": fan, "x_caustic": x_caustic},
        )
    if name == "bomca":
        x = cfg.targets.x
        sel = _window_points(x, cfg.window, "target grid")
        roots = bomca_root_grid(x[sel], cfg.potential, cfg.wavepacket, cfg.truncation, cfg.t_final,
                                cfg.root_search, cfg.consts, sweep=sweep)
        psi = np.where(roots.converged, roots.psi, np.nan)
        return MethodWavefunction(x[sel], psi, extra={"roots": roots})
    if name == "zevca":
        x = cfg.targets.x
        sel = _window_points(x, cfg.window, "target grid")
        fan = fan_for(cfg, x0=x[sel], threads=threads)
        return MethodWavefunction(x[sel], np.where(fan.diverged, np.nan, fan.psi_final), extra={"fan": fan})
    # dpm: scattered real final positions, resampled by interpolating S_0
    fan = fan_for(cfg, threads=threads)
    ok = ~fan.diverged
    xf = fan.x_final.real[ok]
    S0 = fan.S0_final[ok]
    order = np.argsort(xf)
    xf, S0 = xf[order], S0[order]
    if np.any(np.diff(xf) <= 0):
        raise ValueError("DPM trajectories crossed; final positions are not single-valued")
    x = cfg.targets.x
    x = x[(x >= xf[0]) & (x <= xf[-1])]
    if x.size == 0:
        raise UncoveredRegionError("DPM final positions do not reach the target grid")
    sel = _window_points(x, cfg.window, "DPM final positions")
    S = np.interp(x[sel], xf, S0.real) + 1j * np.interp(x[sel], xf, S0.imag)
    return MethodWavefunction(x[sel], reconstruct_amplitude(S, cfg.consts), extra={"fan": fan})


def compare_wavefunctions(x, psi_method, psi_ref, excluded_below: float = -np.inf) -> dict:
    """Error metrics between two wavefunctions sampled on the same uniform grid."""
    x = np.asarray(x, dtype=float)
    psi_method = np.asarray(psi_method)
    psi_ref = np.asarray(psi_ref)
    mask = (x >= excluded_below) & np.isfinite(psi_method) & np.isfinite(psi_ref)
    dm, dr = psi_method[mask], psi_ref[mask]
    ref_norm = np.linalg.norm(dr)
    rel = float(np.linalg.norm(dm - dr) / ref_norm) if ref_norm > 0 else float(np.linalg.norm(dm - dr))
    rel_abs = float(np.linalg.norm(np.abs(dm) - np.abs(dr)) / ref_norm) if ref_norm > 0 else float(
        np.linalg.norm(np.abs(dm) - np.abs(dr)))
    nodes_m = find_nodes(x, np.abs(np.nan_to_num(psi_method)))
    nodes_r = find_nodes(x, np.abs(psi_ref))
    return {
        "n_points": int(mask.sum()),
        "excluded_below": float(excluded_below) if np.isfinite(excluded_below) else None,
        "rel_l2": rel,
        "rel_l2_modulus": rel_abs,
        "sup_error": float(np.abs(dm - dr).max()) if dm.size else 0.0,
        "nodes_method": nodes_m,
        "nodes_reference": nodes_r,
        "max_node_displacement": _max_displacement(nodes_r, nodes_m),
        "max_spurious_node_distance": _max_displacement(nodes_m, nodes_r),
    }


def _max_displacement(src, dst) -> float:
    if not src:
        return 0.0
    if not dst:
        return float("inf")
    d = np.asarray(dst)
    return float(max(np.abs(d - s).min() for s in src))


# -- subcommands -----------------------------------------------------------------


def run_propagate(cfg: RunConfig, out_dir, threads: int = 1) -> dict:
    out = Path(out_dir)
    fan = fan_for(cfg, threads=threads)
    write_table(out / "trajectories.csv", trajectory_columns(fan, cfg.consts), _metadata(cfg, "trajectories"))
    final = {
        "traj_id": np.arange(len(fan)),
        "re_x0": fan.x0.real,
        "im_x0": fan.x0.imag,
        "re_xf": fan.x_final.real,
        "im_xf": fan.x_final.imag,
        "re_psi": fan.psi_final.real,
        "im_psi": fan.psi_final.imag,
        "diverged": fan.diverged,
    }
    write_table(out / "final.csv", final, _metadata(cfg, "final"))
    return {"trajectories": len(fan), "diverged": int(fan.diverged.sum()), "max_step_halving_error": fan.max_error}


def run_reference(cfg: RunConfig, out_dir) -> dict:
    ref = reference_for(cfg)
    write_table(Path(out_dir) / "reference.csv", wavefunction_columns(ref.x, ref.psi), _metadata(cfg, "reference"))
    return {"n_points": ref.n_points, "norm": ref.norm()}


def run_interfere(cfg: RunConfig, out_dir, threads: int = 1) -> dict:
    if cfg.strategy.name != "real-classical":
        raise ValueError(f"interfere needs strategy = real-classical, config has {cfg.strategy.name}")
    fan = fan_for(cfg, threads=threads)
    ba = interfere(fan, cfg.interference.grid.x, cfg.consts)
    write_table(Path(out_dir) / "branches.csv", branch_columns(ba), _metadata(cfg, "branches"))
    x = ba.x_grid
    return {
        "nodes_sum": find_nodes(x, np.abs(np.nan_to_num(ba.psi_sum))),
        "nodes_reflected": find_nodes(x, np.abs(np.nan_to_num(ba.psi1))),
        "nodes_direct": find_nodes(x, np.abs(np.nan_to_num(ba.psi2))),
        "covered_by_both": int(ba.both.sum()),
        "grid_points": int(x.size),
    }


def run_compare(cfg: RunConfig, out_dir=None, threads: int = 1, sweep: str = "forward") -> dict:
    mw = method_wavefunction(cfg, threads=threads, sweep=sweep)
    ref = exact_wavefunction(cfg, mw.x)
    report = compare_wavefunctions(mw.x, mw.psi, ref, mw.excluded_below)
    report.update({"config": cfg.name, "strategy": cfg.strategy.name, "window": list(cfg.window)})
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        cols = {"x": mw.x, "re_method": mw.psi.real, "im_method": mw.psi.imag, "re_ref": ref.real, "im_ref": ref.imag}
        write_table(out / "compare.csv", cols, _metadata(cfg, "compare"))
        (out / "metrics.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report
