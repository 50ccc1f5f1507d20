"""CSV tables with a ``#``-prefixed metadata block.

Floats are written with 17 significant digits so that a table read back
reproduces the in-memory values exactly.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_table(path, columns: dict, metadata: dict | None = None) -> Path:
    """Write equal-length columns (name -> 1-D array) as CSV."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    lengths = {a.shape[0] for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"columns have different lengths: {dict(zip(names, (a.shape[0] for a in arrays)))}")
    buf = io.StringIO()
    for k, v in (metadata or {}).items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*arrays):
        w.writerow([fmt(v) for v in row])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue())
    return path


def read_table(path):
    """Return ``(columns, metadata)``; numeric columns come back as float arrays."""
    metadata = {}
    lines = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            metadata[key.strip()] = val.strip()
        elif line:
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    rows = list(reader)
    columns = {}
    for j, name in enumerate(header):
        raw = [r[j] for r in rows]
        try:
            columns[name] = np.array([float(v) for v in raw])
        except ValueError:
            columns[name] = np.array(raw)
    return columns, metadata


def trajectory_columns(fan, consts) -> dict:
    """Long-format table: one row per (trajectory, sample time)."""
    n_s, n_t = fan.x.shape
    if fan.v_aux is not None:
        v = fan.v_aux
    else:
        S = np.moveaxis(fan.jets, 1, 0)  # (N+1, n_s, n_t)
        if S.shape[0] < 2:
            S = np.concatenate([S, np.zeros_like(S)])
        v = np.broadcast_to(fan.strategy.velocity(fan.x, S, None, consts), fan.x.shape)
    cols = {
        "traj_id": np.repeat(np.arange(n_t), n_s),
        "t": np.tile(fan.times, n_t),
        "re_x": fan.x.real.T.ravel(),
        "im_x": fan.x.imag.T.ravel(),
        "re_v": np.real(v).T.ravel(),
        "im_v": np.imag(v).T.ravel(),
    }
    for n in range(fan.order + 1):
        cols[f"re_S{n}"] = fan.jets[:, n, :].real.T.ravel()
        cols[f"im_S{n}"] = fan.jets[:, n, :].imag.T.ravel()
    cols["diverged"] = np.repeat(fan.diverged, n_s)
    return cols


def wavefunction_columns(x, psi) -> dict:
    psi = np.asarray(psi)
    return {"x": x, "re_psi": psi.real, "im_psi": psi.imag, "abs_psi": np.abs(psi)}


def branch_columns(ba) -> dict:
    return {
        "x": ba.x_grid,
        "re_psi1": ba.psi1.real,
        "im_psi1": ba.psi1.imag,
        "re_psi2": ba.psi2.real,
        "im_psi2": ba.psi2.imag,
        "re_psi_sum": ba.psi_sum.real,
        "im_psi_sum": ba.psi_sum.imag,
        "covered_reflected": ba.covered1,
        "covered_direct": ba.covered2,
    }
