"""Branch classification and superposition for real-classical trajectory fans.

A fan of real classical trajectories in an anharmonic well folds over
itself: past the inner turning point each final position is reached twice,
once by a trajectory that has bounced off the wall and once by one that has
not. Each family is single-valued in x_f, so it defines its own nodeless
amplitude; the sum of the two carries the interference pattern.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from complexaction.hierarchy import ATOMIC_UNITS, PhysicalConstants, reconstruct_amplitude


class BranchLabel(enum.Enum):
    REFLECTED = "reflected"
    DIRECT = "direct"


class BranchFoldError(ValueError):
    """Final positions within a branch are not monotonic in the starting point."""

    def __init__(self, label, x0_lo, x0_hi):
        self.interval = (x0_lo, x0_hi)
        super().__init__(f"{label.value} branch folds between x0 = {x0_lo:.6g} and x0 = {x0_hi:.6g}")


@dataclass
class Branch:
    label: BranchLabel
    x0: np.ndarray
    x_f: np.ndarray
    S0_f: np.ndarray
    diverged: np.ndarray = None

    def __post_init__(self):
        order = np.argsort(self.x0)
        self.x0 = np.asarray(self.x0, dtype=float)[order]
        self.x_f = np.asarray(self.x_f, dtype=float)[order]
        self.S0_f = np.asarray(self.S0_f, dtype=complex)[order]
        if self.diverged is None:
            self.diverged = np.zeros(self.x0.size, dtype=bool)
        else:
            self.diverged = np.asarray(self.diverged, dtype=bool)[order]

    def __len__(self):
        return self.x0.size

    def check_monotonic(self):
        if len(self) < 2:
            return
        d = np.diff(self.x_f)
        sign = np.sign(np.median(d))
        bad = np.flatnonzero(d * sign <= 0)
        if sign == 0 or bad.size:
            i = bad[0] if bad.size else 0
            raise BranchFoldError(self.label, self.x0[i], self.x0[i + 1])

    @property
    def x_range(self):
        return (self.x_f.min(), self.x_f.max()) if len(self) else (np.nan, np.nan)


def classify_branches(fan):
    """Split a real-classical fan into (reflected, direct) branches.

    A trajectory is reflected when its velocity goes from negative to
    positive at some sample in (0, t_f]. Diverged trajectories are dropped;
    their number is returned as the third element.
    """
    if fan.v_aux is None:
        raise ValueError("branch classification needs velocity histories (real-classical fan)")
    v = fan.v_aux.real
    bounced = ((v[:-1] < 0) & (v[1:] >= 0)).any(axis=0)
    keep = ~fan.diverged
    x0 = fan.x0.real
    xf = fan.x_final.real
    S0 = fan.S0_final

    def make(label, mask):
        m = mask & keep
        return Branch(label, x0[m], xf[m], S0[m], np.zeros(m.sum(), dtype=bool))

    reflected = make(BranchLabel.REFLECTED, bounced)
    direct = make(BranchLabel.DIRECT, ~bounced)
    return reflected, direct, int(fan.diverged.sum())


def branch_amplitude(b: Branch, x_grid, consts: PhysicalConstants = ATOMIC_UNITS):
    """Per-branch wavefunction on ``x_grid`` from S_0 interpolated linearly in x_f.

    Returns ``(psi, covered)``; uncovered points get psi = nan.
    """
    b.check_monotonic()
    x_grid = np.asarray(x_grid, dtype=float)
    psi = np.full(x_grid.shape, np.nan + 0j)
    if len(b) < 2:
        return psi, np.zeros(x_grid.shape, dtype=bool)
    order = np.argsort(b.x_f)
    xf, S0 = b.x_f[order], b.S0_f[order]
    covered = (x_grid >= xf[0]) & (x_grid <= xf[-1])
    xs = x_grid[covered]
    S = np.interp(xs, xf, S0.real) + 1j * np.interp(xs, xf, S0.imag)
    psi[covered] = reconstruct_amplitude(S, consts)
    return psi, covered


def superpose(psi1, psi2):
    return np.asarray(psi1) + np.asarray(psi2)


@dataclass
class BranchedAmplitudes:
    x_grid: np.ndarray
    psi1: np.ndarray  # reflected
    psi2: np.ndarray  # direct
    psi_sum: np.ndarray
    covered1: np.ndarray
    covered2: np.ndarray

    @property
    def coverage(self) -> np.ndarray:
        """0 = none, 1 = reflected only, 2 = direct only, 3 = both."""
        return self.covered1.astype(int) + 2 * self.covered2.astype(int)

    @property
    def both(self) -> np.ndarray:
        return self.covered1 & self.covered2


def interfere(fan, x_grid, consts: PhysicalConstants = ATOMIC_UNITS) -> BranchedAmplitudes:
    """Classify, build both branch amplitudes and superpose them on ``x_grid``."""
    reflected, direct, _ = classify_branches(fan)
    p1, c1 = branch_amplitude(reflected, x_grid, consts)
    p2, c2 = branch_amplitude(direct, x_grid, consts)
    total = np.where(c1 & c2, superpose(np.where(c1, p1, 0), np.where(c2, p2, 0)), np.nan + 0j)
    return BranchedAmplitudes(np.asarray(x_grid, float), p1, p2, total, c1, c2)


def find_nodes(x_grid, abs_psi, ratio: float = 0.1):
    """Positions of deep local minima of |psi| on a uniform grid.

    A strict interior local minimum counts as a node when it lies below
    ``ratio`` times the larger of its neighbouring local maxima. Its position
    is refined by a parabola through |psi|^2 at the three nearest samples.
    """
    x = np.asarray(x_grid, dtype=float)
    a = np.asarray(abs_psi, dtype=float)
    if a.size < 3:
        return []
    interior = np.arange(1, a.size - 1)
    is_min = (a[interior] < a[interior - 1]) & (a[interior] < a[interior + 1])
    is_max = (a[interior] > a[interior - 1]) & (a[interior] > a[interior + 1])
    mins = interior[is_min]
    maxs = interior[is_max]
    dx = x[1] - x[0]
    nodes = []
    for i in mins:
        left = maxs[maxs < i]
        right = maxs[maxs > i]
        # an edge sample counts as a neighbouring maximum when the profile rises to it
        lmax = a[left[-1]] if left.size else a[:i].max()
        rmax = a[right[0]] if right.size else a[i + 1:].max()
        if not a[i] < ratio * max(lmax, rmax):
            continue
        y0, y1, y2 = a[i - 1] ** 2, a[i] ** 2, a[i + 1] ** 2
        curv = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / curv if curv > 0 else 0.0
        nodes.append(float(x[i] + shift * dx))
    return nodes
