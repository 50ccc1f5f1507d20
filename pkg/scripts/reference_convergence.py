"""Self-convergence of the split-operator reference used for the Morse runs.

Fast outbound components of the packet reach x = 30 before t_f and wrap
around the periodic box, so the default box is also compared against a
wide one.
"""

import numpy as np

from complexaction import GridSpec, sample_wavepacket, split_operator_propagate
from complexaction.config import load_config
from complexaction.runs import fourier_interpolate

cfg = load_config("fig3")
x = np.linspace(-2.8, 10.0, 1281)
t = cfg.t_final


def run(x_max, n_points, dt):
    g = GridSpec(-10.0, x_max, n_points)
    n = round(t / dt)
    psi = split_operator_propagate(sample_wavepacket(cfg.wavepacket, g), cfg.potential, t / n, n)
    return fourier_interpolate(psi, x)


wide = {dt: run(90.0, 32768, dt) for dt in (5e-4, 2.5e-4, 1.25e-4)}
print("wide box [-10, 90), 32768 points:")
print(f"  dt 5e-4 vs 2.5e-4:    {np.abs(wide[5e-4] - wide[2.5e-4]).max():.2e}")
print(f"  dt 2.5e-4 vs 1.25e-4: {np.abs(wide[2.5e-4] - wide[1.25e-4]).max():.2e}")
best = wide[1.25e-4]
for x_max, n_points, dt in [(30.0, 2048, 5e-4), (30.0, 4096, 5e-4), (30.0, 8192, 2.5e-4), (90.0, 16384, 5e-4)]:
    err = np.abs(run(x_max, n_points, dt) - best).max()
    print(f"box [-10, {x_max:g}) n={n_points:5d} dt={dt:.2e}: max error on [-2.8, 10] = {err:.2e}")
