"""How the fig3 superposition changes with the truncation order N.

For an anharmonic potential nothing guarantees convergence in N; this
prints the error against the split-operator reference for a few orders.
"""

import numpy as np

from complexaction.config import build_config, load_config
from complexaction.runs import compare_wavefunctions, exact_wavefunction, method_wavefunction

base = load_config("fig3")
ref = None
print(" N  diverged  nodes  max node shift  rel L2 |psi| (excluded / full window)")
for N in (2, 3, 4, 5, 6, 8):
    cfg = build_config({**base.flat, "truncation": N}, base.name)
    try:
        mw = method_wavefunction(cfg)
    except Exception as e:  # coverage can break down once trajectories diverge
        print(f"{N:2d}  failed: {e}")
        continue
    if ref is None:
        ref = exact_wavefunction(cfg, mw.x)
    rep = compare_wavefunctions(mw.x, mw.psi, ref, mw.excluded_below)
    full = compare_wavefunctions(mw.x, mw.psi, ref)
    n_div = int(mw.extra["fan"].diverged.sum())
    print(f"{N:2d}  {n_div:8d}  {len(rep['nodes_method']):5d}  {rep['max_node_displacement']:14.4f}  "
          f"{rep['rel_l2_modulus']:.4f} / {full['rel_l2_modulus']:.4f}")
