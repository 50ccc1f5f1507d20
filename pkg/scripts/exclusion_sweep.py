"""Relative L2 error of |psi1 + psi2| as the lower edge of the comparison window moves away from the caustic."""

import numpy as np

from complexaction.config import load_config
from complexaction.runs import compare_wavefunctions, exact_wavefunction, method_wavefunction

cfg = load_config("fig3")
mw = method_wavefunction(cfg)
ref = exact_wavefunction(cfg, mw.x)
print(f"caustic at x = {mw.extra['x_caustic']:.4f}, Airy cut at x = {mw.excluded_below:.4f}")
for lo in (-2.8, -2.75, -2.7, -2.6, -2.5, mw.excluded_below, -2.0, -1.0):
    rep = compare_wavefunctions(mw.x, mw.psi, ref, lo)
    print(f"x >= {lo:7.3f}: rel L2 |psi| = {rep['rel_l2_modulus']:.4f}, complex rel L2 = {rep['rel_l2']:.4f}")
