"""Max error of each strategy against the thawed-Gaussian closed form over one harmonic period."""

import numpy as np

from complexaction import (
    Dpm,
    GaussianWavepacket,
    Harmonic,
    IntegrationConfig,
    RealClassical,
    Zevca,
    bomca_root_grid,
    harmonic_gaussian,
    propagate_fan,
)

w = GaussianWavepacket(alpha0=0.5, xc=1.0, pc=0.0)
pot = Harmonic(1.0)
x0 = np.linspace(-3.0, 5.0, 41)

for dt in (1e-2, 1e-3):
    cfg = IntegrationConfig(dt=dt, t_final=2 * np.pi, store_every=max(1, round(0.1 / dt)), error_estimate=False)
    row = []
    for strat in (Zevca(), Dpm(), RealClassical()):
        fan = propagate_fan(w, pot, strat, x0, 2, cfg)
        err = max(np.abs(np.exp(1j * fan.jets[k, 0]) - harmonic_gaussian(fan.x[k].real, t, w)).max()
                  for k, t in enumerate(fan.times))
        row.append(f"{strat.name} {err:.2e}")
    from complexaction import RootSearchConfig

    errs = []
    for t_f in np.linspace(0.5, 2 * np.pi, 6):
        r = bomca_root_grid(x0, pot, w, 2, t_f, RootSearchConfig(dt=dt))
        errs.append(np.abs(r.psi - harmonic_gaussian(x0, t_f, w)).max())
    row.append(f"bomca {max(errs):.2e}")
    print(f"dt={dt:g}: " + ", ".join(row))
