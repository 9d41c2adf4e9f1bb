"""
Effective mechanical Q versus detuning
======================================

Near the dark port the coupling is mostly dispersive and cooling needs red
detuning as usual.  Moving towards the impedance-matched point brings in
dissipative coupling: cooling appears on resonance and at blue detuning, and
a new unstable region opens at small red detuning.
"""
import numpy as np

from msiopto import load_config, run

for label in ("1", "3", "4", "5"):
    t = run(load_config(kind="detuning", overrides=[f"point.position={label}",
                                                    "sweep.count=9"]))
    q = t.columns["Q_eff"]
    cells = " ".join("  unstable" if np.isnan(v) else f"{v:10.3g}" for v in q)
    print(f"position {label}: {cells}")
    full = run(load_config(kind="detuning", overrides=[f"point.position={label}"]))
    print(f"            unstable Delta/gamma intervals: "
          f"{[[round(a, 3), round(b, 3)] for a, b in full.meta['unstable_intervals_over_gamma']]}")
print("Delta/gamma: " + " ".join(f"{d:10.2f}" for d in t.grid))
