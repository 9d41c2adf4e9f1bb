"""
Transmission scans and the numbered operating points
=====================================================

With the SRM tuned so the impedance-matched point is resonant, moving the
membrane changes both the detuning and the linewidth.  Positions 1 to 5 are
where the transmitted power reaches 7, 60, 90, 95 and 100 % of the peak.
Holding the membrane and scanning the SRM instead traces a Lorentzian whose
width is the position-dependent linewidth.
"""
import math

import numpy as np

from msiopto import load_config, run

membrane = run(load_config(kind="membrane"))
pos = membrane.meta["positions_m"]
print("operating points (membrane position, nm):")
for label in ("dark", "1", "2", "3", "4", "5"):
    print(f"  {label:>4}: {pos[label] * 1e9:8.3f}")

# a coarse text plot of the scan between the dark port and a little past x5
sel = (membrane.grid > pos["dark"] - 10e-9) & (membrane.grid < pos["5"] + 10e-9)
for x, p, g in list(zip(membrane.grid[sel], membrane.columns["P_trans_over_peak"][sel],
                        membrane.columns["gamma_over_2pi"][sel]))[::4]:
    print(f"{x * 1e9:7.2f} nm  gamma/2pi {g / 1e6:5.3f} MHz  " + "#" * int(40 * min(p, 1.0)))

print("\nSRM scans at fixed membrane position:")
for label in ("2", "3", "5"):
    t = run(load_config(kind="srm-scan", overrides=[f"point.position={label}"]))
    print(f"  position {label}: fitted HWHM {t.meta['hwhm_over_2pi'] / 1e6:.3f} MHz, "
          f"linewidth {t.meta['gamma_over_2pi'] / 1e6:.3f} MHz "
          f"({t.meta['hwhm_relative_error']:+.2%})")
