"""
The Michelson-Sagnac interferometer as a movable mirror
========================================================

The membrane sits inside a Sagnac loop, so the bare interferometer behaves
like a single mirror whose reflectivity rho and transmissivity tau depend on
the membrane position.  Closing it with a signal-recycling mirror (SRM)
turns it into a cavity whose linewidth is set by tau.
"""
import math

import numpy as np

from msiopto import OpticalParams, dark_port, msi_coefficients
from msiopto.cavity import finesse, impedance_matched_position, linewidths

opt = OpticalParams.experimental()
print(f"membrane r^2 = {opt.r_m ** 2:.2f}, beamsplitter r^2 - t^2 = {opt.eps_bs:+.2f}")
print(f"cavity length {opt.cavity_length * 100:.1f} cm, FSR = {opt.fsr / 1e9:.4f} GHz")

# Sweep the membrane over half a wavelength: |rho|^2 + tau^2 stays at 1.
x = np.linspace(0, opt.wavelength / 2, 9)
rho, tau = msi_coefficients(opt, x)
print("\n  x (nm)    |rho|^2      tau^2     sum")
for xi, r, t in zip(x, rho, tau):
    print(f"{xi * 1e9:8.1f}  {abs(r) ** 2:9.5f}  {t ** 2:9.5f}  {abs(r) ** 2 + t ** 2:.12f}")

# At a dark port tau vanishes: all light returns towards the laser and the
# cavity linewidth is limited by the SRM transmission and the internal loss.
x_dp = dark_port(opt)
x5 = impedance_matched_position(opt)
print(f"\ndark port at {x_dp * 1e9:.3f} nm, impedance-matched point at {x5 * 1e9:.3f} nm")
for label, xi in (("dark port", x_dp), ("impedance matched", x5)):
    g_sr, g_msi, g = linewidths(opt, xi)
    print(f"{label:>18}: gamma_SR/2pi = {g_sr / 2 / math.pi / 1e6:.3f} MHz, "
          f"gamma_MSI/2pi = {g_msi / 2 / math.pi / 1e6:.3f} MHz, "
          f"finesse = {finesse(opt, xi):.0f}")
