"""
Dispersive and dissipative coupling rates
=========================================

Moving the membrane shifts the cavity resonance (dispersive coupling g_omega)
and changes the linewidth (dissipative coupling g_gamma).  Both are tunable
through zero by choosing the membrane position.  The normalised dissipative
rate stays finite at the dark port even though the linewidth there is set
only by the SRM.
"""
import numpy as np

from msiopto import MechanicalParams, OpticalParams, dark_port
from msiopto.couplings import coupling_rates, zero_point_amplitude

opt, mech = OpticalParams.experimental(), MechanicalParams.experimental()
print(f"x_ZPF = {zero_point_amplitude(mech):.4e} m")
print("  x (nm)   g_omega/2pi (Hz)   g_gamma/2pi (Hz)   g_norm (sqrt(rad/s))")
for x in np.linspace(0, opt.wavelength / 2, 13):
    g = coupling_rates(opt, mech, x)
    print(f"{x * 1e9:8.1f}   {g.g_omega / 2 / np.pi:16.4f}   {g.g_gamma / 2 / np.pi:16.4f}   "
          f"{g.tau_sign * g.g_norm:12.4e}")
g = coupling_rates(opt, mech, dark_port(opt))
print(f"\nat the dark port: g_omega = {g.g_omega:.4f} rad/s, g_gamma = {g.g_gamma:.1e}, "
      f"g_norm = {g.g_norm:.4e}")
