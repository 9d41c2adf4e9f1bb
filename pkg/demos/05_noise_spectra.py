"""
Radiation-pressure noise and displacement spectra
=================================================

Dissipative coupling mixes a Fano profile into the Lorentzian force noise,
so the ordered quantum spectrum is no longer symmetric about the carrier.
The displacement spectrum of the cooled membrane is broadened by Q_m / Q_eff
and its area (the mode variance) shrinks by the same factor.
"""
import math

import numpy as np
from scipy.constants import Boltzmann as k_B

from msiopto import MechanicalParams, OpticalParams, dark_port
from msiopto.backaction import (
    backaction,
    displacement_spectrum,
    radiation_pressure_noise_spectrum,
)
from msiopto.cavity import linewidths
from msiopto.sweeps import resolve_position

opt, mech = OpticalParams.experimental(), MechanicalParams.experimental()
for label in ("dark", "3", "5"):
    x = resolve_position(opt, label)
    s = [radiation_pressure_noise_spectrum(opt, mech, x, 0.0, 20e-3, w, kind="quantum")
         for w in (mech.omega_m, -mech.omega_m)]
    print(f"{label:>4}: S_F(+omega_m) / S_F(-omega_m) = {s[0] / s[1]:.4f}")

x = dark_port(opt)
delta = -0.6 * linewidths(opt, x)[2]
r = backaction(opt, mech, x, delta, 0.2)
print(f"\ndark port, Delta = -0.6 gamma, 200 mW: Q_eff = {r.q_eff:.1f}")


def grid(width, n=20001):
    span = math.asinh(0.5 * mech.omega_m / width)
    return mech.omega_m + width * np.sinh(np.linspace(-span, span, n))


warm = displacement_spectrum(opt, mech, x, delta, 0.0, grid(mech.gamma_m))
cold = displacement_spectrum(opt, mech, x, delta, 0.2, grid(0.5 * mech.omega_m / r.q_eff))
print(f"uncooled variance / (k_B T / m omega_m^2) = "
      f"{warm.area() / (k_B * mech.t_bath / (mech.mass * mech.omega_m ** 2)):.6f}")
print(f"cooled / uncooled variance = {cold.area() / warm.area():.4e}, "
      f"Q_eff / Q_m = {r.q_eff / mech.q_m:.4e}")
print(f"the optical spring shifts omega_m^2 by {r.spring / mech.mass / mech.omega_m ** 2:+.2%}, "
      f"which accounts for the difference")
