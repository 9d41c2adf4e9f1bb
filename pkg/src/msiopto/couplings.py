"""Single-photon optomechanical coupling rates of the effective cavity.

Rates are angular (rad/s) per zero-point displacement; divide by 2 pi for Hz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c, hbar

from .backaction import MechanicalParams
from .optics import OpticalParams, canonical_position, msi_coefficients


@dataclass(frozen=True)
class CouplingRates:
    """Coupling rates at one membrane position.

    ``g_norm`` is the continuous factor of ``g_gamma / sqrt(2 gamma_MSI)``; the
    ratio itself equals ``tau_sign * g_norm`` and jumps sign at a dark port.
    """

    g_omega: float
    g_gamma: float
    g_norm: float
    tau_sign: float
    x_zpf: float


def zero_point_amplitude(mech: MechanicalParams) -> float:
    """x_ZPF = sqrt(hbar / (2 m omega_m))."""
    return math.sqrt(hbar / (2.0 * mech.mass * mech.omega_m))


def _theta(opt, x):
    return 2.0 * opt.k0 * canonical_position(opt, x)


def cavity_frequency_shift(opt: OpticalParams, x):
    """omega_c(x) - omega_res, with omega_res the resonance at the dark fringe.

    The phase of rho is measured from the dark-fringe phase; array input is
    unwrapped along its order so the result stays on one continuous branch.
    """
    rho, _ = msi_coefficients(opt, x)
    phase = np.angle(rho * np.exp(-1j * opt.reference_phase))
    if np.ndim(phase):
        phase = np.unwrap(phase)
    return c / (2.0 * opt.cavity_length) * phase


def resonance_frequency(opt: OpticalParams) -> float:
    """omega_res = pi N c / Lc + (c / 2Lc) phi_DP for the resonance closest to the carrier."""
    lc = opt.cavity_length
    return math.pi * opt.resonance_index * c / lc + c / (2.0 * lc) * opt.reference_phase


def cavity_eigenfrequency(opt: OpticalParams, x):
    """omega_c(x) = pi N c / Lc + (c / 2Lc) arg rho(x) in rad/s."""
    return resonance_frequency(opt) + cavity_frequency_shift(opt, x)


def msi_linewidth(opt: OpticalParams, x):
    """gamma_MSI(x) = c tau(x)^2 / (4 Lc)."""
    _, tau = msi_coefficients(opt, x)
    return c * tau ** 2 / (4.0 * opt.cavity_length)


def dispersive_coupling(opt: OpticalParams, mech: MechanicalParams, x0):
    """g_omega = x_ZPF d omega_c / dx at ``x0``."""
    rho, _ = msi_coefficients(opt, x0)
    eps = opt.eps_bs
    bracket = (opt.r_m ** 2 * eps
               + opt.r_m * opt.t_m * math.sqrt(1.0 - eps ** 2) * np.sin(_theta(opt, x0)))
    return opt.omega0 * zero_point_amplitude(mech) / opt.cavity_length * bracket / np.abs(rho) ** 2


def dissipative_coupling(opt: OpticalParams, mech: MechanicalParams, x0):
    """g_gamma = x_ZPF d gamma_MSI / dx at ``x0``."""
    _, tau = msi_coefficients(opt, x0)
    return (opt.omega0 * zero_point_amplitude(mech) / opt.cavity_length * tau
            * opt.r_m * math.sqrt(1.0 - opt.eps_bs ** 2) * np.cos(_theta(opt, x0)))


def _tau_slope(opt, x0):
    return 2.0 * opt.k0 * opt.r_m * math.sqrt(1.0 - opt.eps_bs ** 2) * np.cos(_theta(opt, x0))


def normalized_dissipative_rate(opt: OpticalParams, mech: MechanicalParams, x0):
    """Continuous factor of g_gamma / sqrt(2 gamma_MSI) in sqrt(rad/s).

    With gamma_MSI proportional to tau^2 the ratio reduces to
    ``x_ZPF tau'(x0) sqrt(c / 2Lc) sign(tau)``; this returns it without the
    sign, which :func:`tau_sign` supplies.  Finite at every dark port.
    """
    return zero_point_amplitude(mech) * _tau_slope(opt, x0) * math.sqrt(
        c / (2.0 * opt.cavity_length))


def tau_sign(opt: OpticalParams, x0):
    _, tau = msi_coefficients(opt, x0)
    return np.sign(tau)


def coupling_rates(opt: OpticalParams, mech: MechanicalParams, x0: float) -> CouplingRates:
    return CouplingRates(
        g_omega=float(dispersive_coupling(opt, mech, x0)),
        g_gamma=float(dissipative_coupling(opt, mech, x0)),
        g_norm=float(normalized_dissipative_rate(opt, mech, x0)),
        tau_sign=float(tau_sign(opt, x0)),
        x_zpf=zero_point_amplitude(mech),
    )
