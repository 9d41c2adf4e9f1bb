"""Dynamical radiation-pressure back-action on the membrane.

The ponderomotive force is ``F_x(Omega) = -Kc(Omega) x(Omega)`` with the complex
back-action coefficient ``Kc``.  Its real part is the optical spring ``K`` and
``Gamma = -Im Kc / (2 Omega)`` is the optical damping coefficient; positive
``Gamma`` cools, and the oscillator is unstable once ``gamma_m + Gamma/m < 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import Boltzmann as k_B
from scipy.constants import c, hbar
from scipy.optimize import brentq

from .cavity import carrier_phases, closed_form_matrices, linewidths
from .optics import SIGMA3, IDENTITY, InvalidParameterError, OpticalParams


@dataclass(frozen=True)
class MechanicalParams:
    """Membrane fundamental mode.

    ``omega_m`` in rad/s, ``mass`` in kg, ``t_bath`` in K.
    """

    omega_m: float
    q_m: float
    mass: float
    t_bath: float = 293.0

    def __post_init__(self):
        bad = [name for name in ("omega_m", "q_m", "mass", "t_bath") if not getattr(self, name) > 0]
        if bad:
            raise InvalidParameterError(f"mechanical parameters must be > 0: {', '.join(bad)}")

    @classmethod
    def experimental(cls, **overrides):
        """136 kHz, Q = 5.8e5, 80 ng membrane in a 293 K bath."""
        kwargs = dict(omega_m=2 * math.pi * 136e3, q_m=5.8e5, mass=80e-12, t_bath=293.0)
        kwargs.update(overrides)
        return cls(**kwargs)

    @property
    def gamma_m(self):
        """Intrinsic amplitude damping rate omega_m / (2 Q_m)."""
        return self.omega_m / (2.0 * self.q_m)


@dataclass(frozen=True)
class BackactionResult:
    coefficient: complex
    spring: float
    damping: float
    q_eff: float | None
    stable: bool


def membrane_field_matrices(opt: OpticalParams, x0: float, detuning: float, omega: float):
    """``(M_inc, M_ref, M_x)`` at sideband offset ``omega`` for the given operating point."""
    ph = carrier_phases(opt, x0, detuning).shifted(opt, omega)
    return closed_form_matrices(opt, ph)


def _k11(opt, carrier, m_inc0, omega):
    _, _, m_x = closed_form_matrices(opt, carrier.shifted(opt, omega))
    mm = np.array([[opt.r_m, 1j * opt.t_m], [1j * opt.t_m, opt.r_m]])
    k = m_inc0.conj().T @ SIGMA3 @ mm @ (IDENTITY + 2.0 * m_x) @ SIGMA3 @ m_inc0
    return k[0, 0]


def backaction_coefficient(opt: OpticalParams, mech: MechanicalParams | None, x0: float,
                           detuning: float, power: float, omega: float) -> complex:
    """Complex back-action coefficient ``Kc(Omega)`` in N/m.

    ``mech`` is accepted for signature symmetry with the other functions; the
    coefficient itself is purely optical.
    """
    if power < 0:
        raise ValueError(f"input power must be >= 0, got {power!r}")
    carrier = carrier_phases(opt, x0, detuning)
    m_inc0, _, _ = closed_form_matrices(opt, carrier)
    bracket = _k11(opt, carrier, m_inc0, omega) - np.conj(_k11(opt, carrier, m_inc0, -omega))
    return complex(-(2j * opt.k0 / c) * opt.r_m * power * bracket)


def optical_spring_and_damping(opt, mech, x0, detuning, power, omega):
    """``(K, Gamma)``: spring constant in N/m and damping coefficient in kg/s."""
    if not omega > 0:
        raise ValueError(f"Omega must be > 0, got {omega!r}")
    kc = backaction_coefficient(opt, mech, x0, detuning, power, omega)
    return kc.real, -kc.imag / (2.0 * omega)


def backaction(opt: OpticalParams, mech: MechanicalParams, x0: float, detuning: float,
               power: float) -> BackactionResult:
    """Spring, damping and effective Q evaluated at Omega = omega_m."""
    kc = backaction_coefficient(opt, mech, x0, detuning, power, mech.omega_m)
    damping = -kc.imag / (2.0 * mech.omega_m)
    rate = mech.gamma_m + damping / mech.mass
    stable = rate > 0
    return BackactionResult(coefficient=kc, spring=kc.real, damping=damping,
                            q_eff=0.5 * mech.omega_m / rate if stable else None,
                            stable=bool(stable))


def effective_quality_factor(opt, mech, x0, detuning, power):
    """Q(Delta) = (omega_m / 2) / (gamma_m + Gamma(omega_m, Delta) / m), or None when unstable."""
    return backaction(opt, mech, x0, detuning, power).q_eff


def effective_temperature(q_eff: float, mech: MechanicalParams) -> float:
    """Mode temperature under cold damping, T_bath * Q_eff / Q_m."""
    if not q_eff > 0:
        raise ValueError(f"Q_eff must be > 0, got {q_eff!r}")
    return mech.t_bath * q_eff / mech.q_m


def damping_margin(opt, mech, x0, detuning, power):
    """gamma_m + Gamma/m at Omega = omega_m; negative means unstable."""
    _, damping = optical_spring_and_damping(opt, mech, x0, detuning, power, mech.omega_m)
    return mech.gamma_m + damping / mech.mass


def unstable_intervals(opt, mech, x0, detunings, power, rtol=1e-6):
    """Contiguous unstable detuning intervals ``[(lo, hi), ...]`` over a detuning grid.

    Interior boundaries are refined by root bracketing to ``rtol * gamma``;
    intervals touching the grid ends are clipped to the grid.
    """
    detunings = np.asarray(detunings, dtype=float)
    margin = np.array([damping_margin(opt, mech, x0, d, power) for d in detunings])
    return _intervals_from_margin(opt, mech, x0, power, detunings, margin, rtol)


def _intervals_from_margin(opt, mech, x0, power, detunings, margin, rtol=1e-6):
    gamma = float(linewidths(opt, x0)[2])
    f = lambda d: damping_margin(opt, mech, x0, d, power)  # noqa: E731
    unstable = margin <= 0
    out = []
    i, n = 0, len(detunings)
    while i < n:
        if not unstable[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and unstable[j + 1]:
            j += 1
        lo = detunings[0] if i == 0 else brentq(f, detunings[i - 1], detunings[i], xtol=rtol * gamma)
        hi = detunings[-1] if j == n - 1 else brentq(f, detunings[j], detunings[j + 1],
                                                     xtol=rtol * gamma)
        out.append((float(lo), float(hi)))
        i = j + 1
    return out


# ---------------------------------------------------------------------------
# spectra

def _force_row(opt, carrier, m_inc0, omega):
    _, m_ref, _ = closed_form_matrices(opt, carrier.shifted(opt, omega))
    return m_inc0[:, 0].conj() @ SIGMA3 @ m_ref


def radiation_pressure_noise_spectrum(opt, mech, x0, detuning, power, omega,
                                      kind="symmetrized"):
    """Spectral density of the radiation-pressure noise force in N^2/Hz.

    ``kind="quantum"`` gives the two-sided ordered spectrum <F F^dagger>(Omega)
    driven by the vacuum entering both ports; it is asymmetric in ``Omega``.
    ``kind="symmetrized"`` (default) gives the single-sided symmetrised
    density ``S(Omega) + S(-Omega)`` appropriate for classical noise budgets.
    """
    if kind not in ("quantum", "symmetrized"):
        raise ValueError(f"unknown spectrum kind {kind!r}")
    carrier = carrier_phases(opt, x0, detuning)
    m_inc0, _, _ = closed_form_matrices(opt, carrier)
    photon_flux = power / (hbar * opt.omega0)
    scale = (2.0 * hbar * opt.k0 * opt.r_m) ** 2 * photon_flux

    def ordered(w):
        return scale * float(np.sum(np.abs(_force_row(opt, carrier, m_inc0, w)) ** 2))

    omegas = np.atleast_1d(np.asarray(omega, dtype=float))
    if kind == "quantum":
        out = np.array([ordered(w) for w in omegas])
    else:
        out = np.array([ordered(w) + ordered(-w) for w in omegas])
    return out if np.ndim(omega) else float(out[0])


def thermal_force_spectrum(mech: MechanicalParams) -> float:
    """Single-sided thermal force density 4 k_B T (2 m gamma_m) in N^2/Hz."""
    return 4.0 * k_B * mech.t_bath * 2.0 * mech.mass * mech.gamma_m


def susceptibility(mech, omega, spring=0.0, damping=0.0):
    """Mechanical susceptibility chi(Omega) in m/N including optical spring and damping."""
    omega = np.asarray(omega, dtype=float)
    inv = mech.mass * (-omega ** 2 - 2j * (mech.gamma_m + damping / mech.mass) * omega
                       + mech.omega_m ** 2 + spring / mech.mass)
    return 1.0 / inv


@dataclass(frozen=True)
class DisplacementSpectrum:
    """Single-sided displacement densities (m^2/Hz) on an angular-frequency grid."""

    omega: np.ndarray
    thermal: np.ndarray
    backaction: np.ndarray
    spring: np.ndarray
    damping: np.ndarray

    @property
    def total(self):
        return self.thermal + self.backaction

    def area(self, which="total"):
        """Integral over cyclic frequency, i.e. the displacement variance in m^2."""
        from scipy.integrate import trapezoid

        return float(trapezoid(getattr(self, which), self.omega / (2 * math.pi)))


def displacement_spectrum(opt, mech, x0, detuning, power, omegas) -> DisplacementSpectrum:
    """Thermal and back-action displacement spectra with the optically modified susceptibility.

    Spring and damping are evaluated at every grid frequency.
    """
    omegas = np.asarray(omegas, dtype=float)
    if np.any(omegas <= 0):
        raise ValueError("frequency grid must be strictly positive")
    kcs = np.array([backaction_coefficient(opt, mech, x0, detuning, power, w) for w in omegas])
    spring = kcs.real
    damping = -kcs.imag / (2.0 * omegas)
    chi2 = np.abs(susceptibility(mech, omegas, spring, damping)) ** 2
    if power > 0:
        s_ba = radiation_pressure_noise_spectrum(opt, mech, x0, detuning, power, omegas)
    else:
        s_ba = np.zeros_like(omegas)
    return DisplacementSpectrum(omega=omegas, thermal=thermal_force_spectrum(mech) * chi2,
                                backaction=s_ba * chi2, spring=spring, damping=damping)
