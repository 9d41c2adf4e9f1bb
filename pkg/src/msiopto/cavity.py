"""The signal-recycled effective cavity formed by the SRM and the MSI compound mirror.

Detuning convention: ``Delta = omega0 - omega_c(x0)``, so ``Delta < 0`` is a
red-detuned carrier.  A positive SRM displacement ``dL`` moves the SRM towards
the beamsplitter and gives ``delta_SR = -omega0 * dL / cavity_length``.

An operating point fixes the carrier round-trip phase through the identity
``2 k0 Lc - arg rho(x0) = 2 pi N + 2 Delta Lc / c``; the SRM path phase is
chosen to satisfy it exactly, so the mean-field resonance factor equals
``1 - r_SR |rho| exp(2i Delta Lc / c)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import c, hbar

from .optics import (
    IDENTITY,
    OpticalParams,
    Phases,
    _msi_matrix,
    _rho_tau_from_offset,
    canonical_position,
    dark_port,
    effective_srm_transmittance,
    matrices_from_phases,
    msi_coefficients,
    propagation_phases,
)

# thresholds for the soft validity warnings of the small-parameter formulas
EXPANSION_LIMIT = 0.2
NARROW_BAND_LIMIT = 0.1


class ExpansionWarning(UserWarning):
    """A small-parameter expansion is used outside its regime of validity."""


class NarrowBandWarning(UserWarning):
    """The narrow-band linewidth formulas are used outside their regime of validity."""


@dataclass(frozen=True)
class OperatingPoint:
    """Membrane mean position ``x0`` (m), total detuning (rad/s) and input power (W)."""

    x0: float
    detuning: float = 0.0
    power: float = 0.0


@dataclass(frozen=True)
class CavityResponse:
    D: complex
    gamma_sr: float
    gamma_msi: float
    gamma: float
    delta_sr: float
    delta_msi: float
    delta: float
    finesse: float
    fsr: float


@dataclass(frozen=True)
class MeanFields:
    """Steady-state amplitudes in units of sqrt(photons / s)."""

    a_l0: float
    a_in: np.ndarray
    a_bs: np.ndarray
    a_m0: np.ndarray
    b_m0: np.ndarray


def carrier_phases(params: OpticalParams, x0: float, detuning: float) -> Phases:
    """Carrier propagation phases with the SRM placed to realise ``detuning``."""
    k0 = params.k0
    base = propagation_phases(params, k0, x0, sr_phase=0.0)
    rho, _ = _rho_tau_from_offset(params, base.offset)
    round_trip = np.angle(rho) + 2.0 * detuning * params.cavity_length / c
    sr = 0.5 * round_trip - base.arm - base.diag
    return base._replace(sr=sr % (2.0 * math.pi))


def sideband_phases(params: OpticalParams, x0: float, detuning: float, omega: float) -> Phases:
    return carrier_phases(params, x0, detuning).shifted(params, omega)


# ---------------------------------------------------------------------------
# detunings

def srm_detuning(params: OpticalParams, srm_displacement: float) -> float:
    """delta_SR = -omega0 dL / Lc."""
    return -params.omega0 * srm_displacement / params.cavity_length


def srm_displacement_for(params: OpticalParams, delta_sr: float) -> float:
    return -delta_sr * params.cavity_length / params.omega0


def _branch_reference_angle(params):
    return math.pi if params.branch == "lower" else 0.0


def fringe_offset(params: OpticalParams, x0):
    """k0 * delta_l measured from the balanced dark fringe of ``params.branch``, in (-pi, pi]."""
    theta = 2.0 * params.k0 * canonical_position(params, x0) - _branch_reference_angle(params)
    return np.angle(np.exp(1j * theta))


def membrane_detuning(params: OpticalParams, x0) -> float:
    """Exact delta_MSI = -(c / 2Lc) (arg rho(x0) - phi_DP)."""
    rho, _ = msi_coefficients(params, x0)
    dphi = np.angle(rho * np.exp(-1j * params.reference_phase))
    return -c * dphi / (2.0 * params.cavity_length)


def detunings(params: OpticalParams, x0: float, srm_displacement: float = 0.0):
    """Small-parameter detunings ``(delta_SR, delta_MSI, Delta)`` in rad/s.

    Valid for ``k0 delta_l << 1`` (measured from the chosen fringe) and a nearly
    balanced beamsplitter; an :class:`ExpansionWarning` is issued otherwise.
    """
    theta = float(fringe_offset(params, x0))
    eps = params.eps_bs
    if abs(theta) > EXPANSION_LIMIT or abs(eps) / max(params.r_bs, params.t_bs) > EXPANSION_LIMIT:
        warnings.warn(
            f"detuning expansion outside its regime: k0*dl={theta:.3g}, eps_BS={eps:.3g}",
            ExpansionWarning, stacklevel=2)
    sign = -1.0 if params.branch == "lower" else 1.0
    rm, tm = params.r_m, params.t_m
    bracket = (-sign * rm * tm * theta ** 2 / 2 - rm ** 2 * eps * theta
               + sign * rm * tm * eps ** 2 / 2)
    delta_sr = srm_detuning(params, srm_displacement)
    delta_msi = c / (2.0 * params.cavity_length) * bracket
    return delta_sr, delta_msi, delta_sr + delta_msi


def exact_detuning(params: OpticalParams, x0: float, srm_displacement: float = 0.0) -> float:
    """Total detuning with delta_MSI from the exact phase of rho (no expansion)."""
    return srm_detuning(params, srm_displacement) + float(membrane_detuning(params, x0))


# ---------------------------------------------------------------------------
# linewidth and resonance

def linewidths(params: OpticalParams, x0):
    """Half-linewidths ``(gamma_SR, gamma_MSI, gamma)`` in rad/s (narrow-band)."""
    t2 = effective_srm_transmittance(params)
    _, tau = msi_coefficients(params, x0)
    if t2 > NARROW_BAND_LIMIT or np.max(tau ** 2) > NARROW_BAND_LIMIT:
        warnings.warn("linewidth formula outside the narrow-band regime", NarrowBandWarning,
                      stacklevel=2)
    scale = c / (4.0 * params.cavity_length)
    gamma_sr = scale * t2
    gamma_msi = scale * tau ** 2
    return gamma_sr, gamma_msi, gamma_sr + gamma_msi


def finesse(params: OpticalParams, x0: float) -> float:
    return params.fsr * math.pi / linewidths(params, x0)[2]


def _resonance_factor(params, ph):
    rho, _ = _rho_tau_from_offset(params, ph.offset)
    return 1.0 - params.r_sr_eff * np.conj(rho) * np.exp(1j * ph.round_trip)


def resonance_factor(params: OpticalParams, x0: float, detuning: float,
                     omega: float = 0.0) -> complex:
    """Inverse resonance factor ``D`` at sideband offset ``omega`` from the carrier."""
    return complex(_resonance_factor(params, sideband_phases(params, x0, detuning, omega)))


def cavity_response(params: OpticalParams, x0: float,
                    srm_displacement: float = 0.0) -> CavityResponse:
    delta_sr = srm_detuning(params, srm_displacement)
    delta_msi = float(membrane_detuning(params, x0))
    g_sr, g_msi, g = linewidths(params, x0)
    delta = delta_sr + delta_msi
    return CavityResponse(
        D=resonance_factor(params, x0, delta), gamma_sr=g_sr, gamma_msi=float(g_msi),
        gamma=float(g), delta_sr=delta_sr, delta_msi=delta_msi, delta=delta,
        finesse=params.fsr * math.pi / float(g), fsr=params.fsr)


# ---------------------------------------------------------------------------
# printed closed forms of the recycled-interferometer matrices

def recycling_matrix(params: OpticalParams, ph: Phases) -> np.ndarray:
    """K_MSR = (I - P_R R_R P_R M_MS)^-1 in closed form."""
    rho, tau = _rho_tau_from_offset(params, ph.offset)
    D = 1.0 - params.r_sr_eff * np.conj(rho) * np.exp(1j * ph.round_trip)
    return np.array([[D, 0.0], [params.r_sr_eff * 1j * tau * np.exp(1j * ph.round_trip), 1.0]]) / D


def closed_form_matrices(params: OpticalParams, ph: Phases):
    """Closed-form ``(M_inc, M_ref, M_x)`` at the phases ``ph``."""
    E = lambda p: np.exp(1j * p)  # noqa: E731
    rm, tm = params.r_m, params.t_m
    rb, tb = params.r_bs, params.t_bs
    rs, ts = params.r_sr_eff, params.t_sr
    rho, _ = _rho_tau_from_offset(params, ph.offset)
    lc = ph.arm + ph.diag + ph.sr          # k Lc
    al = ph.arm + ph.diag                  # k (L + l)
    hd = ph.offset                         # k delta_l / 2
    D = 1.0 - rs * np.conj(rho) * E(2 * lc)

    m_inc = np.array([
        [(tb * (1 - rm * rs * E(2 * (lc + hd))) + rb * 1j * tm * rs * E(2 * lc)) * E(al - hd),
         -ts * rb * E(lc - hd)],
        [(rb * (1 - rm * rs * E(2 * (lc - hd))) + tb * 1j * tm * rs * E(2 * lc)) * E(al + hd),
         ts * tb * E(lc + hd)],
    ]) / D
    m_ref = np.array([
        [(tb * (rm - rs * E(2 * (lc + hd))) + 1j * tm * rb * E(2 * hd)) * E(al - hd),
         ts * (-rb * rm + 1j * tm * tb * E(2 * hd)) * E(lc - hd)],
        [(rb * (rm - rs * E(2 * (lc - hd))) + 1j * tm * tb * E(-2 * hd)) * E(al + hd),
         ts * (tb * rm - 1j * tm * rb * E(-2 * hd)) * E(lc + hd)],
    ]) / D
    off = -rm * rb * tb * rs * E(2 * lc)
    m_x = np.array([
        [rm * rb ** 2 * rs * E(2 * (lc - hd)), off],
        [off, rm * tb ** 2 * rs * E(2 * (lc + hd))],
    ]) / D
    return m_inc, m_ref, m_x


def product_form_matrices(params: OpticalParams, ph: Phases):
    """``(M_inc, M_ref, M_x, M_MS)`` from their defining matrix products.

    The recycling inverse is obtained with a numerical linear solve, independent
    of the closed forms above.
    """
    m = matrices_from_phases(params, ph)
    bs, mm, pl_, pl = m["M_BS"], m["M_m"], m["P_L"], m["P_l"]
    pr, tr, rr = m["P_R"], m["T_R"], m["R_R"]
    m_ms = bs.T @ pl_ @ pl @ mm @ pl @ pl_ @ bs
    k_msr = np.linalg.solve(IDENTITY - pr @ rr @ pr @ m_ms, IDENTITY)
    m_inc = pl @ pl_ @ bs @ k_msr @ pr @ tr
    m_ref = mm @ m_inc
    m_x = pl @ pl_ @ bs @ k_msr @ pr @ rr @ pr @ bs.T @ pl_ @ pl * params.r_m
    return m_inc, m_ref, m_x, m_ms


# ---------------------------------------------------------------------------
# mean fields and powers

def steady_state_fields(params: OpticalParams, x0: float, detuning: float,
                        power: float) -> MeanFields:
    """Mean fields for input power ``power`` (W) entering the laser port."""
    if power < 0:
        raise ValueError(f"input power must be >= 0, got {power!r}")
    ph = carrier_phases(params, x0, detuning)
    m = matrices_from_phases(params, ph)
    a_l0 = math.sqrt(power / (hbar * params.omega0))
    a_in = np.array([a_l0, 0.0], dtype=complex)
    a_bs = recycling_matrix(params, ph) @ m["P_R"] @ m["T_R"] @ a_in
    m_inc, _, _ = closed_form_matrices(params, ph)
    a_m0 = m_inc @ a_in
    return MeanFields(a_l0=a_l0, a_in=a_in, a_bs=a_bs, a_m0=a_m0, b_m0=m["M_m"] @ a_m0)


def _output_amplitude(params, ph):
    # field leaving through the SRM per unit laser amplitude
    m = matrices_from_phases(params, ph)
    a_bs = recycling_matrix(params, ph) @ m["P_R"] @ m["T_R"] @ np.array([1.0, 0.0])
    return params.t_sr * np.exp(1j * ph.sr) * (_msi_matrix(params, ph) @ a_bs)[1]


def transmitted_power(params: OpticalParams, x0: float, detuning: float) -> float:
    """Power leaving through the SRM, normalised to the input power."""
    return float(abs(_output_amplitude(params, carrier_phases(params, x0, detuning))) ** 2)


def intracavity_power(params: OpticalParams, x0: float, detuning: float) -> float:
    """Power travelling from the SRM towards the beamsplitter, normalised to the input."""
    ph = carrier_phases(params, x0, detuning)
    m = matrices_from_phases(params, ph)
    a_bs = recycling_matrix(params, ph) @ m["P_R"] @ m["T_R"] @ np.array([1.0, 0.0])
    return float(abs(a_bs[1]) ** 2)


def impedance_matched_position(params: OpticalParams) -> float:
    """Membrane position beyond the dark port (towards larger x) where gamma_MSI = gamma_SR.

    Falls back to the position of maximal transmissivity on that flank when
    matching is out of reach.
    """
    from scipy.optimize import brentq

    x_dp = dark_port(params)
    target = effective_srm_transmittance(params)
    quarter = params.wavelength / 8.0  # |tau| grows monotonically over this span
    f = lambda x: msi_coefficients(params, x)[1] ** 2 - target  # noqa: E731
    if f(x_dp + quarter) < 0:
        return x_dp + quarter
    return brentq(f, x_dp, x_dp + quarter, xtol=1e-18, rtol=1e-15)
