"""Parameter sweeps producing :class:`~msiopto.tables.SweepTable` results.

Numbered operating positions follow the rising flank of the membrane-scan
resonance: starting at the dark port and moving towards the impedance-matched
point (position 5), with the SRM tuned so that position 5 sits on resonance.
Positions 1 to 4 are where the transmitted power first reaches 7, 60, 90 and
95 percent of its value at position 5.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .backaction import (
    _intervals_from_margin,
    backaction,
    displacement_spectrum,
    radiation_pressure_noise_spectrum,
)
from .cavity import (
    impedance_matched_position,
    linewidths,
    membrane_detuning,
    resonance_factor,
    srm_detuning,
    transmitted_power,
)
from .config import GRID_UNITS, RunConfig
from .couplings import (
    cavity_frequency_shift,
    dispersive_coupling,
    dissipative_coupling,
    msi_linewidth,
    normalized_dissipative_rate,
    tau_sign,
)
from .optics import OpticalParams, dark_port
from .tables import SweepTable

PEAK_FRACTIONS = {"1": 0.07, "2": 0.60, "3": 0.90, "4": 0.95, "5": 1.00}


# ---------------------------------------------------------------------------
# membrane scan and position locator

def scan_detuning(opt: OpticalParams, x, srm_offset: float = 0.0):
    """Detuning during a membrane scan with the SRM fixed.

    ``srm_offset`` (m) displaces the SRM from the position that puts the
    impedance-matched point on resonance.
    """
    x5 = impedance_matched_position(opt)
    delta_sr = -float(membrane_detuning(opt, x5)) + srm_detuning(opt, srm_offset)
    return delta_sr + membrane_detuning(opt, x)


def scan_transmission(opt: OpticalParams, x: float, srm_offset: float = 0.0) -> float:
    """Normalised transmitted power P_out / P_in at membrane position ``x`` during a scan."""
    return transmitted_power(opt, x, float(scan_detuning(opt, x, srm_offset)))


def locate_peak_fraction(opt: OpticalParams, fraction: float, samples: int = 400) -> float:
    """First position past the dark port where the scan reaches ``fraction`` of the peak."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction!r}")
    x_dp = dark_port(opt)
    x5 = impedance_matched_position(opt)
    if fraction == 1.0:
        return x5
    target = fraction * scan_transmission(opt, x5)
    f = lambda x: scan_transmission(opt, x) - target  # noqa: E731
    xs = np.linspace(x_dp, x5, samples)
    values = np.array([f(x) for x in xs])
    idx = np.flatnonzero(values >= 0)
    if idx.size == 0 or idx[0] == 0:
        return float(xs[idx[0]]) if idx.size else x5
    i = idx[0]
    return brentq(f, xs[i - 1], xs[i], xtol=1e-18, rtol=1e-14)


def peak_fraction_positions(opt: OpticalParams) -> dict:
    """Membrane positions of the numbered operating points plus the dark port."""
    out = {"dark": dark_port(opt)}
    for label, fraction in PEAK_FRACTIONS.items():
        out[label] = locate_peak_fraction(opt, fraction)
    return out


def resolve_position(opt: OpticalParams, position) -> float:
    """Position label (``"dark"``, ``"1"``..``"5"``) or peak fraction to a membrane position."""
    if position == "dark":
        return dark_port(opt)
    if isinstance(position, str):
        return locate_peak_fraction(opt, PEAK_FRACTIONS[position])
    return locate_peak_fraction(opt, float(position))


def operating_x0(cfg: RunConfig) -> float:
    return cfg.x0 if cfg.x0 is not None else resolve_position(cfg.optics, cfg.position)


def _meta(cfg: RunConfig, **extra):
    meta = {"artifact_version": __version__, "sweep": cfg.kind, "config": cfg.resolved()}
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# sweeps

def sweep_detuning(cfg: RunConfig) -> SweepTable:
    """Q_eff, optical damping and spring versus Delta / gamma at a fixed membrane position."""
    opt, mech = cfg.optics, cfg.mech
    x0 = operating_x0(cfg)
    gamma = float(linewidths(opt, x0)[2])
    grid = cfg.grid.values()
    results = [backaction(opt, mech, x0, d * gamma, cfg.power) for d in grid]
    damping = np.array([r.damping for r in results])
    margin = mech.gamma_m + damping / mech.mass
    intervals = _intervals_from_margin(opt, mech, x0, cfg.power, grid * gamma, margin)
    columns = {
        "detuning_rad_s": grid * gamma,
        "Q_eff": [r.q_eff if r.stable else math.nan for r in results],
        "stable": [1.0 if r.stable else 0.0 for r in results],
        "Gamma_over_m": damping / mech.mass,
        "K_over_m": [r.spring / mech.mass for r in results],
    }
    meta = _meta(cfg, x0_m=x0, gamma_rad_s=gamma,
                 unstable_intervals_over_gamma=[[lo / gamma, hi / gamma] for lo, hi in intervals])
    return SweepTable(GRID_UNITS["detuning"], grid, columns, meta)


def sweep_power(cfg: RunConfig) -> SweepTable:
    """Q_eff versus input power at fixed detuning (``point.detuning`` in units of gamma)."""
    opt, mech = cfg.optics, cfg.mech
    x0 = operating_x0(cfg)
    gamma = float(linewidths(opt, x0)[2])
    grid = cfg.grid.values()
    results = [backaction(opt, mech, x0, cfg.detuning * gamma, p) for p in grid]
    columns = {
        "Q_eff": [r.q_eff if r.stable else math.nan for r in results],
        "stable": [1.0 if r.stable else 0.0 for r in results],
        "Gamma": [r.damping for r in results],
        "Gamma_over_m": [r.damping / mech.mass for r in results],
        "K_over_m": [r.spring / mech.mass for r in results],
    }
    return SweepTable(GRID_UNITS["power"], grid, columns,
                      _meta(cfg, x0_m=x0, gamma_rad_s=gamma, detuning_rad_s=cfg.detuning * gamma))


def sweep_membrane(cfg: RunConfig) -> SweepTable:
    """Transmission, linewidth and detuning versus membrane position with the SRM fixed."""
    opt = cfg.optics
    grid = cfg.grid.values()
    offset = cfg.srm_displacement
    x5 = impedance_matched_position(opt)
    peak = scan_transmission(opt, x5, offset)
    deltas = np.array([float(scan_detuning(opt, x, offset)) for x in grid])
    trans = np.array([transmitted_power(opt, x, d) for x, d in zip(grid, deltas)])
    _, g_msi, g = linewidths(opt, grid)
    d_abs = [abs(resonance_factor(opt, x, d)) for x, d in zip(grid, deltas)]
    columns = {
        "P_trans_norm": trans,
        "P_trans_over_peak": trans / peak,
        "gamma_over_2pi": g / (2 * math.pi),
        "gamma_msi_over_2pi": g_msi / (2 * math.pi),
        "detuning_over_2pi": deltas / (2 * math.pi),
        "D_abs": d_abs,
    }
    positions = peak_fraction_positions(opt)
    return SweepTable(GRID_UNITS["membrane"], grid, columns,
                      _meta(cfg, positions_m=positions, peak_transmission=peak))


def _half_width(opt, x0, grid, trans):
    """HWHM of a SRM-scan resonance in metres, refined between grid points."""
    i_peak = int(np.argmax(trans))
    half = 0.5 * trans[i_peak]
    f = lambda d: transmitted_power(opt, x0, srm_detuning(opt, d)) - half  # noqa: E731
    below = np.flatnonzero(trans < half)
    left = below[below < i_peak]
    right = below[below > i_peak]
    if left.size == 0 or right.size == 0:
        return math.nan
    lo = brentq(f, grid[left[-1]], grid[left[-1] + 1], xtol=1e-20, rtol=1e-13)
    hi = brentq(f, grid[right[0] - 1], grid[right[0]], xtol=1e-20, rtol=1e-13)
    return 0.5 * abs(hi - lo)


def sweep_srm(cfg: RunConfig) -> SweepTable:
    """Transmission versus SRM displacement (from the resonance of ``x0``) at fixed x0."""
    opt = cfg.optics
    x0 = operating_x0(cfg)
    grid = cfg.grid.values()
    deltas = srm_detuning(opt, grid)
    trans = np.array([transmitted_power(opt, x0, d) for d in deltas])
    hwhm = _half_width(opt, x0, grid, trans)
    hwhm_rate = opt.omega0 * hwhm / opt.cavity_length
    gamma = float(linewidths(opt, x0)[2])
    columns = {
        "P_trans_norm": trans,
        "detuning_over_2pi": deltas / (2 * math.pi),
        "D_abs": [abs(resonance_factor(opt, x0, d)) for d in deltas],
    }
    meta = _meta(cfg, x0_m=x0, gamma_over_2pi=gamma / (2 * math.pi),
                 hwhm_m=hwhm, hwhm_over_2pi=hwhm_rate / (2 * math.pi),
                 hwhm_relative_error=hwhm_rate / gamma - 1.0)
    return SweepTable(GRID_UNITS["srm-scan"], grid, columns, meta)


def sweep_couplings(cfg: RunConfig) -> SweepTable:
    """Coupling rates versus membrane position."""
    opt, mech = cfg.optics, cfg.mech
    grid = cfg.grid.values()
    two_pi = 2 * math.pi
    columns = {
        "g_omega_over_2pi": dispersive_coupling(opt, mech, grid) / two_pi,
        "g_gamma_over_2pi": dissipative_coupling(opt, mech, grid) / two_pi,
        "g_norm": normalized_dissipative_rate(opt, mech, grid),
        "tau_sign": tau_sign(opt, grid),
        "omega_c_shift_over_2pi": cavity_frequency_shift(opt, grid) / two_pi,
        "gamma_msi_over_2pi": msi_linewidth(opt, grid) / two_pi,
    }
    return SweepTable(GRID_UNITS["couplings"], grid, columns, _meta(cfg))


def sweep_spectrum(cfg: RunConfig) -> SweepTable:
    """Displacement and back-action force spectra versus frequency in Hz."""
    opt, mech = cfg.optics, cfg.mech
    x0 = operating_x0(cfg)
    gamma = float(linewidths(opt, x0)[2])
    detuning = cfg.detuning * gamma
    grid = cfg.grid.values()
    omegas = 2 * math.pi * grid
    spec = displacement_spectrum(opt, mech, x0, detuning, cfg.power, omegas)
    s_plus = radiation_pressure_noise_spectrum(opt, mech, x0, detuning, cfg.power, omegas,
                                               kind="quantum")
    s_minus = radiation_pressure_noise_spectrum(opt, mech, x0, detuning, cfg.power, -omegas,
                                                kind="quantum")
    columns = {
        "S_x_thermal": spec.thermal,
        "S_x_backaction": spec.backaction,
        "S_x_total": spec.total,
        "S_F_backaction": s_plus + s_minus,
        "S_F_quantum_pos": s_plus,
        "S_F_quantum_neg": s_minus,
        "K_over_m": spec.spring / mech.mass,
        "Gamma_over_m": spec.damping / mech.mass,
    }
    result = backaction(opt, mech, x0, detuning, cfg.power)
    meta = _meta(cfg, x0_m=x0, detuning_rad_s=detuning, area_total_m2=spec.area(),
                 q_eff=result.q_eff if result.stable else None, stable=result.stable)
    return SweepTable(GRID_UNITS["spectrum"], grid, columns, meta)


SWEEPS = {
    "detuning": sweep_detuning,
    "power": sweep_power,
    "membrane": sweep_membrane,
    "srm-scan": sweep_srm,
    "couplings": sweep_couplings,
    "spectrum": sweep_spectrum,
}


def run(cfg: RunConfig) -> SweepTable:
    return SWEEPS[cfg.kind](cfg)
