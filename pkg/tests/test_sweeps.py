import math

import numpy as np
import pytest

from msiopto.cavity import linewidths, srm_detuning, transmitted_power
from msiopto.config import load_config
from msiopto.optics import OpticalParams, dark_port, msi_coefficients
from msiopto.sweeps import (
    PEAK_FRACTIONS,
    peak_fraction_positions,
    run,
    scan_transmission,
    sweep_couplings,
    sweep_detuning,
    sweep_membrane,
    sweep_power,
    sweep_spectrum,
    sweep_srm,
)
from msiopto.tables import emit

TWO_PI = 2 * math.pi


def cfg(kind, *overrides):
    return load_config(overrides=list(overrides), kind=kind)


def test_positions_are_ordered_fractions_of_peak(opt):
    pos = peak_fraction_positions(opt)
    order = [pos[k] for k in ("dark", "1", "2", "3", "4", "5")]
    assert all(a < b for a, b in zip(order, order[1:]))
    peak = scan_transmission(opt, pos["5"])
    for label, fraction in PEAK_FRACTIONS.items():
        assert scan_transmission(opt, pos[label]) == pytest.approx(fraction * peak, rel=1e-9)


def test_detuning_sweep_cools_on_resonance_near_dark_port():
    t = sweep_detuning(cfg("detuning", "point.position=1"))
    i0 = int(np.argmin(np.abs(t.grid)))
    assert t.grid[i0] == 0.0
    assert t.columns["Q_eff"][i0] < 5.8e5
    assert len(t.columns["Q_eff"]) == len(t.grid)


def test_detuning_sweep_flags_instabilities_at_position_five():
    t = sweep_detuning(cfg("detuning", "point.position=5"))
    intervals = t.meta["unstable_intervals_over_gamma"]
    assert len(intervals) == 2
    assert intervals[0][0] < 0 < intervals[0][1] < intervals[1][0]
    stable = t.columns["stable"].astype(bool)
    q = t.columns["Q_eff"]
    assert np.all(np.isfinite(q[stable])) and np.all(np.isnan(q[~stable]))
    for lo, hi in intervals:
        inside = (t.grid > lo) & (t.grid < hi)
        assert not np.any(stable[inside])


def test_detuning_sweep_without_power_is_flat():
    t = sweep_detuning(cfg("detuning", "point.power=0"))
    np.testing.assert_array_equal(t.columns["Q_eff"], 5.8e5)


def test_power_sweep():
    t = sweep_power(cfg("power"))
    q, gm = t.columns["Q_eff"], t.columns["Gamma_over_m"]
    mech = load_config().mech
    assert q[0] == pytest.approx(5.8e5, rel=0.1)
    assert np.all(np.diff(q) < 0)
    np.testing.assert_allclose(q * (1 + gm * 2 * mech.q_m / mech.omega_m), mech.q_m, rtol=1e-10)
    doubled = sweep_power(cfg("power", "sweep.start=0.6e-3", "sweep.stop=0.4"))
    np.testing.assert_allclose(doubled.columns["Gamma"], 2 * t.columns["Gamma"], rtol=1e-12)


def test_membrane_sweep_linewidth_span_between_dark_port_and_position_five():
    t = sweep_membrane(cfg("membrane"))
    pos = t.meta["positions_m"]
    segment = (t.grid >= pos["dark"]) & (t.grid <= pos["5"])
    g = t.columns["gamma_over_2pi"][segment]
    assert g.min() == pytest.approx(0.727e6, rel=0.01)
    assert g.max() == pytest.approx(1.45e6, rel=0.02)


def test_membrane_sweep_transmission_identity(opt):
    t = sweep_membrane(cfg("membrane", "sweep.count=301"))
    _, tau = msi_coefficients(opt, t.grid)
    expected = opt.t_sr ** 2 * tau ** 2 / t.columns["D_abs"] ** 2
    np.testing.assert_allclose(t.columns["P_trans_norm"], expected, rtol=1e-9, atol=1e-30)


def test_membrane_sweep_period():
    lam = 1064e-9
    t = sweep_membrane(cfg("membrane", f"sweep.stop={lam}", "sweep.count=800",
                           "sweep.endpoint=false"))
    half = len(t.grid) // 2
    np.testing.assert_allclose(t.columns["P_trans_norm"][:half],
                               t.columns["P_trans_norm"][half:], rtol=1e-6, atol=1e-15)


@pytest.mark.parametrize("label", ["2", "3", "5"])
def test_srm_scan_width_matches_linewidth(label):
    t = sweep_srm(cfg("srm-scan", f"point.position={label}"))
    assert abs(t.meta["hwhm_relative_error"]) < 0.02
    # on an SRM scan tau is fixed, so the transmission peak is the |D| minimum
    assert np.argmax(t.columns["P_trans_norm"]) == np.argmin(t.columns["D_abs"])


def test_srm_scan_widths_ordered_by_tau(opt):
    widths, taus = [], []
    for label in ("2", "3", "5"):
        t = sweep_srm(cfg("srm-scan", f"point.position={label}"))
        widths.append(t.meta["hwhm_over_2pi"])
        taus.append(msi_coefficients(opt, t.meta["x0_m"])[1] ** 2)
    assert widths == sorted(widths) and taus == sorted(taus)
    assert len(set(np.round(widths, -3))) == 3


def test_srm_half_wavelength_is_one_fsr(opt):
    x = dark_port(opt) + 7e-9
    d = srm_detuning(opt, opt.wavelength / 2)
    assert d == pytest.approx(-TWO_PI * opt.fsr, rel=1e-12)
    assert transmitted_power(opt, x, d) == pytest.approx(transmitted_power(opt, x, 0.0), rel=1e-9)


def test_srm_scan_width_shrinks_towards_closed_cavity():
    widths = []
    for r_sr2 in (0.99, 0.999, 0.9999):
        t = sweep_srm(cfg("srm-scan", f"optics.r_sr2={r_sr2}", "optics.t_loss2=0",
                          "optics.bs_asymmetry=0", "point.position=dark",
                          "sweep.start=-3e-9", "sweep.stop=3e-9", "sweep.count=6001"))
        widths.append(t.meta["hwhm_m"])
    assert widths[1] == pytest.approx(widths[0] / 10, rel=0.05)
    assert widths[2] == pytest.approx(widths[1] / 10, rel=0.05)
    p = OpticalParams.from_powers(0.17, 0.0, 1.0, 0.0)
    assert linewidths(p, dark_port(p))[2] == pytest.approx(0.0, abs=1e-12)


def test_couplings_sweep_columns():
    t = sweep_couplings(cfg("couplings"))
    assert t.grid[0] == 0.0 and t.grid[-1] < 1064e-9 / 2
    for name in ("g_omega_over_2pi", "g_gamma_over_2pi", "g_norm"):
        assert np.all(np.isfinite(t.columns[name]))


def test_spectrum_sweep():
    t = sweep_spectrum(cfg("spectrum", "point.position=dark", "point.power=0.2",
                           "point.detuning=-0.6"))
    assert t.meta["stable"] and 100 < t.meta["q_eff"] < 1000
    np.testing.assert_allclose(t.columns["S_x_total"],
                               t.columns["S_x_thermal"] + t.columns["S_x_backaction"])
    np.testing.assert_allclose(t.columns["S_F_backaction"],
                               t.columns["S_F_quantum_pos"] + t.columns["S_F_quantum_neg"])


@pytest.mark.parametrize("kind", ["detuning", "power", "membrane", "srm-scan", "couplings",
                                  "spectrum"])
def test_every_sweep_is_deterministic_and_self_describing(kind):
    c = cfg(kind, "sweep.count=11")
    a, b = run(c), run(c)
    for fmt in ("csv", "json"):
        assert emit(a, fmt) == emit(b, fmt)
    assert a.meta["config"] == c.resolved()
    assert a.meta["sweep"] == kind
