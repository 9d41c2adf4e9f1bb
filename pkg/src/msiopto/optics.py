"""Compound-mirror optics of the Michelson-Sagnac interferometer.

Fields are propagated with 2x2 complex matrices (plain ``numpy`` arrays of
shape ``(2, 2)``).  Every propagation phase is built from four one-way
elementary phases (arm, diagonal half-arm, membrane offset, SRM path), each
reduced modulo 2*pi, so that products of matrices and the closed-form
expressions built from them agree to round-off even though the absolute
optical phases are of order 1e6 rad.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.constants import c

TWO_PI = 2.0 * math.pi
UNITARY_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA3 = np.diag([1.0, -1.0]).astype(complex)

BRANCHES = ("lower", "upper")


class InvalidParameterError(ValueError):
    """Raised when a parameter record violates its physical invariants."""


class NoDarkPortWarning(UserWarning):
    """The dark-fringe condition has no solution for the given parameters."""


@dataclass(frozen=True)
class OpticalParams:
    """Static constants of the signal-recycled Michelson-Sagnac interferometer.

    Amplitude coefficients of the membrane, beamsplitter and SRM are lossless
    (``r**2 + t**2 == 1``); all internal loss is lumped into ``t_loss2`` and
    added to the SRM transmittance inside the recycled cavity.

    Parameters
    ----------
    r_m, t_m : float
        Membrane amplitude reflectivity / transmissivity.
    r_bs, t_bs : float
        Beamsplitter amplitude reflectivity / transmissivity.
    r_sr, t_sr : float
        Signal-recycling mirror amplitude reflectivity / transmissivity.
    t_loss2 : float
        Round-trip power loss inside the interferometer.
    wavelength : float
        Laser wavelength in m.
    arm_length, diag_length, sr_length : float
        L, l and l_SR in m; the SR-to-membrane path is their sum.
    branch : {"lower", "upper"}
        Dark fringe used as detuning reference.  ``"lower"`` is the fringe
        with ``cos(2 k0 x) < 0``.
    """

    r_m: float
    t_m: float
    r_bs: float
    t_bs: float
    r_sr: float
    t_sr: float
    t_loss2: float = 0.0
    wavelength: float = 1064e-9
    arm_length: float = 0.030
    diag_length: float = 0.020
    sr_length: float = 0.037
    branch: str = "lower"

    def __post_init__(self):
        problems = []
        for name in ("r_m", "t_m", "r_bs", "t_bs", "r_sr", "t_sr", "t_loss2"):
            if getattr(self, name) < 0:
                problems.append(f"{name} must be >= 0, got {getattr(self, name)!r}")
        for r, t, label in (("r_m", "t_m", "membrane"), ("r_bs", "t_bs", "beamsplitter"),
                            ("r_sr", "t_sr", "SRM")):
            total = getattr(self, r) ** 2 + getattr(self, t) ** 2
            if abs(total - 1.0) > UNITARY_TOL:
                problems.append(f"{label}: {r}**2 + {t}**2 = {total!r}, expected 1")
        if self.t_sr ** 2 + self.t_loss2 > 1.0:
            problems.append(
                f"t_sr**2 + t_loss2 = {self.t_sr ** 2 + self.t_loss2!r} exceeds 1")
        for name in ("wavelength", "arm_length", "diag_length", "sr_length"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.branch not in BRANCHES:
            problems.append(f"branch must be one of {BRANCHES}, got {self.branch!r}")
        if problems:
            raise InvalidParameterError("; ".join(problems))

    @classmethod
    def from_powers(cls, r_m2, bs_asymmetry, r_sr2, t_loss2=0.0, **kwargs):
        """Build from power reflectivities and the beamsplitter asymmetry r_BS^2 - t_BS^2."""
        if not 0.0 <= r_m2 <= 1.0 or not 0.0 <= r_sr2 <= 1.0 or abs(bs_asymmetry) > 1.0:
            raise InvalidParameterError(
                f"power coefficients out of range: r_m2={r_m2!r}, r_sr2={r_sr2!r}, "
                f"bs_asymmetry={bs_asymmetry!r}")
        r_bs2 = 0.5 * (1.0 + bs_asymmetry)
        return cls(
            r_m=math.sqrt(r_m2), t_m=math.sqrt(1.0 - r_m2),
            r_bs=math.sqrt(r_bs2), t_bs=math.sqrt(1.0 - r_bs2),
            r_sr=math.sqrt(r_sr2), t_sr=math.sqrt(1.0 - r_sr2),
            t_loss2=t_loss2, **kwargs)

    @classmethod
    def experimental(cls, **overrides):
        """Parameters of the experimental setup (membrane r^2 = 0.17, eps_BS = 0.06, ...)."""
        kwargs = dict(r_m2=0.17, bs_asymmetry=0.06, r_sr2=0.9997, t_loss2=5e-3,
                      wavelength=1064e-9, arm_length=0.030, diag_length=0.020,
                      sr_length=0.037)
        kwargs.update(overrides)
        return cls.from_powers(**kwargs)

    @property
    def k0(self):
        return TWO_PI / self.wavelength

    @property
    def omega0(self):
        return TWO_PI * c / self.wavelength

    @property
    def eps_bs(self):
        return self.r_bs ** 2 - self.t_bs ** 2

    @property
    def cavity_length(self):
        """Mean SR-to-membrane path length L + l + l_SR."""
        return self.arm_length + self.diag_length + self.sr_length

    @property
    def fsr(self):
        """Free spectral range c / (2 * cavity_length) in Hz."""
        return c / (2.0 * self.cavity_length)

    @property
    def srm_transmittance(self):
        """Effective SRM power transmittance t_SR^2 + t_loss^2."""
        return effective_srm_transmittance(self)

    @property
    def r_sr_eff(self):
        """Round-trip SRM amplitude reflectivity including the lumped loss."""
        return math.sqrt(1.0 - self.srm_transmittance)

    @property
    def reference_phase(self):
        """arg(rho) at the dark fringe of the balanced interferometer on ``branch``."""
        sign = -1.0 if self.branch == "lower" else 1.0
        return math.atan2(self.t_m, sign * self.r_m)

    @property
    def resonance_index(self):
        """Integer N of the cavity resonance closest to the carrier."""
        return round((2.0 * self.k0 * self.cavity_length - self.reference_phase) / TWO_PI)


def effective_srm_transmittance(params: OpticalParams) -> float:
    """t_SR^2 + t_loss^2, the transmittance entering the cavity linewidth."""
    total = params.t_sr ** 2 + params.t_loss2
    if total > 1.0:
        raise InvalidParameterError(f"t_sr**2 + t_loss2 = {total!r} exceeds 1")
    return total


def canonical_position(params: OpticalParams, x):
    """Reduce a membrane position to its representative in [0, lambda/2)."""
    half = 0.5 * params.wavelength
    return np.mod(x, half) if np.ndim(x) else float(x % half)


class Phases(NamedTuple):
    """One-way propagation phases (rad) at one wavenumber.

    ``arm`` = k L, ``diag`` = k l and ``sr`` = k l_SR are reduced modulo 2*pi;
    ``offset`` = k x is small because x is canonical, so k * delta_l = 2 * offset.
    ``x`` is the canonical membrane position the phases were built for.
    """

    arm: float
    diag: float
    offset: float
    sr: float
    x: float

    @property
    def round_trip(self):
        """2 k (L + l + l_SR)."""
        return 2.0 * (self.arm + self.diag + self.sr)

    def shifted(self, params: OpticalParams, omega: float) -> "Phases":
        """Phases of a field offset by ``omega`` (rad/s) from this one."""
        dk = omega / c
        return Phases(self.arm + dk * params.arm_length,
                      self.diag + dk * params.diag_length,
                      self.offset + dk * self.x,
                      self.sr + dk * params.sr_length,
                      self.x)


def propagation_phases(params: OpticalParams, k: float, x: float,
                       sr_phase: float | None = None) -> Phases:
    """Elementary phases at wavenumber ``k`` for membrane position ``x``.

    ``sr_phase`` overrides k * l_SR; the cavity module uses it to place the SRM
    at a prescribed detuning.
    """
    x = canonical_position(params, x)
    sr = (k * params.sr_length) % TWO_PI if sr_phase is None else sr_phase % TWO_PI
    return Phases((k * params.arm_length) % TWO_PI, (k * params.diag_length) % TWO_PI,
                  k * x, sr, x)


def _e(phase):
    return np.exp(1j * phase)


def matrices_from_phases(params: OpticalParams, ph: Phases) -> dict:
    """All elementary matrices of the recycled interferometer at the phases ``ph``.

    Keys: ``M_BS``, ``M_m``, ``P_L``, ``P_l``, ``P_R``, ``T_R``, ``R_R``.
    ``R_R`` carries the loss-inclusive SRM reflectivity.
    """
    return {
        "M_BS": np.array([[params.t_bs, -params.r_bs], [params.r_bs, params.t_bs]], dtype=complex),
        "M_m": np.array([[params.r_m, 1j * params.t_m], [1j * params.t_m, params.r_m]]),
        "P_L": _e(ph.arm) * IDENTITY,
        "P_l": np.diag([_e(ph.diag - ph.offset), _e(ph.diag + ph.offset)]),
        "P_R": np.diag([1.0, _e(ph.sr)]),
        "T_R": np.diag([1.0, params.t_sr]).astype(complex),
        "R_R": np.diag([0.0, params.r_sr_eff]).astype(complex),
    }


def elementary_matrices(params: OpticalParams, k: float, x: float):
    """Beamsplitter, membrane, arm and half-arm matrices at wavenumber ``k``.

    Returns
    -------
    M_BS, M_m, P_L, P_l : ndarray, shape (2, 2)
        ``P_l = diag(exp(i k l1), exp(i k l2))`` with ``l1 = l - x``, ``l2 = l + x``.
    """
    if not k > 0:
        raise InvalidParameterError(f"wavenumber must be > 0, got {k!r}")
    m = matrices_from_phases(params, propagation_phases(params, k, x))
    return m["M_BS"], m["M_m"], m["P_L"], m["P_l"]


def _rho_tau_from_offset(params, offset):
    # offset = k x, so k * delta_l = 2 * offset
    e = np.exp(2j * offset)
    rho = (params.r_m * (params.r_bs ** 2 * e + params.t_bs ** 2 / e)
           + 2j * params.t_m * params.r_bs * params.t_bs)
    tau = (2.0 * params.r_m * params.r_bs * params.t_bs * np.sin(2.0 * offset)
           + params.t_m * (params.t_bs ** 2 - params.r_bs ** 2))
    return rho, tau


def msi_coefficients(params: OpticalParams, x, k=None):
    """Amplitude reflectivity ``rho`` and transmissivity ``tau`` of the bare MSI.

    ``x`` may be an array; ``k`` defaults to the carrier wavenumber.  For real
    ``k`` the transmissivity is real and ``|rho|**2 + tau**2 == 1``.
    """
    k = params.k0 if k is None else k
    return _rho_tau_from_offset(params, k * canonical_position(params, x))


def msi_transfer_matrix(params: OpticalParams, x: float, k: float | None = None) -> np.ndarray:
    """Closed-form transfer matrix ``exp(2ik(L+l)) [[rho, i tau], [i tau, conj(rho)]]``."""
    k = params.k0 if k is None else k
    ph = propagation_phases(params, k, x)
    return _msi_matrix(params, ph)


def _msi_matrix(params, ph):
    rho, tau = _rho_tau_from_offset(params, ph.offset)
    return _e(2.0 * (ph.arm + ph.diag)) * np.array(
        [[rho, 1j * tau], [1j * tau, np.conj(rho)]])


def msi_transfer_matrix_product(params: OpticalParams, x: float,
                                k: float | None = None) -> np.ndarray:
    """``M_BS^T P_L P_l M_m P_l P_L M_BS`` evaluated as an explicit product."""
    k = params.k0 if k is None else k
    m = matrices_from_phases(params, propagation_phases(params, k, x))
    return m["M_BS"].T @ m["P_L"] @ m["P_l"] @ m["M_m"] @ m["P_l"] @ m["P_L"] @ m["M_BS"]


def _branch_of(theta):
    return "upper" if math.cos(theta) >= 0 else "lower"


def dark_port_offsets(params: OpticalParams) -> list:
    """Membrane positions in [0, lambda/2) where the MSI transmissivity vanishes.

    Solves ``sin(2 k0 x) = (t_m / r_m) eps_BS / (2 r_BS t_BS)`` for both
    fringes and polishes each root with one Newton step on ``tau``.  An empty
    list (with a :class:`NoDarkPortWarning`) means the condition has no solution.
    """
    k0 = params.k0
    denom = params.r_m * 2.0 * params.r_bs * params.t_bs
    numer = params.t_m * params.eps_bs
    if denom == 0.0 or abs(numer) > abs(denom):
        warnings.warn(
            f"no dark port: |t_m eps_BS / (2 r_m r_BS t_BS)| = "
            f"{abs(numer) / denom if denom else math.inf:.6g} > 1", NoDarkPortWarning,
            stacklevel=2)
        return []
    base = math.asin(numer / denom)
    thetas = sorted({base % TWO_PI, (math.pi - base) % TWO_PI})
    out = []
    for theta in thetas:
        x = theta / (2.0 * k0)
        _, tau = msi_coefficients(params, x)
        slope = 2.0 * k0 * denom * math.cos(2.0 * k0 * x)
        if slope != 0.0:
            x -= tau / slope
        out.append(float(canonical_position(params, x)))
    return sorted(out)


def dark_port(params: OpticalParams, branch: str | None = None) -> float:
    """Dark-port position on ``branch`` (defaults to ``params.branch``)."""
    branch = params.branch if branch is None else branch
    for x in dark_port_offsets(params):
        if _branch_of(2.0 * params.k0 * x) == branch:
            return x
    raise InvalidParameterError(f"no dark port on the {branch!r} fringe")
