"""Run configuration: flat ``key = value`` text with dotted sections.

Sections are ``optics.*``, ``mech.*``, ``point.*``, ``sweep.*`` and ``output.*``.
Lines starting with ``#`` and blank lines are ignored.  Unknown keys are
rejected.  Defaults reproduce the experimental parameter table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .backaction import MechanicalParams
from .optics import BRANCHES, InvalidParameterError, OpticalParams

SWEEP_KINDS = ("detuning", "power", "membrane", "srm-scan", "couplings", "spectrum")
FORMATS = ("csv", "json")
POSITION_LABELS = ("dark", "1", "2", "3", "4", "5")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending keys."""


def _float(text):
    return float(text)


def _opt_float(text):
    if text.strip().lower() in ("", "none"):
        return None
    return float(text)


def _int(text):
    return int(text)


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _choice(*options):
    def parse(text):
        text = text.strip()
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}; got {text!r}")
        return text
    return parse


def _position(text):
    text = text.strip()
    if text in POSITION_LABELS:
        return text
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise ValueError(f"peak fraction must lie in (0, 1], got {value!r}")
    return value


def _str(text):
    return text.strip()


# key -> (default, parser).  ``None`` sweep entries are filled per sweep kind.
SCHEMA = {
    "optics.r_m2": (0.17, _float),
    "optics.bs_asymmetry": (0.06, _float),
    "optics.r_sr2": (0.9997, _float),
    "optics.t_loss2": (5e-3, _float),
    "optics.wavelength": (1064e-9, _float),
    "optics.arm_length": (0.030, _float),
    "optics.diag_length": (0.020, _float),
    "optics.sr_length": (0.037, _float),
    "optics.branch": ("lower", _choice(*BRANCHES)),
    "mech.f_m": (136e3, _float),
    "mech.q_m": (5.8e5, _float),
    "mech.mass": (80e-12, _float),
    "mech.t_bath": (293.0, _float),
    "point.position": ("3", _position),
    "point.x0": (None, _opt_float),
    "point.detuning": (0.0, _float),
    "point.srm_displacement": (0.0, _float),
    "point.power": (20e-3, _float),
    "sweep.kind": ("detuning", _choice(*SWEEP_KINDS)),
    "sweep.start": (None, _opt_float),
    "sweep.stop": (None, _opt_float),
    "sweep.count": (None, _int),
    "sweep.scale": (None, _choice("linear", "log")),
    "sweep.endpoint": (None, _bool),
    "output.format": ("csv", _choice(*FORMATS)),
    "output.path": ("-", _str),
}

# per-kind grid defaults: (start, stop, count, scale, endpoint); None stop = lambda/2
KIND_GRIDS = {
    "detuning": (-1.0, 1.0, 201, "linear", True),            # Delta / gamma
    "power": (0.3e-3, 0.2, 41, "log", True),                 # W
    "membrane": (0.0, None, 2001, "linear", False),          # m
    "srm-scan": (-3e-9, 3e-9, 1201, "linear", True),         # m, SRM displacement
    "couplings": (0.0, None, 1000, "linear", False),         # m
    "spectrum": (134e3, 138e3, 4001, "linear", True),        # Hz
}

GRID_UNITS = {
    "detuning": "detuning_over_gamma",
    "power": "power_W",
    "membrane": "x0_m",
    "srm-scan": "srm_displacement_m",
    "couplings": "x0_m",
    "spectrum": "frequency_Hz",
}


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    count: int
    scale: str = "linear"
    endpoint: bool = True

    def values(self):
        import numpy as np

        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count, endpoint=self.endpoint)
        return np.linspace(self.start, self.stop, self.count, endpoint=self.endpoint)


@dataclass(frozen=True)
class RunConfig:
    optics: OpticalParams
    mech: MechanicalParams
    kind: str
    grid: GridSpec
    position: object
    x0: float | None
    detuning: float
    srm_displacement: float
    power: float
    format: str
    path: str
    values: dict

    def resolved(self):
        """The full key -> value mapping, suitable for output metadata."""
        return dict(sorted(self.values.items()))


def parse_text(text: str, source: str = "<text>") -> dict:
    """Parse ``key = value`` lines into raw strings, reporting line numbers on error."""
    raw = {}
    errors = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            errors.append(f"{source}:{lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, value = (part.strip() for part in stripped.split("=", 1))
        if "#" in value:
            value = value.split("#", 1)[0].strip()
        raw[key] = value
    if errors:
        raise ConfigError("\n".join(errors))
    return raw


def parse_overrides(items) -> dict:
    raw = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        raw[key.strip()] = value.strip()
    return raw


def load_config(path=None, overrides=(), kind: str | None = None) -> RunConfig:
    """Resolve defaults, an optional config file and ``key=value`` overrides.

    ``overrides`` may be a mapping or an iterable of ``"key=value"`` strings.
    ``kind`` (a sweep kind) takes precedence over ``sweep.kind``.
    """
    raw = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {p}") from None
        except OSError as exc:
            raise ConfigError(f"cannot read config file {p}: {exc}") from None
        raw.update(parse_text(text, str(p)))
    raw.update(overrides if isinstance(overrides, dict) else parse_overrides(overrides))

    unknown = sorted(set(raw) - set(SCHEMA))
    errors = [f"{key}: unknown key" for key in unknown]
    values = {key: default for key, (default, _) in SCHEMA.items()}
    for key, text in raw.items():
        if key in unknown:
            continue
        default, parse = SCHEMA[key]
        if default is None and str(text).strip().lower() in ("", "none"):
            values[key] = None
            continue
        try:
            values[key] = parse(str(text))
        except ValueError as exc:
            errors.append(f"{key}: {exc}")
    if errors:
        raise ConfigError("; ".join(errors))
    if kind is not None:
        if kind not in SWEEP_KINDS:
            raise ConfigError(f"sweep.kind: unknown sweep kind {kind!r}")
        values["sweep.kind"] = kind
    return _build(values)


def _build(values: dict) -> RunConfig:
    errors = []
    try:
        optics = OpticalParams.from_powers(
            r_m2=values["optics.r_m2"], bs_asymmetry=values["optics.bs_asymmetry"],
            r_sr2=values["optics.r_sr2"], t_loss2=values["optics.t_loss2"],
            wavelength=values["optics.wavelength"], arm_length=values["optics.arm_length"],
            diag_length=values["optics.diag_length"], sr_length=values["optics.sr_length"],
            branch=values["optics.branch"])
    except InvalidParameterError as exc:
        errors.append(f"optics: {exc}")
        optics = None
    try:
        mech = MechanicalParams(omega_m=2 * math.pi * values["mech.f_m"], q_m=values["mech.q_m"],
                                mass=values["mech.mass"], t_bath=values["mech.t_bath"])
    except InvalidParameterError as exc:
        errors.append(f"mech: {exc}")
        mech = None
    if values["point.power"] < 0:
        errors.append(f"point.power: must be >= 0, got {values['point.power']!r}")

    kind = values["sweep.kind"]
    start, stop, count, scale, endpoint = KIND_GRIDS[kind]
    if stop is None:
        stop = 0.5 * values["optics.wavelength"]
    for key, default in (("start", start), ("stop", stop), ("count", count), ("scale", scale),
                         ("endpoint", endpoint)):
        if values[f"sweep.{key}"] is None:
            values[f"sweep.{key}"] = default
    grid = GridSpec(values["sweep.start"], values["sweep.stop"], values["sweep.count"],
                    values["sweep.scale"], values["sweep.endpoint"])
    if grid.count < 2:
        errors.append(f"sweep.count: must be >= 2, got {grid.count}")
    if grid.start == grid.stop:
        errors.append(f"sweep.start/sweep.stop: must differ, both {grid.start!r}")
    if grid.scale == "log" and not (grid.start > 0 and grid.stop > 0):
        errors.append("sweep.scale: log grid requires positive sweep.start and sweep.stop")
    if kind in ("power", "spectrum") and min(grid.start, grid.stop) <= 0:
        errors.append(f"sweep.start/sweep.stop: {kind} grid must be strictly positive")
    if errors:
        raise ConfigError("; ".join(errors))
    return RunConfig(
        optics=optics, mech=mech, kind=kind, grid=grid, position=values["point.position"],
        x0=values["point.x0"], detuning=values["point.detuning"],
        srm_displacement=values["point.srm_displacement"], power=values["point.power"],
        format=values["output.format"], path=values["output.path"], values=values)


def default_config_text() -> str:
    """A commented config file listing every key with its default."""
    lines = ["# msiopto run configuration (defaults)"]
    for key, (default, _) in SCHEMA.items():
        lines.append(f"{key} = {'' if default is None else default}")
    return "\n".join(lines) + "\n"
