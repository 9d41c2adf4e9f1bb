"""Generalized optomechanical coupling in a signal-recycled Michelson-Sagnac interferometer."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .optics import OpticalParams, dark_port, msi_coefficients, msi_transfer_matrix  # noqa: E402
from .cavity import cavity_response, linewidths, transmitted_power  # noqa: E402
from .backaction import (  # noqa: E402
    MechanicalParams,
    backaction_coefficient,
    effective_quality_factor,
    effective_temperature,
    optical_spring_and_damping,
)
from .couplings import coupling_rates  # noqa: E402
from .config import load_config  # noqa: E402
from .sweeps import run  # noqa: E402

__all__ = [
    "OpticalParams", "MechanicalParams", "dark_port", "msi_coefficients", "msi_transfer_matrix",
    "cavity_response", "linewidths", "transmitted_power", "backaction_coefficient",
    "optical_spring_and_damping", "effective_quality_factor", "effective_temperature",
    "coupling_rates", "load_config", "run", "__version__",
]
