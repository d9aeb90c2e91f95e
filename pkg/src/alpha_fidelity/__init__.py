"""Alpha-fidelities of qubit states and channels, and protocols built on them."""

__version__ = "0.3.0"

from .channels import DynamicalMap, QubitChannel, channel_alpha_fidelity
from .config import TOLERANCES, Settings
from .errors import AlphaFidelityError
from .fidelity import Alpha, alpha_fidelity_general, alpha_fidelity_qubit
from .qmath import BlochVector, DensityMatrix
from .cli import main

__all__ = [
    "Alpha",
    "AlphaFidelityError",
    "BlochVector",
    "DensityMatrix",
    "DynamicalMap",
    "QubitChannel",
    "Settings",
    "TOLERANCES",
    "alpha_fidelity_general",
    "alpha_fidelity_qubit",
    "channel_alpha_fidelity",
    "main",
    "__version__",
]
