"""Exact sumset toolkit for finite sets of integer lattice points."""

__version__ = "0.1.0"

from .config import DEFAULT_CONFIG, ToolkitConfig, load_config
from .exceptions import BudgetExceededError, InputError, LatticeError, TheoremViolation
from .models import Box, Correspondence, Cover, PointSet, Progression, SweepSummary, VerificationReport
from .toolkit import LatticeToolkit

__all__ = [
    "Box",
    "BudgetExceededError",
    "Correspondence",
    "Cover",
    "DEFAULT_CONFIG",
    "InputError",
    "LatticeError",
    "LatticeToolkit",
    "PointSet",
    "Progression",
    "SweepSummary",
    "TheoremViolation",
    "ToolkitConfig",
    "VerificationReport",
    "load_config",
]
