from .point_set import Box, LatticePoint, PointSet, Rational
from .progression import Correspondence, Progression
from .report import (
    FAIL,
    PASS,
    Cover,
    ParallelepipedWitness,
    SweepSummary,
    VerificationReport,
    parse_exact,
    progression_from_dict,
    progression_to_dict,
    render_exact,
)

__all__ = [
    "Box",
    "Correspondence",
    "Cover",
    "FAIL",
    "LatticePoint",
    "PASS",
    "ParallelepipedWitness",
    "PointSet",
    "Progression",
    "Rational",
    "SweepSummary",
    "VerificationReport",
    "parse_exact",
    "progression_from_dict",
    "progression_to_dict",
    "render_exact",
]
