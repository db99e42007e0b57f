"""Data models: the instance file schema and report records."""

from .instance import (
    AbelianGroupSpec,
    BoundaryTermSpec,
    CellSpec,
    CochainSpec,
    CoefficientSection,
    ComplexSection,
    EquivalenceSpec,
    FamilySection,
    FibersSection,
    GroupSection,
    InstanceFile,
    MorphismSpec,
)
from .report import Report, ReportEntry, ValidationReport, Violation

__all__ = [
    # Instance file
    "InstanceFile",
    "GroupSection",
    "FamilySection",
    "ComplexSection",
    "CellSpec",
    "BoundaryTermSpec",
    "CoefficientSection",
    "AbelianGroupSpec",
    "MorphismSpec",
    "CochainSpec",
    "FibersSection",
    "EquivalenceSpec",
    # Reports
    "Violation",
    "ValidationReport",
    "ReportEntry",
    "Report",
]
