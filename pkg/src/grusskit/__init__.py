"""Numerical verification of the Gruss inequality for unital 2-positive maps on matrix algebras."""
from grusskit.errors import (
    ContractViolation,
    DimensionError,
    DomainError,
    GrussKitError,
    PreconditionError,
)
from grusskit.gruss import Disk, GrussReport, chebyshev_radius, defect, gruss_check
from grusskit.matcore import Tolerance
from grusskit.posmaps import MapRep, apply

__version__ = "0.1.0"
