"""finemix: fine mixed subdivisions of a dilated simplex, exactly.

Systems of permutations on the edges of n Delta_{d-1}, acyclicity and
duality, deletion and contraction, simplex positions and spread-out
checks, a complete lozenge-tiling engine for d = 3, and exhaustive
enumeration harnesses that machine-check the structure theorems at desk
scale.
"""

from . import errors, lozenge, perms, render, subdivision, systems, verify
from .errors import DomainError
from .lozenge import LozengeTiling, Routing
from .subdivision import FineMixedSubdivision
from .systems import SystemOfPermutations

__version__ = "1.0.0"

__all__ = [
    "DomainError",
    "FineMixedSubdivision",
    "LozengeTiling",
    "Routing",
    "SystemOfPermutations",
    "errors",
    "lozenge",
    "perms",
    "render",
    "subdivision",
    "systems",
    "verify",
]
