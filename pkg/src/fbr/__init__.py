"""Exact computation in fibered Burnside rings of finite groups."""

from .abelian import FiniteAbelianGroup, parse_fiber_spec
from .cyclo import Cyclotomic, cyclotomic_polynomial, find_prime_ideal, prime_ideals
from .errors import (FbrError, InputError, InvariantViolationError,
                     NotIntegralAtPError, ResourceLimitError,
                     TheoremViolationError)
from .perm import FiniteGroup, SubgroupLattice, parse_group_spec
from .ring import FiberedBurnsideRing, RingElement, build_ring

__version__ = "0.1.0"

__all__ = [
    "FiniteAbelianGroup",
    "parse_fiber_spec",
    "Cyclotomic",
    "cyclotomic_polynomial",
    "find_prime_ideal",
    "prime_ideals",
    "FiniteGroup",
    "SubgroupLattice",
    "parse_group_spec",
    "FiberedBurnsideRing",
    "RingElement",
    "build_ring",
    "FbrError",
    "InputError",
    "ResourceLimitError",
    "TheoremViolationError",
    "InvariantViolationError",
    "NotIntegralAtPError",
]
