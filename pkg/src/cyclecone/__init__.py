"""Exact intersection theory on blowups of (P^1)^n at points.

Chow ring arithmetic, the spaces N_k with their pairing, the cone of fibers
and its dual, toric fans of the blowups at torus-fixed points, monomial
linear systems and the numerical identities behind fiber generation.
"""

from .chow_ring import ChowElement, RingContext, degree, make_generator, multiply
from .cycle_spaces import (
    CycleClass, FiberCone, basis, cf_membership, decompose, dual_rays, fg_criterion,
    from_chow, pair, pairing_matrix, to_chow,
)
from .expr import parse, to_class, to_ring
from .polyhedral import RationalCone, contains, dualize, extremal_rays
from .theorems import (
    factorial_boundary, is_mori_dream, lemma_con_identity, phi_map, prop44_identity,
    prop_not_construction, status,
)

__version__ = "0.1.0"

__all__ = [
    "ChowElement", "CycleClass", "FiberCone", "RationalCone", "RingContext", "basis",
    "cf_membership", "contains", "decompose", "degree", "dual_rays", "dualize",
    "extremal_rays", "factorial_boundary", "fg_criterion", "from_chow", "is_mori_dream",
    "lemma_con_identity", "make_generator", "multiply", "pair", "pairing_matrix", "parse",
    "phi_map", "prop44_identity", "prop_not_construction", "status", "to_chow",
    "to_class", "to_ring",
]
