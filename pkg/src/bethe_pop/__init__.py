"""Exact XXX Bethe equations for Kac-Moody algebras: verification, reproduction, populations."""

from .bethe_core import (
    BetheProblem,
    FertilityLine,
    NotFertile,
    PolyTuple,
    Verdict,
    bethe_report,
    divisibility_check,
    expected_descendant_degree,
    fertility_solve,
    is_bethe,
    is_generic,
    master_polynomial,
    obstruction_cone,
    obstruction_fixed_point,
    weight_at_infinity,
    wronskian_rhs,
)
from .exact_arith import Poly
from .kac_moody import CartanData, build_cartan, reflect, shifted_orbit, shifted_reflect
from .population import ExplorationLimits, explore, immediate_descendants, weights_realized

__version__ = "0.1.0"
