"""Exact computer algebra for polynomial Poisson brackets.

Quadratic-tower coefficient fields, sparse polynomials, bracket tables,
Poisson derivations, Ore extensions, normal-form classification of
quadratic brackets in two and three variables, and divisor/stratiform
invariants.
"""

from __future__ import annotations

from .catalog import bianchi, heisenberg, kostant_kirillov, skew_symmetric, sl2, weyl
from .classify import (
    NormalFormLabel,
    classify_2var,
    classify_3var_graded,
    fingerprint,
    isomorphic_quadratic,
    normalize_f2,
)
from .errors import PoissonForgeError
from .exactfield import FieldElem, QuadTower, elem, sqrt_or_adjoin
from .multipoly import Poly, Substitution
from .parsing import parse_poly
from .pbracket import PoissonStructure, bracket, center_up_to_degree, commutator_ideal, verify_jacobi
from .pderiv import PolyDerivation, solve_poisson_derivations
from .pore import OreStep, OreTower, extend, recognize

__version__ = "0.1.0"
