"""Homological and homotopical mixed Hodge polynomials of simply connected spaces.

Exact polynomial arithmetic, product/power laws over a catalog of atoms,
minimal Sullivan models for homotopy ranks, and re-checkable threshold
certificates comparing the two polynomials on powers of a space.
"""

from .catalog import (
    Catalog,
    CatalogError,
    Space,
    SpaceAtom,
    euler,
    euler_pi,
    load_catalog,
    mh,
    mh_pi,
    parse_space_expr,
    poincare,
    poincare_pi,
    point,
    power,
    product,
    projective_space,
    sphere,
)
from .minmodel import CohomologyPresentation, build_minimal_model, homotopy_ranks
from .parsing import ParseError
from .poly import Box, MHPolynomial, RationalInterval, RationalPoint, UniPoly
from .recheck import recheck
from .verify import (
    conjecture_probe,
    cube_threshold,
    euler_compare,
    halfline_threshold,
    hilali,
    margin,
    point_threshold,
    verify_cube_at_n,
)

__version__ = "0.1.0"
