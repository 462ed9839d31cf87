"""Build and certify locally CAT(-1) piecewise hyperbolic 2-complexes."""

from negcurv.comparison import comparison_complex, excess_angle, geodesic_excess
from negcurv.complex import (
    Complex,
    ComplexBuilder,
    build_link,
    check_link_condition,
    euler_characteristic,
    scale_metric,
    systole,
    validate,
)
from negcurv.geodesics import ClosedLoop, CyclicWord, is_closed_geodesic
from negcurv.gluing import GraphOfSpaces, glue, normalize
from negcurv.hypgeom import annulus_params, critical_summit_angle, lambert_quadrilateral, lambert_summit_angle
from negcurv.recipes import double, graph_of_roses, rose
from negcurv.transverse import FullOverlap, TransversalityProblem, intersection_count, transversalize

__version__ = "0.1.0"

__all__ = [
    "ClosedLoop",
    "Complex",
    "ComplexBuilder",
    "CyclicWord",
    "FullOverlap",
    "GraphOfSpaces",
    "TransversalityProblem",
    "annulus_params",
    "build_link",
    "check_link_condition",
    "comparison_complex",
    "critical_summit_angle",
    "double",
    "euler_characteristic",
    "excess_angle",
    "geodesic_excess",
    "glue",
    "graph_of_roses",
    "intersection_count",
    "is_closed_geodesic",
    "lambert_quadrilateral",
    "lambert_summit_angle",
    "normalize",
    "rose",
    "scale_metric",
    "systole",
    "transversalize",
    "validate",
]
