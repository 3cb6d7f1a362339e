"""Exact A-infinity products for configurations of lines in the plane.

Two independent constructions of the same structure: closed-form products
driven by clockwise convex polygons and step-function algebra, and a
homotopy-transfer derivation from a twisted de Rham DG category.  All
arithmetic is exact (rational coefficients and formal exponentials), so
every identity check is a strict equality.
"""

from .geometry import ConfigError, Line, LineConfig, Point, classify_sequence
from .products import (BasisMorphism, VElement, degree_precheck, delta,
                       mk_closed, theta, trans, unit)
from .scalars import ExpScalar, rat
from .stepforms import StepElement, sf_d, sf_h1_class, sf_in_constrained, sf_mul
from .transfer import enumerate_trees, transfer_functor, transfer_product

__all__ = [
    "BasisMorphism", "ConfigError", "ExpScalar", "Line", "LineConfig",
    "Point", "StepElement", "VElement", "classify_sequence", "degree_precheck",
    "delta", "enumerate_trees", "mk_closed", "rat", "sf_d", "sf_h1_class",
    "sf_in_constrained", "sf_mul", "theta", "trans", "transfer_functor",
    "transfer_product", "unit",
]
