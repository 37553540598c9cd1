"""Invariant rings of reflection groups on powers of elliptic curves over
finite fields."""
from .arith import (AutoKind, Curve, CurvePoint, FieldCtx, FieldElement,
                    IDENTITY, curve_new, field_sqrt, group_order, make_field,
                    point_add, random_point, scalar_mul, torsion_points)
from .errors import EllinvError

__version__ = "0.1.0"
