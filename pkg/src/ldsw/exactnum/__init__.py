"""Exact arithmetic: rationals, integer polynomials, algebraic numbers."""
from .algnum import AlgNum, field_element, identify, poly_roots, rootset
from .algpoly import AlgPolyExpr
from .interval import Disc
from .rational import format_rational, parse_rational

__all__ = ["AlgNum", "AlgPolyExpr", "Disc", "field_element", "format_rational", "identify",
           "parse_rational", "poly_roots", "rootset"]
