"""Thickness, ropelength and quadrisecant bounds for polygonal knots."""
from __future__ import annotations

__version__ = "0.1.0"

from .geometry import ArcPosition, GeometryError, PolyKnot, Segment, similarity_transform
from .thickness import ThicknessReport, normalize_to_unit_thickness, thickness_and_ropelength
from .bounds import (BoundCertificate, DomainError, LinkPattern, NoBoundKnown, OrderType,
                     essential_bound, f, g, link_component_bound, m, minimize_bound_terms,
                     nonsplit_link_bound, quadbd_bound, verify_arc_inequalities)
from .quadrisecant import (Degenerate, Quadrisecant, TransversalLine, TrisecantClass,
                           classify_order, classify_trisecant, find_quadrisecants, midsegment,
                           transversals_of_four_segments)
from .fixtures import FIXTURE_NAMES, load_fixture

__all__ = [
    "ArcPosition", "BoundCertificate", "Degenerate", "DomainError", "FIXTURE_NAMES",
    "GeometryError", "LinkPattern", "NoBoundKnown", "OrderType", "PolyKnot", "Quadrisecant",
    "Segment", "ThicknessReport", "TransversalLine", "TrisecantClass", "classify_order",
    "classify_trisecant", "essential_bound", "f", "find_quadrisecants", "g",
    "link_component_bound", "load_fixture", "m", "midsegment", "minimize_bound_terms",
    "nonsplit_link_bound", "normalize_to_unit_thickness", "quadbd_bound", "similarity_transform",
    "thickness_and_ropelength", "transversals_of_four_segments", "verify_arc_inequalities",
]
