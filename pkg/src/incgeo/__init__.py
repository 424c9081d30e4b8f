"""Exact rational toolkit for line geometry on low-degree algebraic surfaces.

The package is organized bottom-up:

- poly: sparse multivariate polynomials over Q (arithmetic, Taylor
  components, directional derivatives, resultants, gcd, square-free parts)
- linespace: projective points, Plucker line coordinates, affine lines,
  hyperplanes, and their exact incidence predicates
- surfaces: singularities, flat and singular lines, flecnode witnesses,
  ruledness indicators, per-component classification, generator counting
- incidence: point-line incidence statistics, the ruled/unruled line
  decomposition, pruning, and the bound evaluators
- projection: seeded generic projection of high-dimensional instances down
  to 3-space with exact genericity certificates
- forge: canonical surface instances (cone, regulus, ruled cubic, sphere,
  Fermat cubic and products) with seeded line and point placement
- cli: file formats and the command-line front end
"""

from .forge import IncidenceInstance, build_instance, make_lines, make_surface
from .incidence import count_incidences, decompose_lines, verify_bound
from .instfile import load_instance, save_instance
from .linespace import AffLine
from .poly import Poly, variables
from .projection import project_to_3space
from .surfaces import Surface, classify_component, flecnode_polynomial

__all__ = [
    "AffLine",
    "IncidenceInstance",
    "Poly",
    "Surface",
    "build_instance",
    "classify_component",
    "count_incidences",
    "decompose_lines",
    "flecnode_polynomial",
    "load_instance",
    "make_lines",
    "make_surface",
    "project_to_3space",
    "save_instance",
    "variables",
    "verify_bound",
]
