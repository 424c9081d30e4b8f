"""Reading and writing instances as JSON.

The layout keeps every number exact: rationals are "n" or "n/d" strings,
polynomial coefficients are split into integer numerator and denominator,
and term lists are sorted, so serialization is deterministic and a file
round-trips byte for byte.

    {
      "dim": 3,
      "surface": {"vars": 3, "factors": [{"terms": [{"n": 1, "d": 1, "e": [2, 0, 0]}]}]},
      "points": [["1/2", "3", "-2/5"]],
      "lines": [{"base": ["0", "0", "0"], "dir": ["1", "0", "1"]}]
    }

A lifted instance has no surface; the field is null and "dim" may exceed 3.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import ParseError
from .forge import IncidenceInstance
from .linalg import Vec
from .linespace import AffLine
from .poly import Poly, grlex_key
from .surfaces import Surface


def format_rational(q: Fraction) -> str:
    return str(q)


def parse_rational(text: object) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def _vector_to_obj(v: Vec) -> list[str]:
    return [format_rational(c) for c in v]


def _obj_to_vector(obj: object, dim: int) -> Vec:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ParseError(f"expected {dim} coordinates, got {obj!r}")
    return tuple(parse_rational(c) for c in obj)


def poly_to_obj(p: Poly) -> dict:
    terms = sorted(p.terms.items(), key=lambda item: grlex_key(item[0]), reverse=True)
    return {
        "terms": [
            {"n": c.numerator, "d": c.denominator, "e": list(e)} for e, c in terms
        ]
    }


def obj_to_poly(obj: object, nvars: int) -> Poly:
    if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
        raise ParseError(f"expected a polynomial object, got {obj!r}")
    terms: dict[tuple[int, ...], Fraction] = {}
    for item in obj["terms"]:
        if not isinstance(item, dict):
            raise ParseError(f"bad polynomial term {item!r}")
        n, d, e = item.get("n"), item.get("d"), item.get("e")
        if not isinstance(n, int) or not isinstance(d, int) or d <= 0:
            raise ParseError(f"bad coefficient in term {item!r}")
        if not isinstance(e, list) or len(e) != nvars or not all(isinstance(k, int) for k in e):
            raise ParseError(f"bad exponent in term {item!r}")
        key = tuple(e)
        if key in terms:
            raise ParseError(f"repeated exponent {key} in polynomial")
        terms[key] = Fraction(n, d)
    return Poly(nvars, terms)


def surface_to_obj(surface: Surface) -> dict:
    return {"vars": 3, "factors": [poly_to_obj(w) for w in surface.factors]}


def obj_to_surface(obj: object) -> Surface:
    if not isinstance(obj, dict) or obj.get("vars") != 3:
        raise ParseError(f"expected a trivariate surface object, got {obj!r}")
    factors = obj.get("factors")
    if not isinstance(factors, list) or not factors:
        raise ParseError("surface needs a nonempty factor list")
    return Surface([obj_to_poly(w, 3) for w in factors])


def instance_to_obj(inst: IncidenceInstance) -> dict:
    return {
        "dim": inst.dim,
        "surface": None if inst.surface is None else surface_to_obj(inst.surface),
        "points": [_vector_to_obj(p) for p in inst.points],
        "lines": [
            {"base": _vector_to_obj(ln.base), "dir": _vector_to_obj(ln.direction)}
            for ln in inst.lines
        ],
    }


def obj_to_instance(obj: object) -> IncidenceInstance:
    if not isinstance(obj, dict):
        raise ParseError("instance file must hold a JSON object")
    dim = obj.get("dim")
    if not isinstance(dim, int) or dim < 3:
        raise ParseError(f"bad dimension {dim!r}")
    surface_obj = obj.get("surface")
    surface = None if surface_obj is None else obj_to_surface(surface_obj)
    if surface is not None and dim != 3:
        raise ParseError("a surface-carrying instance must have dim 3")
    points_obj = obj.get("points")
    lines_obj = obj.get("lines")
    if not isinstance(points_obj, list) or not isinstance(lines_obj, list):
        raise ParseError("instance needs point and line lists")
    points = [_obj_to_vector(p, dim) for p in points_obj]
    lines = []
    for item in lines_obj:
        if not isinstance(item, dict):
            raise ParseError(f"bad line entry {item!r}")
        base = _obj_to_vector(item.get("base"), dim)
        direction = _obj_to_vector(item.get("dir"), dim)
        lines.append(AffLine(base, direction))
    return IncidenceInstance(surface, points, lines)


def dumps_instance(inst: IncidenceInstance) -> str:
    return json.dumps(instance_to_obj(inst), indent=2, sort_keys=True) + "\n"


def save_instance(inst: IncidenceInstance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst), encoding="utf-8")


def load_instance(path: str | Path) -> IncidenceInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read instance file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"instance file {path} is not valid JSON: {exc}") from exc
    return obj_to_instance(obj)
