"""Point-line incidence counting over a known surface decomposition.

The workflow: count incidences exactly, measure the coplanarity parameter s,
split the line family by surface factor into the structured part L0 (lines
on non-ruled factors, on several factors at once, or exceptional on a singly
ruled factor) and the generic part L1, then check the structural caps and
evaluate the closed-form bounds.  Bound evaluation is the only place floats
appear; everything combinatorial is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    DomainError,
    InvariantViolation,
    NotOnSurfaceError,
    PlanarComponentError,
)
from .linalg import Vec, in_span, rref, to_vec, vec_sub
from .linespace import AffLine, RelationKind, incidence_point_line, line_on_surface, line_relation
from .surfaces import (
    ClassificationResult,
    Surface,
    Verdict,
    classify_component,
    exceptional_lines,
)

RULED_VERDICTS = frozenset({Verdict.REGULUS, Verdict.CONE, Verdict.SINGLY_RULED})


# -- raw counting -----------------------------------------------------------


def count_incidences(points: Sequence, lines: Sequence[AffLine]) -> int:
    """Number of pairs (p, ln) with p on ln, by exhaustive exact check."""
    pts = [to_vec(p) for p in points]
    return sum(1 for p in pts for ln in lines if incidence_point_line(p, ln))


def incidence_counts_by_point(points: Sequence, lines: Sequence[AffLine]) -> list[int]:
    pts = [to_vec(p) for p in points]
    return [sum(1 for ln in lines if incidence_point_line(p, ln)) for p in pts]


def incidence_counts_by_line(points: Sequence, lines: Sequence[AffLine]) -> list[int]:
    pts = [to_vec(p) for p in points]
    return [sum(1 for p in pts if incidence_point_line(p, ln)) for ln in lines]


# -- coplanarity parameter ---------------------------------------------------


@dataclass(frozen=True)
class TwoFlat:
    """A 2-dimensional affine subspace in canonical form.

    The span is the reduced row echelon basis of the direction plane and the
    base point is reduced to zero in the pivot coordinates, so equal flats
    compare equal as values.
    """

    base: Vec
    span: tuple[Vec, Vec]

    def __init__(self, base: Sequence, u: Sequence, w: Sequence):
        b = to_vec(base)
        rows = rref([to_vec(u), to_vec(w)])
        if len(rows) != 2:
            raise DomainError("spanning directions of a 2-flat must be independent")
        if not (len(b) == len(rows[0])):
            raise DomainError("base point and directions disagree on dimension")
        for row in rows:
            pivot = next(i for i, c in enumerate(row) if c)
            b = tuple(bc - b[pivot] * rc for bc, rc in zip(b, row))
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "span", (rows[0], rows[1]))

    @property
    def dim(self) -> int:
        return len(self.base)

    def contains_point(self, p: Sequence) -> bool:
        return in_span(vec_sub(to_vec(p), self.base), self.span)

    def contains_line(self, ln: AffLine) -> bool:
        return self.contains_point(ln.base) and in_span(ln.direction, self.span)


def spanning_flat(a: AffLine, b: AffLine) -> TwoFlat | None:
    """The unique 2-flat containing two coplanar distinct lines, else None."""
    rel = line_relation(a, b)
    if rel.kind is RelationKind.INTERSECTING:
        return TwoFlat(a.base, a.direction, b.direction)
    if rel.kind is RelationKind.PARALLEL:
        return TwoFlat(a.base, a.direction, vec_sub(b.base, a.base))
    return None


def max_lines_per_flat(lines: Sequence[AffLine]) -> int:
    """Largest number of family lines lying in a common plane.

    Zero for an empty family; one when no two lines are coplanar.  Any two
    lines inside a common plane either meet or are parallel, so grouping the
    partners of each line by the plane they span with it sees every
    populated plane.
    """
    if not lines:
        return 0
    best = 1
    for i, a in enumerate(lines):
        per_flat: dict[TwoFlat, int] = {}
        for j, b in enumerate(lines):
            if i == j or a == b:
                continue
            flat = spanning_flat(a, b)
            if flat is not None:
                per_flat[flat] = per_flat.get(flat, 0) + 1
        if per_flat:
            best = max(best, 1 + max(per_flat.values()))
    return best


# -- decomposition of the line family ----------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Line family split against the classified surface factors.

    structured holds the lines that the generic argument cannot handle
    uniformly: lines on some non-ruled factor, lines shared by two factors,
    and exceptional lines of singly ruled factors.  Every remaining line
    (generic) lies on exactly one factor, and that factor is ruled.
    """

    surface: Surface
    lines: tuple[AffLine, ...]
    verdicts: tuple[ClassificationResult, ...]
    containing: tuple[tuple[int, ...], ...]
    structured: tuple[AffLine, ...]
    generic: tuple[AffLine, ...]
    generic_owner: Mapping[AffLine, int]
    exceptional: Mapping[int, tuple[AffLine, ...]]
    apexes: Mapping[int, Vec]

    def factor_of(self, ln: AffLine) -> int:
        """The unique containing factor of a generic line."""
        owner = self.generic_owner.get(ln)
        if owner is None:
            raise DomainError("line is not in the generic part of the family")
        return owner

    @property
    def structured_cap(self) -> int:
        d = self.surface.degree
        non_ruled_sq = sum(
            self.surface.factors[i].degree() ** 2
            for i, r in enumerate(self.verdicts)
            if r.verdict not in RULED_VERDICTS
        )
        return 11 * non_ruled_sq + d * d + d


def decompose_lines(
    surface: Surface, lines: Sequence[AffLine], denominator_bound: int = 10
) -> Decomposition:
    """Classify the factors and split the line family into L0 and L1."""
    lines = tuple(lines)
    if len(set(lines)) != len(lines):
        raise DomainError("line family contains duplicates")
    per_factor_lines: list[list[AffLine]] = [[] for _ in surface.factors]
    containing: list[tuple[int, ...]] = []
    for ln in lines:
        owners = tuple(
            i for i, w in enumerate(surface.factors) if line_on_surface(w, ln)
        )
        if not owners:
            raise NotOnSurfaceError(f"line {ln} lies on no factor of the surface")
        for i in owners:
            per_factor_lines[i].append(ln)
        containing.append(owners)

    verdicts = []
    for i, w in enumerate(surface.factors):
        if w.degree() == 1:
            raise PlanarComponentError(
                "surface has a planar component; use the planes variant"
            )
        verdicts.append(classify_component(w, hint_lines=per_factor_lines[i]))

    exceptional: dict[int, tuple[AffLine, ...]] = {}
    apexes: dict[int, Vec] = {}
    for i, r in enumerate(verdicts):
        if r.verdict is Verdict.CONE and r.apex is not None:
            apexes[i] = r.apex
        if r.verdict is Verdict.SINGLY_RULED:
            exceptional[i] = tuple(
                exceptional_lines(
                    surface.factors[i], per_factor_lines[i], denominator_bound
                )
            )

    structured: list[AffLine] = []
    generic: list[AffLine] = []
    generic_owner: dict[AffLine, int] = {}
    for ln, owners in zip(lines, containing):
        on_non_ruled = any(verdicts[i].verdict not in RULED_VERDICTS for i in owners)
        shared = len(owners) >= 2
        is_exceptional = any(ln in exceptional.get(i, ()) for i in owners)
        if on_non_ruled or shared or is_exceptional:
            structured.append(ln)
        else:
            generic.append(ln)
            generic_owner[ln] = owners[0]

    decomp = Decomposition(
        surface=surface,
        lines=lines,
        verdicts=tuple(verdicts),
        containing=tuple(containing),
        structured=tuple(structured),
        generic=tuple(generic),
        generic_owner=generic_owner,
        exceptional=exceptional,
        apexes=apexes,
    )
    if len(decomp.structured) > decomp.structured_cap:
        raise InvariantViolation(
            f"{len(decomp.structured)} structured lines exceed the cap "
            f"{decomp.structured_cap}"
        )
    return decomp


# -- conical incidences and pruning -------------------------------------------


def is_conical_incidence(decomp: Decomposition, p: Sequence, ln: AffLine) -> bool:
    """Incidence at the apex of the cone factor owning a generic line."""
    pt = to_vec(p)
    owner = decomp.generic_owner.get(ln)
    if owner is None or owner not in decomp.apexes:
        return False
    return decomp.apexes[owner] == pt and incidence_point_line(pt, ln)


def conical_incidence_count(decomp: Decomposition, points: Sequence) -> int:
    """Number of conical incidences; structurally at most one per generic line."""
    pts = {to_vec(p) for p in points}
    count = 0
    for ln in decomp.generic:
        apex = decomp.apexes.get(decomp.factor_of(ln))
        if apex is not None and apex in pts and incidence_point_line(apex, ln):
            count += 1
    if count > len(decomp.generic):
        raise InvariantViolation("conical incidences exceed the generic line count")
    return count


def prune_points(
    decomp: Decomposition, points: Sequence, min_incidences: int = 4
) -> tuple[Vec, ...]:
    """Points with at least min_incidences non-conical generic-line incidences."""
    kept = []
    for p in points:
        pt = to_vec(p)
        count = 0
        for ln in decomp.generic:
            if incidence_point_line(pt, ln) and not is_conical_incidence(decomp, pt, ln):
                count += 1
        if count >= min_incidences:
            kept.append(pt)
    return tuple(kept)


def meeting_line_counts(
    decomp: Decomposition, kept_points: Sequence
) -> dict[AffLine, int]:
    """Per generic line: distinct generic lines met non-conically at kept points."""
    partners: dict[AffLine, set[AffLine]] = {ln: set() for ln in decomp.generic}
    for p in (to_vec(q) for q in kept_points):
        incident = [
            ln
            for ln in decomp.generic
            if incidence_point_line(p, ln) and not is_conical_incidence(decomp, p, ln)
        ]
        for ln in incident:
            partners[ln].update(other for other in incident if other != ln)
    return {ln: len(met) for ln, met in partners.items()}


def check_meeting_cap(decomp: Decomposition, kept_points: Sequence) -> int:
    """Assert each generic line meets at most 4*degree others; return the max."""
    counts = meeting_line_counts(decomp, kept_points)
    cap = 4 * decomp.surface.degree
    worst = max(counts.values(), default=0)
    if worst > cap:
        raise InvariantViolation(f"a generic line meets {worst} others, cap {cap}")
    return worst


# -- closed-form bound evaluators ---------------------------------------------


def _cbrt(x: float) -> float:
    """Nonnegative cube root, exact on perfect integer cubes."""
    r = x ** (1.0 / 3.0)
    snapped = float(round(r))
    if snapped**3 == x:
        return snapped
    return r


def rhs_st(m: int, n: int) -> float:
    """Planar point-line shape: m^(2/3) n^(2/3) + m + n."""
    return _cbrt(float(m) ** 2) * _cbrt(float(n) ** 2) + m + n


def rhs_gk(m: int, n: int, s: int) -> float:
    """Spatial shape with coplanarity control:
    m^(1/2) n^(3/4) + m^(2/3) n^(1/3) s^(1/3) + m + n."""
    return (
        float(m) ** 0.5 * float(n) ** 0.75
        + _cbrt(float(m) ** 2) * _cbrt(float(n)) * _cbrt(float(s))
        + m
        + n
    )


def rhs_main(m: int, n: int, degree: int, s: int) -> float:
    """Surface-sensitive shape:
    (m n degree)^(1/2) + m^(2/3) min(n, degree^2)^(1/3) s^(1/3) + m + n."""
    return (
        (float(m) * float(n) * float(degree)) ** 0.5
        + _cbrt(float(m) ** 2) * _cbrt(float(min(n, degree * degree))) * _cbrt(float(s))
        + m
        + n
    )


def rhs_planes(m: int, s: int, n: int) -> float:
    """Plane-dominated shape: m^(2/3) s^(2/3) + m + n."""
    return _cbrt(float(m) ** 2) * _cbrt(float(s) ** 2) + m + n


def choose_xi(m: int, n: int, degree: int) -> float:
    """Cell resolution parameter: 3 in the dense regime, else sqrt(n*degree/m)."""
    if m < 1 or n < 1 or degree < 1:
        raise DomainError("cell parameter needs positive m, n, degree")
    if 9 * m > n * degree:
        return 3.0
    return (n * degree / m) ** 0.5


# -- bound report --------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    m: int
    n: int
    degree: int
    s: int
    incidences: int
    xi: float
    rhs_st: float
    rhs_gk: float
    rhs_main: float
    ratio_main: float
    constant: float
    within: bool
    notes: str = ""


def verify_bound(
    points: Sequence,
    lines: Sequence[AffLine],
    degree: int,
    s: int | None = None,
    constant: float = 4.0,
    notes: str = "",
) -> BoundReport:
    """Measure an instance against the closed-form bounds.

    s defaults to the measured coplanarity parameter.  The report carries
    the exact counts plus the float evaluations; within means the incidence
    count stays below constant times the surface-sensitive bound.
    """
    if degree < 1:
        raise DomainError("surface degree must be positive")
    pts = [to_vec(p) for p in points]
    if len(set(pts)) != len(pts):
        raise DomainError("point set contains duplicates")
    if len(set(lines)) != len(lines):
        raise DomainError("line family contains duplicates")
    m, n = len(pts), len(lines)
    if s is None:
        s = max_lines_per_flat(lines)
    inc = count_incidences(pts, lines)
    main = rhs_main(m, n, degree, s) if n else float(m)
    ratio = inc / main if main else 0.0
    return BoundReport(
        m=m,
        n=n,
        degree=degree,
        s=s,
        incidences=inc,
        xi=choose_xi(m, n, degree) if m and n else 0.0,
        rhs_st=rhs_st(m, n),
        rhs_gk=rhs_gk(m, n, s),
        rhs_main=main,
        ratio_main=ratio,
        constant=constant,
        within=inc <= constant * main,
        notes=notes,
    )


def verify_planes_bound(
    points: Sequence,
    lines: Sequence[AffLine],
    constant: float = 4.0,
    notes: str = "",
) -> BoundReport:
    """Plane-dominated variant used when the surface has planar components."""
    pts = [to_vec(p) for p in points]
    m, n = len(pts), len(lines)
    s = max_lines_per_flat(lines)
    inc = count_incidences(pts, lines)
    main = rhs_planes(m, s, n)
    return BoundReport(
        m=m,
        n=n,
        degree=1,
        s=s,
        incidences=inc,
        xi=0.0,
        rhs_st=rhs_st(m, n),
        rhs_gk=rhs_gk(m, n, s),
        rhs_main=main,
        ratio_main=inc / main if main else 0.0,
        constant=constant,
        within=inc <= constant * main,
        notes=notes or "plane-dominated bound",
    )
