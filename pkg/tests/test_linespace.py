"""Tests for projective and affine line geometry.

The plane-line intersection cases were derived by hand from the incidence
conditions (substitute the parametrized line into the plane equation) and
frozen here; the formula must reproduce them exactly.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incgeo.errors import (
    ArityError,
    ContainedError,
    DegenerateLineError,
    DomainError,
)
from incgeo.linespace import (
    AffLine,
    FlatH,
    LineRelation,
    PluckerLine,
    ProjPoint,
    RelationKind,
    coplanar_triple,
    incidence_point_line,
    klein_form,
    line_on_surface,
    line_relation,
    plane_line_intersection,
    plucker_from_points,
)
from incgeo.poly import variables

X, Y, Z = variables(3)


def affmk(*coords):
    return [Fraction(c) for c in coords]


# -- canonical forms -------------------------------------------------------


def test_projpoint_canonicalization():
    assert ProjPoint([2, 4, 6, 8]) == ProjPoint([1, 2, 3, 4])
    assert ProjPoint([0, -3, 6, 0]).coords == (0, 1, -2, 0)
    with pytest.raises(DomainError):
        ProjPoint([0, 0, 0, 0])


def test_affline_canonical_equality():
    a = AffLine([0, 0, 0], [2, 0, 0])
    b = AffLine([5, 0, 0], [1, 0, 0])
    assert a == b
    assert hash(a) == hash(b)
    c = AffLine([0, 1, 0], [1, 0, 0])
    assert a != c
    with pytest.raises(DegenerateLineError):
        AffLine([0, 0, 0], [0, 0, 0])


def test_affline_through_two_points():
    ln = AffLine.through([1, 1, 1], [2, 3, 5])
    assert incidence_point_line(affmk(1, 1, 1), ln)
    assert incidence_point_line(affmk(2, 3, 5), ln)
    assert not incidence_point_line(affmk(0, 0, 1), ln)
    with pytest.raises(DegenerateLineError):
        AffLine.through([1, 2, 3], [1, 2, 3])


# -- plucker coordinates ---------------------------------------------------


def test_plucker_from_affine_points():
    # z-axis through (0,0,1) and (0,0,-1): direction block e3, zero moment
    ln = plucker_from_points(
        ProjPoint.from_affine([0, 0, 1]), ProjPoint.from_affine([0, 0, -1])
    )
    assert ln.dvec == (0, 0, 1)
    assert ln.mvec == (0, 0, 0)


def test_plucker_blocks_are_direction_and_moment():
    rng = random.Random(5)
    for _ in range(30):
        a = affmk(*(rng.randint(-5, 5) for _ in range(3)))
        b = affmk(*(rng.randint(-5, 5) for _ in range(3)))
        if a == b:
            continue
        ln = plucker_from_points(ProjPoint.from_affine(a), ProjPoint.from_affine(b))
        diff = tuple(bb - aa for aa, bb in zip(a, b))
        moment = (
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
        # canonical scaling is shared by both blocks
        scale = None
        for got, want in zip(ln.dvec + ln.mvec, diff + moment):
            if want != 0:
                scale = got / want
                break
        assert scale is not None
        assert ln.dvec == tuple(scale * w for w in diff)
        assert ln.mvec == tuple(scale * w for w in moment)


def test_plucker_rejects_coincident_points():
    p = ProjPoint([1, 2, 3, 4])
    with pytest.raises(DegenerateLineError):
        plucker_from_points(p, ProjPoint([2, 4, 6, 8]))


def test_klein_form_zero_iff_coplanar():
    zaxis = AffLine([0, 0, 0], [0, 0, 1]).to_plucker()
    xaxis = AffLine([0, 0, 0], [1, 0, 0]).to_plucker()
    parallel = AffLine([1, 0, 0], [0, 0, 1]).to_plucker()
    skew = AffLine([0, 1, 0], [1, 0, 1]).to_plucker()
    assert klein_form(zaxis, xaxis) == 0  # meet at the origin
    assert klein_form(zaxis, parallel) == 0  # meet at infinity
    assert klein_form(zaxis, skew) != 0
    assert klein_form(skew, skew) == 0


def test_klein_form_random_pairs_match_relation():
    rng = random.Random(23)
    for _ in range(200):
        l1 = _random_affline(rng)
        l2 = _random_affline(rng)
        rel = line_relation(l1, l2)
        k = klein_form(l1.to_plucker(), l2.to_plucker())
        if rel.kind == RelationKind.SKEW:
            assert k != 0
        else:
            assert k == 0


# -- plane-line intersection ------------------------------------------------


def test_plane_line_intersection_affine_case():
    zaxis = plucker_from_points(
        ProjPoint.from_affine([0, 0, 1]), ProjPoint.from_affine([0, 0, -1])
    )
    pt = plane_line_intersection(FlatH([0, 0, 0, 1]), zaxis)
    assert pt == ProjPoint([1, 0, 0, 0])


def test_plane_line_intersection_at_infinity():
    xaxis = plucker_from_points(
        ProjPoint.from_affine([0, 0, 0]), ProjPoint.from_affine([1, 0, 0])
    )
    pt = plane_line_intersection(FlatH([1, 0, 0, 0]), xaxis)
    assert pt == ProjPoint([0, 1, 0, 0])


def test_plane_line_intersection_contained_line():
    xaxis = plucker_from_points(
        ProjPoint.from_affine([0, 0, 0]), ProjPoint.from_affine([1, 0, 0])
    )
    with pytest.raises(ContainedError):
        plane_line_intersection(FlatH([0, 0, 0, 1]), xaxis)


def test_plane_line_intersection_random_consistency():
    rng = random.Random(41)
    hits = 0
    for _ in range(120):
        ln = _random_affline(rng)
        coeffs = affmk(*(rng.randint(-4, 4) for _ in range(4)))
        if all(c == 0 for c in coeffs):
            continue
        h = FlatH(coeffs)
        pl = ln.to_plucker()
        try:
            pt = plane_line_intersection(h, pl)
        except ContainedError:
            assert line_on_surface(
                Poly_from_plane(coeffs), ln
            ), "ContainedError on a line not inside the plane"
            continue
        hits += 1
        assert h.contains(pt)
        assert pl.contains(pt)
    assert hits > 50


def Poly_from_plane(coeffs):
    # affine polynomial A0 + A1 x + A2 y + A3 z
    return coeffs[0] + coeffs[1] * X + coeffs[2] * Y + coeffs[3] * Z


# -- affine relations --------------------------------------------------------


def test_line_relation_examples():
    xaxis = AffLine([0, 0, 0], [1, 0, 0])
    yaxis = AffLine([0, 0, 0], [0, 1, 0])
    rel = line_relation(xaxis, yaxis)
    assert rel.kind is RelationKind.INTERSECTING
    assert rel.point == (0, 0, 0)
    assert line_relation(xaxis, AffLine([0, 1, 0], [2, 0, 0])).kind is RelationKind.PARALLEL
    assert line_relation(xaxis, AffLine([0, 1, 1], [0, 0, 1])).kind is RelationKind.SKEW
    assert line_relation(xaxis, AffLine([7, 0, 0], [1, 0, 0])).kind is RelationKind.EQUAL


def test_line_relation_in_higher_dimension():
    a = AffLine([0, 0, 0, 0], [1, 0, 0, 0])
    b = AffLine([0, 1, 0, 0], [0, 0, 1, 0])
    assert line_relation(a, b).kind is RelationKind.SKEW
    c = AffLine([1, 0, 0, 0], [0, 1, 0, 0])
    rel = line_relation(a, c)
    assert rel.kind is RelationKind.INTERSECTING
    assert rel.point == (1, 0, 0, 0)
    with pytest.raises(ArityError):
        line_relation(a, AffLine([0, 0, 0], [1, 0, 0]))


def test_intersection_point_is_on_both_lines():
    rng = random.Random(13)
    found = 0
    for _ in range(150):
        l1 = _random_affline(rng)
        l2 = _random_affline(rng)
        rel = line_relation(l1, l2)
        if rel.kind is RelationKind.INTERSECTING:
            found += 1
            assert incidence_point_line(rel.point, l1)
            assert incidence_point_line(rel.point, l2)
    assert found > 0


def test_coplanar_triple_examples():
    xaxis = AffLine([0, 0, 0], [1, 0, 0])
    yaxis = AffLine([0, 0, 0], [0, 1, 0])
    diag = AffLine([0, 0, 0], [1, 1, 0])
    assert coplanar_triple(xaxis, yaxis, diag)
    zaxis = AffLine([0, 0, 0], [0, 0, 1])
    assert not coplanar_triple(xaxis, yaxis, zaxis)
    # three parallel lines not in one plane
    p1 = AffLine([0, 0, 0], [1, 0, 0])
    p2 = AffLine([0, 1, 0], [1, 0, 0])
    p3 = AffLine([0, 0, 1], [1, 0, 0])
    assert not coplanar_triple(p1, p2, p3)
    p3flat = AffLine([0, 2, 0], [1, 0, 0])
    assert coplanar_triple(p1, p2, p3flat)


def test_line_on_surface_examples():
    cone = X**2 + Y**2 - Z**2
    assert line_on_surface(cone, AffLine([0, 0, 0], [3, 4, 5]))
    assert not line_on_surface(cone, AffLine([0, 0, 0], [1, 0, 0]))
    regulus = Z - X * Y
    assert line_on_surface(regulus, AffLine([0, 2, 0], [1, 0, 2]))
    with pytest.raises(ArityError):
        line_on_surface(cone, AffLine([0, 0, 0, 0], [1, 0, 0, 0]))


# -- property tests ----------------------------------------------------------

coords3 = st.tuples(*([st.integers(-6, 6)] * 3))


@settings(max_examples=80, deadline=None)
@given(coords3, coords3, coords3, coords3)
def test_klein_form_vanishes_for_meeting_lines(a, b, c, d):
    # build two lines through one shared point a
    if b == a or c == a:
        return
    l1 = plucker_from_points(ProjPoint.from_affine(a), ProjPoint.from_affine(b))
    l2 = plucker_from_points(ProjPoint.from_affine(a), ProjPoint.from_affine(c))
    assert klein_form(l1, l2) == 0
    del d


@settings(max_examples=80, deadline=None)
@given(coords3, coords3, st.integers(-5, 5), st.integers(1, 4))
def test_point_at_parameter_is_incident(base, direction, num, den):
    if all(c == 0 for c in direction):
        return
    ln = AffLine(affmk(*base), affmk(*direction))
    p = ln.point_at(Fraction(num, den))
    assert incidence_point_line(p, ln)
    assert ln.param_of(p) is not None


# -- helpers -----------------------------------------------------------------


def _random_affline(rng, dim=3):
    while True:
        base = affmk(*(rng.randint(-4, 4) for _ in range(dim)))
        direction = affmk(*(rng.randint(-3, 3) for _ in range(dim)))
        if any(c != 0 for c in direction):
            return AffLine(base, direction)
