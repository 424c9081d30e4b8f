"""Tests for generic dimension-lowering projections."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incgeo.errors import ArityError, CollapseError, DomainError, ResampleExhaustedError
from incgeo.incidence import count_incidences
from incgeo.linespace import AffLine, coplanar_triple
from incgeo.projection import (
    is_generic,
    project_once,
    project_to_3space,
    project_vector,
)

F = Fraction


def quad_instance():
    """Three points pairwise joined by lines, plus a spare line, in R^4."""
    pts = [(F(0), F(0), F(0), F(0)), (F(1), F(1), F(0), F(2)), (F(2), F(0), F(1), F(1))]
    lns = [
        AffLine((0, 0, 0, 0), (1, 1, 0, 2)),
        AffLine((0, 0, 0, 0), (2, 0, 1, 1)),
        AffLine((1, 1, 0, 2), (1, -1, 1, -1)),
        AffLine((0, 0, 0, 0), (0, 0, 0, 1)),
    ]
    return pts, lns


class TestProjectVector:
    def test_direction_maps_to_zero(self):
        w = (F(3), F(-1), F(2), F(5))
        assert project_vector(w, w) == (F(0),) * 3

    def test_dimension_drops_by_one(self):
        assert len(project_vector((1, 2, 3, 4, 5), (0, 0, 1, 0, 0))) == 4

    def test_linear(self):
        w = (F(1), F(2), F(0), F(1))
        a = (F(1), F(0), F(3), F(2))
        b = (F(0), F(5), F(1), F(-1))
        pa, pb = project_vector(a, w), project_vector(b, w)
        psum = project_vector(tuple(x + y for x, y in zip(a, b)), w)
        assert psum == tuple(x + y for x, y in zip(pa, pb))

    def test_zero_direction_rejected(self):
        with pytest.raises(DomainError):
            project_vector((1, 2, 3, 4), (0, 0, 0, 0))

    def test_dimension_mismatch(self):
        with pytest.raises(ArityError):
            project_vector((1, 2, 3), (1, 0, 0, 0))


class TestProjectOnce:
    def test_collapse_of_parallel_line(self):
        pts, lns = quad_instance()
        with pytest.raises(CollapseError):
            project_once(pts, lns, (0, 0, 0, 1))

    def test_no_projection_below_three_dims(self):
        with pytest.raises(DomainError):
            project_once([(F(1), F(2), F(3))], [], (1, 0, 0))

    def test_incidences_carry_over(self):
        pts, lns = quad_instance()
        w = (F(1), F(3), F(5), F(7))
        pts2, lns2 = project_once(pts, lns, w)
        assert count_incidences(pts2, lns2) >= count_incidences(pts, lns)


class TestIsGeneric:
    def test_clean_projection_certifies(self):
        pts, lns = quad_instance()
        w = (F(1), F(3), F(5), F(7))
        pts2, lns2 = project_once(pts, lns, w)
        cert = is_generic(pts, lns, pts2, lns2)
        assert cert.ok
        assert cert.resamples_used == 0

    def test_point_collision_flagged(self):
        pts, lns = quad_instance()
        w = pts[1]  # parallel to the segment joining the first two points
        pts2, lns2 = project_once(pts, [lns[1]], w)
        cert = is_generic(pts, [lns[1]], pts2, lns2)
        assert not cert.points_distinct
        assert not cert.ok

    def test_created_incidence_flagged(self):
        ln = AffLine((0, 0, 0, 0), (1, 0, 0, 0))
        q = (F(2), F(0), F(0), F(1))  # off the line, but over it along w
        w = (F(0), F(0), F(0), F(1))
        pts2, lns2 = project_once([q], [ln], w)
        cert = is_generic([q], [ln], pts2, lns2)
        assert not cert.incidences_preserved
        assert not cert.ok

    def test_flattened_triple_flagged(self):
        # Two lines share a 2-flat; the third floats above it in the last
        # coordinate, and projecting that coordinate away flattens the triple.
        l1 = AffLine((0, 0, 0, 0), (1, 0, 0, 0))
        l2 = AffLine((0, 1, 0, 0), (1, 1, 0, 0))
        l3 = AffLine((0, 0, 0, 1), (0, 1, 0, 0))
        assert not coplanar_triple(l1, l2, l3)
        w = (F(0), F(0), F(0), F(1))
        pts2, lns2 = project_once([], [l1, l2, l3], w)
        assert coplanar_triple(*lns2)
        cert = is_generic([], [l1, l2, l3], pts2, lns2)
        assert not cert.noncoplanar_triples_preserved
        assert cert.points_distinct and cert.lines_distinct

    def test_size_mismatch_rejected(self):
        pts, lns = quad_instance()
        with pytest.raises(DomainError):
            is_generic(pts, lns, pts[:2], lns)


class TestProjectTo3Space:
    def test_four_to_three_preserves_counts(self):
        pts, lns = quad_instance()
        before = count_incidences(pts, lns)
        pts3, lns3, cert = project_to_3space(pts, lns, seed=7)
        assert cert.ok
        assert cert.resamples_used <= 3
        assert {len(p) for p in pts3} == {3}
        assert {ln.dim for ln in lns3} == {3}
        assert count_incidences(pts3, lns3) == before

    def test_deterministic_in_seed(self):
        pts, lns = quad_instance()
        first = project_to_3space(pts, lns, seed=12)
        second = project_to_3space(pts, lns, seed=12)
        assert first[0] == second[0]
        assert first[1] == second[1]

    def test_three_dims_is_identity(self):
        pts = [(F(1), F(2), F(3))]
        lns = [AffLine((0, 0, 0), (1, 1, 1))]
        pts3, lns3, cert = project_to_3space(pts, lns, seed=0)
        assert pts3 == [tuple(map(F, (1, 2, 3)))]
        assert lns3 == lns
        assert cert.ok and cert.resamples_used == 0

    def test_empty_instance(self):
        pts3, lns3, cert = project_to_3space([], [], seed=0)
        assert pts3 == [] and lns3 == []
        assert cert.ok

    def test_low_dimension_rejected(self):
        with pytest.raises(DomainError):
            project_to_3space([(F(1), F(2))], [], seed=0)

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ArityError):
            project_to_3space(
                [(F(0), F(0), F(0), F(0))], [AffLine((0,) * 5, (1,) + (0,) * 4)], seed=0
            )

    def test_unfixable_instance_exhausts_budget(self):
        # A duplicated input point can never certify, whatever the direction.
        p = (F(1), F(0), F(0), F(0))
        with pytest.raises(ResampleExhaustedError):
            project_to_3space([p, p], [], seed=0, max_resamples=4)


@st.composite
def five_dim_instances(draw):
    coords = st.integers(min_value=-4, max_value=4)
    n_lines = draw(st.integers(min_value=1, max_value=4))
    lines = []
    for _ in range(n_lines):
        base = tuple(F(draw(coords)) for _ in range(5))
        direction = tuple(F(draw(coords)) for _ in range(5))
        if all(c == 0 for c in direction):
            direction = (F(1),) + direction[1:]
        lines.append(AffLine(base, direction))
    lines = sorted(set(lines), key=lambda ln: (ln.direction, ln.base))
    points = set()
    for ln in lines:
        for t in (F(0), F(1), F(1, 2)):
            points.add(ln.point_at(t))
    points.add(tuple(F(draw(coords)) + F(1, 3) for _ in range(5)))
    return sorted(points), lines


class TestProjectionProperties:
    @settings(max_examples=40, deadline=None)
    @given(five_dim_instances())
    def test_counts_survive_descent(self, instance):
        pts, lns = instance
        before = count_incidences(pts, lns)
        pts3, lns3, cert = project_to_3space(pts, lns, seed=5)
        assert cert.ok
        assert len(pts3) == len(pts)
        assert len(lns3) == len(lns)
        assert count_incidences(pts3, lns3) == before
