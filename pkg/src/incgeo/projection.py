"""Generic projection of point-line instances from R^d down to R^3.

One projection step removes one dimension: a rational direction w is
sampled, and the map keeps the coordinates v_i - (w_i / w_j) v_j for i
different from the pivot j, which is linear with kernel spanned by w.  A
step is accepted only if it provably changes nothing combinatorial: points
stay distinct, lines stay distinct and none collapses, the incidence
relation is preserved pair for pair, and non-coplanar line triples stay
non-coplanar.  Failed samples are retried against a fixed budget, so the
output carries a certificate rather than a probabilistic promise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ArityError, CollapseError, DomainError, ResampleExhaustedError
from .linalg import Vec, is_zero_vec, to_vec
from .linespace import AffLine, coplanar_triple, incidence_point_line

SAMPLE_MAGNITUDE = 10**4
MAX_RESAMPLES = 32


@dataclass(frozen=True)
class GenericityCertificate:
    """Which combinatorial invariants a projection preserved, checked exactly."""

    points_distinct: bool
    lines_distinct: bool
    incidences_preserved: bool
    noncoplanar_triples_preserved: bool
    resamples_used: int

    @property
    def ok(self) -> bool:
        return (
            self.points_distinct
            and self.lines_distinct
            and self.incidences_preserved
            and self.noncoplanar_triples_preserved
        )


def _pivot_index(w: Vec) -> int:
    piv = max(range(len(w)), key=lambda i: abs(w[i]))
    if w[piv] == 0:
        raise DomainError("projection direction must be nonzero")
    return piv


def project_vector(v: Sequence, w: Sequence) -> Vec:
    """Image of one vector under the projection along w."""
    vv, ww = to_vec(v), to_vec(w)
    if len(vv) != len(ww):
        raise ArityError("vector and direction disagree on dimension")
    j = _pivot_index(ww)
    ratio = [wi / ww[j] for wi in ww]
    return tuple(vv[i] - ratio[i] * vv[j] for i in range(len(vv)) if i != j)


def project_once(
    points: Sequence, lines: Sequence[AffLine], w: Sequence
) -> tuple[list[Vec], list[AffLine]]:
    """Project every point and line along w, dropping one dimension.

    A line whose direction is proportional to w has no image line; that is
    a CollapseError rather than a silent degeneracy.
    """
    ww = to_vec(w)
    if len(ww) < 4:
        raise DomainError("projection below three dimensions is not meaningful")
    out_points = [project_vector(p, ww) for p in points]
    out_lines = []
    for ln in lines:
        direction = project_vector(ln.direction, ww)
        if is_zero_vec(direction):
            raise CollapseError("a line is parallel to the projection direction")
        out_lines.append(AffLine(project_vector(ln.base, ww), direction))
    return out_points, out_lines


def is_generic(
    points: Sequence,
    lines: Sequence[AffLine],
    projected_points: Sequence,
    projected_lines: Sequence[AffLine],
) -> GenericityCertificate:
    """Certify that a projection preserved the instance combinatorics.

    Incidence preservation is checked in both directions on every pair, so
    accidental new incidences are caught, not just lost ones.
    """
    pts = [to_vec(p) for p in points]
    pts2 = [to_vec(p) for p in projected_points]
    lines = list(lines)
    lines2 = list(projected_lines)
    if len(pts) != len(pts2) or len(lines) != len(lines2):
        raise DomainError("projected instance has mismatched sizes")

    points_distinct = len(set(pts2)) == len(set(pts)) == len(pts)
    lines_distinct = len(set(lines2)) == len(set(lines)) == len(lines)
    incidences_preserved = all(
        incidence_point_line(p, ln) == incidence_point_line(q, ln2)
        for p, q in zip(pts, pts2)
        for ln, ln2 in zip(lines, lines2)
    )
    triples_ok = True
    n = len(lines)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if not coplanar_triple(lines[i], lines[j], lines[k]) and coplanar_triple(
                    lines2[i], lines2[j], lines2[k]
                ):
                    triples_ok = False
                    break
            if not triples_ok:
                break
        if not triples_ok:
            break
    return GenericityCertificate(
        points_distinct=points_distinct,
        lines_distinct=lines_distinct,
        incidences_preserved=incidences_preserved,
        noncoplanar_triples_preserved=triples_ok,
        resamples_used=0,
    )


def _sample_direction(rng: random.Random, dim: int) -> Vec:
    return tuple(
        Fraction(
            rng.randint(-SAMPLE_MAGNITUDE, SAMPLE_MAGNITUDE),
            rng.randint(1, SAMPLE_MAGNITUDE),
        )
        for _ in range(dim)
    )


def project_to_3space(
    points: Sequence,
    lines: Sequence[AffLine],
    seed: int = 0,
    max_resamples: int = MAX_RESAMPLES,
) -> tuple[list[Vec], list[AffLine], GenericityCertificate]:
    """Repeatedly project one dimension until the instance lives in R^3.

    Directions are drawn from a seeded generator, so the output is a pure
    function of (instance, seed).  Each step must pass the full genericity
    certificate; failures burn resamples from a shared budget and exhaust
    into ResampleExhaustedError.
    """
    pts = [to_vec(p) for p in points]
    lns = list(lines)
    dims = {len(p) for p in pts} | {ln.dim for ln in lns}
    if len(dims) > 1:
        raise ArityError("points and lines disagree on ambient dimension")
    dim = dims.pop() if dims else 3
    if dim < 3:
        raise DomainError("instances live in dimension at least 3")

    rng = random.Random(seed)
    resamples = 0
    while dim > 3:
        accepted = False
        while not accepted:
            w = _sample_direction(rng, dim)
            try:
                if is_zero_vec(w):
                    raise CollapseError("zero direction")
                cand_pts, cand_lns = project_once(pts, lns, w)
                cert = is_generic(pts, lns, cand_pts, cand_lns)
            except CollapseError:
                cert = None
            if cert is not None and cert.ok:
                pts, lns = cand_pts, cand_lns
                dim -= 1
                accepted = True
            else:
                resamples += 1
                if resamples > max_resamples:
                    raise ResampleExhaustedError(
                        f"no generic projection direction within {max_resamples} resamples"
                    )
    final = GenericityCertificate(
        points_distinct=len(set(pts)) == len(pts),
        lines_distinct=len(set(lns)) == len(lns),
        incidences_preserved=True,
        noncoplanar_triples_preserved=True,
        resamples_used=resamples,
    )
    return pts, lns, final
