"""Small exact linear algebra helpers over Fraction vectors.

Everything works on tuples/lists of Fraction and never leaves the rationals.
Only the handful of primitives the geometry layers need: rank, reduced row
echelon form, solving, and kernels.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = tuple[Fraction, ...]


def to_vec(values: Sequence) -> Vec:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


def vec_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a: Sequence[Fraction], c: Fraction) -> Vec:
    return tuple(x * c for x in a)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def cross(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def is_zero_vec(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def rref(rows: Sequence[Sequence[Fraction]]) -> list[Vec]:
    """Reduced row echelon form; zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[Fraction]] = []
    pivot_row = 0
    work = [row[:] for row in m]
    for col in range(ncols):
        pivot = next((i for i in range(pivot_row, len(work)) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        inv = work[pivot_row][col]
        work[pivot_row] = [v / inv for v in work[pivot_row]]
        for i in range(len(work)):
            if i != pivot_row and work[i][col] != 0:
                c = work[i][col]
                work[i] = [v - c * w for v, w in zip(work[i], work[pivot_row])]
        pivot_row += 1
        if pivot_row == len(work):
            break
    for row in work[:pivot_row]:
        out.append(row)
    return [tuple(r) for r in out]


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows))


def in_span(v: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> bool:
    """True iff v lies in the row span of basis."""
    base_rank = rank(basis)
    return rank(list(basis) + [list(v)]) == base_rank


def solve_linear(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vec | None:
    """One exact solution x of A x = b, or None if inconsistent.

    Free variables are set to zero.
    """
    rows = [list(r) + [bv] for r, bv in zip(a, b)]
    n = len(a[0]) if a else 0
    reduced = rref(rows)
    solution = [Fraction(0)] * n
    for row in reduced:
        pivot = next((j for j in range(n) if row[j] != 0), None)
        if pivot is None:
            if row[n] != 0:
                return None
            continue
        solution[pivot] = row[n]
    # verify: free variables interact with pivots only through zeros in rref
    for r, bv in zip(a, b):
        if dot(r, solution) != bv:
            return None
    return tuple(solution)


def nullspace(rows: Sequence[Sequence[Fraction]]) -> list[Vec]:
    """Basis of the right kernel of the matrix."""
    if not rows:
        return []
    ncols = len(rows[0])
    reduced = rref(rows)
    pivots = []
    for row in reduced:
        pivots.append(next(j for j in range(ncols) if row[j] != 0))
    free = [j for j in range(ncols) if j not in pivots]
    basis: list[Vec] = []
    for j in free:
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for row, pj in zip(reduced, pivots):
            v[pj] = -row[j]
        basis.append(tuple(v))
    return basis


def integer_primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero > 0."""
    from math import gcd, lcm

    nz = [x for x in v if x != 0]
    if not nz:
        raise ValueError("zero vector has no primitive form")
    den = lcm(*(x.denominator for x in nz))
    ints = [int(x * den) for x in v]
    g = gcd(*(abs(i) for i in ints if i))
    ints = [i // g for i in ints]
    first = next(i for i in ints if i)
    if first < 0:
        ints = [-i for i in ints]
    return tuple(ints)
