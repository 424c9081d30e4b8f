"""Sparse multivariate polynomials over the rationals.

Coefficients are fractions.Fraction throughout; nothing in this module ever
rounds.  A polynomial is a map from exponent tuples to nonzero coefficients,
wrapped in an immutable Poly object.  Monomials are ordered graded
lexicographically (total degree first, then lex with variable 0 highest);
the zero polynomial has degree -1.

Beyond ring arithmetic the module provides the calculus and elimination
tools the geometry layers need: Taylor components around a point, powers of
the directional derivative, Sylvester resultants, single-divisor exact
division, multivariate gcd, and square-free parts.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import factorial, gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import ArityError, DomainError

Exponent = tuple[int, ...]

RatLike = int | Fraction


def _frac(value: RatLike) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def grlex_key(e: Exponent) -> tuple[int, Exponent]:
    """Sort key realizing graded lex order: compare total degree, then lex."""
    return (sum(e), e)


class Poly:
    """Immutable sparse polynomial with Fraction coefficients.

    Zero coefficients are dropped on construction, so two polynomials are
    equal iff their term maps are equal.  Instances hash, which lets the
    expensive derived quantities (flecnode witnesses, line searches) be
    memoized by polynomial identity.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, RatLike] | None = None):
        if nvars < 0:
            raise DomainError("nvars must be nonnegative")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ArityError(f"exponent {e} has length {len(e)}, expected {nvars}")
                if any(k < 0 for k in e):
                    raise DomainError(f"negative exponent in {e}")
                fc = _frac(c)
                if fc:
                    clean[tuple(e)] = fc
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> Poly:
        return Poly(nvars)

    @staticmethod
    def const(nvars: int, value: RatLike) -> Poly:
        return Poly(nvars, {(0,) * nvars: _frac(value)})

    @staticmethod
    def variable(nvars: int, index: int) -> Poly:
        if not 0 <= index < nvars:
            raise DomainError(f"variable index {index} out of range for {nvars} vars")
        e = tuple(1 if i == index else 0 for i in range(nvars))
        return Poly(nvars, {e: Fraction(1)})

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        self._check_var(var)
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def vars_used(self) -> tuple[int, ...]:
        used = [False] * self.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(i for i, u in enumerate(used) if u)

    def leading(self) -> tuple[Exponent, Fraction]:
        """Graded-lex leading term of a nonzero polynomial."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial."""
        if self.degree() > 0:
            raise DomainError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def _check_var(self, var: int) -> None:
        if not 0 <= var < self.nvars:
            raise DomainError(f"variable index {var} out of range for {self.nvars} vars")

    def _check_same(self, other: Poly) -> None:
        if self.nvars != other.nvars:
            raise ArityError(f"mixed arities {self.nvars} and {other.nvars}")

    # -- ring structure ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: Poly | RatLike) -> Poly:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        self._check_same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other: Poly | RatLike) -> Poly:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other: RatLike) -> Poly:
        return (-self) + other

    def __mul__(self, other: Poly | RatLike) -> Poly:
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly(self.nvars, {e: k * c for e, k in self.terms.items()})
        self._check_same(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(e)
                out[e] = c1 * c2 if acc is None else acc + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise DomainError("negative power")
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"Poly({self.render()})"

    def render(self, names: Sequence[str] | None = None) -> str:
        """Human-readable form, mostly for error messages and reports."""
        if not self.terms:
            return "0"
        if names is None:
            names = _default_names(self.nvars)
        parts = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    # -- evaluation and substitution ------------------------------------

    def eval(self, at: Sequence[RatLike]) -> Fraction:
        if len(at) != self.nvars:
            raise ArityError(f"expected {self.nvars} coordinates, got {len(at)}")
        pt = [_frac(a) for a in at]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for a, k in zip(pt, e):
                if k:
                    v *= a**k
            total += v
        return total

    def diff(self, var: int) -> Poly:
        self._check_var(var)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k:
                e2 = e[:var] + (k - 1,) + e[var + 1 :]
                out[e2] = out.get(e2, Fraction(0)) + c * k
        return Poly(self.nvars, out)

    def substitute(self, values: Sequence[Poly]) -> Poly:
        """Map variable i to values[i]; all values share one arity."""
        if len(values) != self.nvars:
            raise ArityError(f"expected {self.nvars} substitution values, got {len(values)}")
        if not values:
            return Poly(0, dict(self.terms))
        m = values[0].nvars
        for v in values:
            if v.nvars != m:
                raise ArityError("substitution values have mixed arities")
        powers: list[dict[int, Poly]] = [dict() for _ in range(self.nvars)]

        def power(i: int, k: int) -> Poly:
            cache = powers[i]
            got = cache.get(k)
            if got is None:
                got = values[i] ** k
                cache[k] = got
            return got

        out = Poly.zero(m)
        for e, c in self.terms.items():
            term = Poly.const(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def shift(self, at: Sequence[RatLike]) -> Poly:
        """Return p(at + x) as a polynomial in x, one variable at a time."""
        if len(at) != self.nvars:
            raise ArityError(f"expected {self.nvars} coordinates, got {len(at)}")
        p = self
        for var, raw in enumerate(at):
            a = _frac(raw)
            if not a:
                continue
            out: dict[Exponent, Fraction] = {}
            for e, c in p.terms.items():
                k = e[var]
                # binomial expansion of (x_var + a)^k
                coeff = c
                for j in range(k, -1, -1):
                    e2 = e[:var] + (j,) + e[var + 1 :]
                    out[e2] = out.get(e2, Fraction(0)) + coeff * _binom(k, j) * a ** (k - j)
            p = Poly(self.nvars, out)
        return p

    def coeffs_in(self, var: int) -> list[Poly]:
        """Coefficients [c_0, ..., c_d] of var^k, as polynomials without var."""
        self._check_var(var)
        d = self.degree_in(var)
        if d < 0:
            return []
        buckets: list[dict[Exponent, Fraction]] = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            k = e[var]
            e2 = e[:var] + (0,) + e[var + 1 :]
            buckets[k][e2] = c
        return [Poly(self.nvars, b) for b in buckets]

    def homogeneous_part(self, d: int) -> Poly:
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})


def _default_names(nvars: int) -> list[str]:
    base = ["x", "y", "z", "w"]
    if nvars <= len(base):
        return base[:nvars]
    return [f"x{i}" for i in range(nvars)]


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def variables(nvars: int) -> tuple[Poly, ...]:
    """Convenience tuple of the coordinate polynomials."""
    return tuple(Poly.variable(nvars, i) for i in range(nvars))


# -- spec-level operations ---------------------------------------------


def poly_eval(p: Poly, at: Sequence[RatLike]) -> Fraction:
    """Exact evaluation of p at a rational point."""
    return p.eval(at)


def partial_derivative(p: Poly, var: int) -> Poly:
    """Formal partial derivative with respect to one variable."""
    return p.diff(var)


def gradient(p: Poly) -> list[Poly]:
    return [p.diff(i) for i in range(p.nvars)]


def taylor_components(p: Poly, at: Sequence[RatLike]) -> list[Poly]:
    """Homogeneous components of p(at + x), indexed by total degree.

    The list has length degree(p) + 1; entry j is the degree-j part (possibly
    zero).  For the zero polynomial the list is [0].
    """
    shifted = p.shift(at)
    d = shifted.degree()
    if d < 0:
        return [Poly.zero(p.nvars)]
    return [shifted.homogeneous_part(j) for j in range(d + 1)]


def directional_power(p: Poly, k: int) -> Poly:
    """k-th power of the directional derivative, as a polynomial in (x, v).

    The result lives in 2*nvars variables: the original x block first, then
    a direction block v.  It is homogeneous of degree k in v, and equals
    sum over multi-indices a with |a| = k of (k!/a!) * D^a p(x) * v^a.
    """
    if k < 1:
        raise DomainError("directional derivative order must be >= 1")
    n = p.nvars
    out: dict[Exponent, Fraction] = {}
    kfact = factorial(k)

    def walk(var: int, remaining: int, dp: Poly, alpha: list[int]) -> None:
        if dp.is_zero:
            return
        if var == n - 1:
            alpha.append(remaining)
            d_final = dp
            for _ in range(remaining):
                d_final = d_final.diff(var)
                if d_final.is_zero:
                    break
            if not d_final.is_zero:
                mult = Fraction(kfact)
                for a in alpha:
                    mult /= factorial(a)
                v_expo = tuple(alpha)
                for e, c in d_final.terms.items():
                    key = e + v_expo
                    out[key] = out.get(key, Fraction(0)) + c * mult
            alpha.pop()
            return
        d_cur = dp
        for j in range(remaining + 1):
            alpha.append(j)
            walk(var + 1, remaining - j, d_cur, alpha)
            alpha.pop()
            d_cur = d_cur.diff(var)
            if d_cur.is_zero:
                break

    if n == 0:
        raise DomainError("directional derivative needs at least one variable")
    walk(0, k, p, [])
    result: dict[Exponent, Fraction] = {}
    for key, c in out.items():
        if c:
            result[key] = c
    return Poly(2 * n, result)


def restrict_to_line(p: Poly, base: Sequence[RatLike], direction: Sequence[RatLike]) -> Poly:
    """Univariate polynomial t -> p(base + t*direction)."""
    if len(base) != p.nvars or len(direction) != p.nvars:
        raise ArityError("base/direction arity does not match polynomial")
    t = Poly.variable(1, 0)
    values = [Poly.const(1, _frac(b)) + t * _frac(d) for b, d in zip(base, direction)]
    return p.substitute(values)


# -- division, gcd, resultants -----------------------------------------


def _divmod_single(g: Poly, f: Poly, exact_only: bool = False) -> tuple[Poly, Poly] | None:
    """Divide g by the single divisor f in graded lex order.

    Returns (quotient, remainder) with g = q*f + r and no term of r
    divisible by the leading term of f.  With exact_only the call returns
    None as soon as the remainder is known to be nonzero.
    """
    g._check_same(f)
    if f.is_zero:
        raise DomainError("division by the zero polynomial")
    lt_e, lt_c = f.leading()

    def heap_key(e: Exponent) -> tuple[int, Exponent]:
        # heapq pops smallest, so negate to walk graded-lex from the top
        return (-sum(e), tuple(-k for k in e))

    work = dict(g.terms)
    heap = [(heap_key(e), e) for e in work]
    heapq.heapify(heap)
    quot: dict[Exponent, Fraction] = {}
    rem: dict[Exponent, Fraction] = {}
    while heap:
        e = heapq.heappop(heap)[-1]
        c = work.get(e)
        if not c:
            continue
        if all(a >= b for a, b in zip(e, lt_e)):
            q_e = tuple(a - b for a, b in zip(e, lt_e))
            q_c = c / lt_c
            quot[q_e] = quot.get(q_e, Fraction(0)) + q_c
            del work[e]
            for fe, fc in f.terms.items():
                if fe == lt_e:
                    continue
                te = tuple(a + b for a, b in zip(q_e, fe))
                prev = work.get(te, Fraction(0))
                nxt = prev - q_c * fc
                if nxt:
                    if not prev:
                        heapq.heappush(heap, (heap_key(te), te))
                    work[te] = nxt
                else:
                    work.pop(te, None)
        else:
            if exact_only:
                return None
            rem[e] = c
            del work[e]
    return Poly(g.nvars, quot), Poly(g.nvars, rem)


def divides(f: Poly, g: Poly) -> bool:
    """True iff f divides g exactly (f nonzero; g zero is divisible)."""
    if f.is_zero:
        raise DomainError("divisibility by the zero polynomial is undefined")
    if g.is_zero:
        return True
    if f.nvars != g.nvars:
        raise ArityError(f"mixed arities {f.nvars} and {g.nvars}")
    if f.degree() > g.degree():
        return False
    return _divmod_single(g, f, exact_only=True) is not None


def exact_div(g: Poly, f: Poly) -> Poly:
    """Quotient g/f when the division is exact; DomainError otherwise."""
    res = _divmod_single(g, f, exact_only=True)
    if res is None:
        raise DomainError("division is not exact")
    return res[0]


def rational_content(p: Poly) -> Fraction:
    """Positive rational c with p/c integer-coefficient and primitive.

    The sign is normalized separately; content of zero is defined as 1.
    """
    if p.is_zero:
        return Fraction(1)
    den = lcm(*(c.denominator for c in p.terms.values()))
    num = gcd(*(abs(c.numerator) for c in p.terms.values()))
    return Fraction(num, den)


def remove_content(p: Poly) -> Poly:
    """Scale to integer primitive form with positive graded-lex leading sign."""
    if p.is_zero:
        return p
    c = rational_content(p)
    out = p * (1 / c)
    if out.leading()[1] < 0:
        out = -out
    return out


def _content_and_primitive(p: Poly, var: int) -> tuple[Poly, Poly]:
    coeffs = [c for c in p.coeffs_in(var) if not c.is_zero]
    cont = Poly.zero(p.nvars)
    for c in coeffs:
        cont = poly_gcd(cont, c)
        if cont.degree() == 0:
            cont = remove_content(cont)
            break
    return cont, exact_div(p, cont)


def _pseudo_reduce(a: Poly, b: Poly, var: int) -> Poly:
    """Reduce a by b in var, multiplying by powers of b's leading coefficient.

    Output agrees with the classical pseudo-remainder up to a unit times a
    power of that leading coefficient, which is all a primitive PRS needs.
    """
    db = b.degree_in(var)
    b_coeffs = b.coeffs_in(var)
    lb = b_coeffs[db]
    r = a
    while not r.is_zero:
        dr = r.degree_in(var)
        if dr < db:
            break
        lr = r.coeffs_in(var)[dr]
        xshift = Poly(r.nvars, {tuple(dr - db if i == var else 0 for i in range(r.nvars)): Fraction(1)})
        r = r * lb - b * lr * xshift
    return r


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Greatest common divisor over Q, integer primitive, positive leading sign.

    Multivariate gcd by the classical primitive remainder sequence: recurse
    on contents with respect to the highest variable present, run the PRS on
    the primitive parts.
    """
    if f.is_zero and g.is_zero:
        return Poly.zero(f.nvars)
    if f.is_zero:
        return remove_content(g)
    if g.is_zero:
        return remove_content(f)
    f._check_same(g)
    if f.degree() == 0 or g.degree() == 0:
        return Poly.const(f.nvars, 1)
    fv, gv = f.vars_used(), g.vars_used()
    var = max(max(fv, default=-1), max(gv, default=-1))
    f_has, g_has = var in fv, var in gv
    if f_has and not g_has:
        cont_f, _ = _content_and_primitive(f, var)
        return poly_gcd(cont_f, g)
    if g_has and not f_has:
        cont_g, _ = _content_and_primitive(g, var)
        return poly_gcd(f, cont_g)
    cont_f, prim_f = _content_and_primitive(f, var)
    cont_g, prim_g = _content_and_primitive(g, var)
    cont = poly_gcd(cont_f, cont_g)
    a, b = prim_f, prim_g
    if a.degree_in(var) < b.degree_in(var):
        a, b = b, a
    while not b.is_zero:
        r = _pseudo_reduce(a, b, var)
        if r.is_zero:
            a, b = b, r
            break
        _, r = _content_and_primitive(r, var)
        a, b = b, r
    return remove_content(cont * a)


def square_free_part(p: Poly, hints: Iterable[Poly] = ()) -> Poly:
    """Product of the distinct irreducible factors of p.

    Computed as p / gcd(p, all partial derivatives).  The optional hints are
    candidate repeated factors stripped first by exact trial division; a
    hint h with h^k | p and k >= 2 is reduced to a single copy, which leaves
    the radical unchanged and shrinks the gcd workload.
    """
    if p.is_zero:
        raise DomainError("square-free part of the zero polynomial is undefined")
    if p.degree() == 0:
        return Poly.const(p.nvars, 1)
    work = remove_content(p)
    for h in hints:
        if h.is_zero or h.degree() < 1 or h.nvars != p.nvars:
            continue
        count = 0
        while True:
            res = _divmod_single(work, h, exact_only=True)
            if res is None:
                break
            work = res[0]
            count += 1
        if count >= 1:
            work = remove_content(work * h)
    g = work
    for var in work.vars_used():
        g = poly_gcd(g, work.diff(var))
        if g.degree() == 0:
            break
    if g.degree() == 0:
        return remove_content(work)
    return remove_content(exact_div(work, g))


def is_square_free(p: Poly) -> bool:
    """True iff p has no repeated factor."""
    if p.is_zero:
        return False
    if p.degree() == 0:
        return True
    g = p
    for var in p.vars_used():
        g = poly_gcd(g, p.diff(var))
        if g.degree() == 0:
            return True
    return g.degree() == 0


def _det_bareiss(mat: list[list[Poly]], nvars: int) -> Poly:
    """Fraction-free determinant of a square matrix of polynomials."""
    n = len(mat)
    if n == 0:
        return Poly.const(nvars, 1)
    m = [row[:] for row in mat]
    sign = 1
    prev = Poly.const(nvars, 1)
    for k in range(n - 1):
        if m[k][k].is_zero:
            pivot = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
            if pivot is None:
                return Poly.zero(nvars)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev) if prev.degree() > 0 else num * (1 / prev.constant_value())
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign == 1 else -result


def matrix_determinant(mat: list[list[Poly]], nvars: int) -> Poly:
    """Exact determinant of a square matrix of polynomials (Bareiss)."""
    if any(len(row) != len(mat) for row in mat):
        raise DomainError("determinant needs a square matrix")
    return _det_bareiss(mat, nvars)


def sylvester_resultant(p: Poly, q: Poly, var: int) -> Poly:
    """Resultant of p and q with respect to one variable.

    Both inputs must have positive degree in var.  The result is the
    determinant of the Sylvester matrix, a polynomial in the remaining
    variables (still carried with the same arity, var-degree zero).
    """
    p._check_same(q)
    dp, dq = p.degree_in(var), q.degree_in(var)
    if dp < 1 or dq < 1:
        raise DomainError("resultant needs positive degree in the eliminated variable")
    a = p.coeffs_in(var)
    b = q.coeffs_in(var)
    n = dp + dq
    zero = Poly.zero(p.nvars)
    mat: list[list[Poly]] = []
    for i in range(dq):
        row = [zero] * n
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        mat.append(row)
    for i in range(dp):
        row = [zero] * n
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        mat.append(row)
    return _det_bareiss(mat, p.nvars)
