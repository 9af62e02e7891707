"""The weighted quotient complex on the vertex triangle {0 <= n <= m}.

Vertices v_{m,n} stand for the classes of diag(t^m, t^n, 1).  The module
carries everything exact: colors mod 3, stabilizer orders, vertex weights,
the adjacency rule, and the coefficient rows of the two colored operators

    (A+ f)(v) = sum c+(v, v') f(v'),      (A- f)(v) = sum c-(v, v') f(v'),

where the coefficient on an edge is the entering degree w(edge)/w(source).
Rows always sum to q^2 + q + 1 in both directions.

Coefficient tables (integers):

    A+ : v00 -> (v10, q^2+q+1)
         v_m0 -> (v_{m+1,0}, 1), (v_m1, q^2+q)
         v_mm -> (v_{m-1,m-1}, q^2), (v_{m+1,m}, q+1)
         interior -> (v_{m-1,n-1}, q^2), (v_{m,n+1}, q), (v_{m+1,n}, 1)

    A- : v00 -> (v11, q^2+q+1)
         v_m0 -> (v_{m-1,0}, q^2), (v_{m+1,1}, q+1)
         v_mm -> (v_{m,m-1}, q^2+q), (v_{m+1,m+1}, 1)
         interior -> (v_{m-1,n}, q^2), (v_{m,n-1}, q), (v_{m+1,n+1}, 1)

An independent cross-check recomputes each coefficient as a stabilizer
index |G_u| / |G_u ∩ G_v| by exact counting from the degree-bound
parametrization of the stabilizers (upper-triangular-type groups whose
entries are polynomials of bounded degree).  Note the index on the edge
v_{m,0} -> v_{m+1,1} is q+1: the intersection there loses the lower 2x2
block freedom of the bottom-row stabilizer, so it is strictly smaller than
the full stabilizer even though the degree bounds alone would not shrink.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import validate_q


class NotAdjacent(ValueError):
    """The two vertices do not span an edge."""


@dataclass(frozen=True, order=True)
class Vertex:
    m: int
    n: int

    def __post_init__(self):
        if not (0 <= self.n <= self.m):
            raise ValueError(f"vertex requires 0 <= n <= m, got ({self.m}, {self.n})")

    def __iter__(self):
        return iter((self.m, self.n))

    def __str__(self):
        return f"v({self.m},{self.n})"


def color(v: Vertex) -> int:
    """Color in Z/3; the raising operator steps color by +1."""
    return (v.m + v.n) % 3


def stabilizer_order(q: int, m: int, n: int) -> int:
    """Exact order of the stabilizer of diag(t^m, t^n, 1), by case."""
    validate_q(q)
    if not 0 <= n <= m:
        raise ValueError("need 0 <= n <= m")
    if m == 0:
        return q ** 3 * (q + 1) * (q * q + q + 1) * (q - 1) ** 2
    if n == 0 or n == m:
        return q ** (2 * m + 3) * (q + 1) * (q - 1) ** 2
    return q ** (2 * m + 3) * (q - 1) ** 2


@lru_cache(maxsize=None)
def vertex_weight(q: int, m: int, n: int) -> Fraction:
    """Weight q^3(q+1)(q-1)^2 / |stabilizer|, in lowest terms."""
    return Fraction(q ** 3 * (q + 1) * (q - 1) ** 2, stabilizer_order(q, m, n))


def neighbors(v: Vertex) -> list[Vertex]:
    """All vertices joined to v by an edge (no truncation)."""
    m, n = v
    if m == 0:
        deltas = [(1, 0), (1, 1)]
    elif n == 0:
        deltas = [(1, 0), (-1, 0), (0, 1), (1, 1)]
    elif n == m:
        deltas = [(1, 0), (0, -1), (1, 1), (-1, -1)]
    else:
        deltas = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]
    return [Vertex(m + dm, n + dn) for dm, dn in deltas]


def is_adjacent(u: Vertex, v: Vertex) -> bool:
    return v in neighbors(u)


def coeffs_plus(q: int, v: Vertex) -> list[tuple[Vertex, int]]:
    """Row of the color-raising operator at v (untruncated)."""
    m, n = v
    if m == 0:
        return [(Vertex(1, 0), q * q + q + 1)]
    if n == 0:
        return [(Vertex(m + 1, 0), 1), (Vertex(m, 1), q * q + q)]
    if n == m:
        return [(Vertex(m - 1, m - 1), q * q), (Vertex(m + 1, m), q + 1)]
    return [(Vertex(m - 1, n - 1), q * q), (Vertex(m, n + 1), q),
            (Vertex(m + 1, n), 1)]


def coeffs_minus(q: int, v: Vertex) -> list[tuple[Vertex, int]]:
    """Row of the color-lowering operator at v (untruncated)."""
    m, n = v
    if m == 0:
        return [(Vertex(1, 1), q * q + q + 1)]
    if n == 0:
        return [(Vertex(m - 1, 0), q * q), (Vertex(m + 1, 1), q + 1)]
    if n == m:
        return [(Vertex(m, m - 1), q * q + q), (Vertex(m + 1, m + 1), 1)]
    return [(Vertex(m - 1, n), q * q), (Vertex(m, n - 1), q),
            (Vertex(m + 1, n + 1), 1)]


def coeffs(q: int, v: Vertex, sign: int) -> list[tuple[Vertex, int]]:
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return coeffs_plus(q, v) if sign == +1 else coeffs_minus(q, v)


# ---------------------------------------------------------------------------
# stabilizer counting from degree bounds (the independent route)
# ---------------------------------------------------------------------------

def _degree_bounds(m: int, n: int) -> tuple[tuple[int | None, ...], ...]:
    """Entry (i, j) may be any polynomial of degree <= e_i - e_j, where
    e = (m, n, 0); a negative bound forces the entry to vanish."""
    e = (m, n, 0)
    return tuple(tuple(e[i] - e[j] if e[i] - e[j] >= 0 else None
                       for j in range(3)) for i in range(3))


def _meet(a, b):
    return tuple(tuple(None if x is None or y is None else min(x, y)
                       for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _gl_order(q: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= q ** d - q ** i
    return out


def _count_pattern(q: int, pat) -> int:
    """Number of invertible matrices over F_q[t] respecting the degree
    bounds, with determinant a nonzero constant, divided by the q-1 scalars.

    The bounded entries split into a constant part and free higher
    coefficients; for every pattern that arises from vertices and edges the
    determinant only sees the constants, whose support is one of: upper
    triangular, an upper or lower 2x2 block, or everything.
    """
    lower = {(i, j) for i in range(3) for j in range(3)
             if i > j and pat[i][j] is not None}
    upper_consts = [(i, j) for i in range(3) for j in range(3)
                    if i < j and pat[i][j] is not None]
    if lower == {(1, 0), (2, 0), (2, 1)}:
        g0 = _gl_order(q, 3)
        block = {(0, 1), (0, 2), (1, 2)}
    elif lower == {(1, 0)}:
        g0 = _gl_order(q, 2) * (q - 1)
        block = {(0, 1)}
    elif lower == {(2, 1)}:
        g0 = (q - 1) * _gl_order(q, 2)
        block = {(1, 2)}
    elif not lower:
        g0 = (q - 1) ** 3
        block = set()
    else:
        raise ValueError(f"unexpected constant support {lower}")
    free_consts = sum(1 for ij in upper_consts if ij not in block)
    higher = sum(pat[i][j] for i in range(3) for j in range(3)
                 if pat[i][j] is not None)
    return g0 * q ** free_consts * q ** higher // (q - 1)


def stabilizer_order_counted(q: int, m: int, n: int) -> int:
    """Stabilizer order recomputed by counting; must match the closed form."""
    validate_q(q)
    return _count_pattern(q, _degree_bounds(m, n))


def edge_coeff_from_stabilizers(q: int, u: Vertex, v: Vertex) -> Fraction:
    """Operator coefficient on the edge u -> v as the index
    |G_u| / |G_u ∩ G_v|, counted exactly from the degree bounds."""
    if not is_adjacent(u, v):
        raise NotAdjacent(f"{u} and {v} are not adjacent")
    pat = _meet(_degree_bounds(u.m, u.n), _degree_bounds(v.m, v.n))
    return Fraction(stabilizer_order_counted(q, u.m, u.n), _count_pattern(q, pat))


# ---------------------------------------------------------------------------
# truncated complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffRow:
    """One operator row at a vertex of the truncated complex.

    ``terms`` lie inside the truncation; ``masked`` lists the coefficients
    whose target falls beyond the depth, so boundary error stays visible
    instead of being silently dropped.
    """

    terms: tuple[tuple[Vertex, int], ...]
    masked: tuple[tuple[Vertex, int], ...]


class QuotientComplex:
    """Truncated weighted complex at prime q, depth M >= 2."""

    def __init__(self, q: int, depth: int):
        validate_q(q)
        if depth < 2:
            raise ValueError("depth must be >= 2")
        self.q = q
        self.depth = depth

    def vertices(self) -> list[Vertex]:
        return [Vertex(m, n) for m in range(self.depth + 1) for n in range(m + 1)]

    def weight(self, v: Vertex) -> Fraction:
        return vertex_weight(self.q, v.m, v.n)

    def color(self, v: Vertex) -> int:
        return color(v)

    @lru_cache(maxsize=None)
    def _row(self, v: Vertex, sign: int) -> CoeffRow:
        inside, outside = [], []
        for tgt, c in coeffs(self.q, v, sign):
            (inside if tgt.m <= self.depth else outside).append((tgt, c))
        return CoeffRow(terms=tuple(inside), masked=tuple(outside))

    def row(self, v: Vertex, sign: int) -> CoeffRow:
        if v.m > self.depth:
            raise ValueError("vertex beyond truncation depth")
        return self._row(v, sign)

    def is_masked(self, v: Vertex, sign: int) -> bool:
        return bool(self.row(v, sign).masked)
