"""Normal forms for projective matrix classes over F_q(t).

Every invertible 2x2 or 3x3 matrix class g over F_q(t) factors as

    g  =  gamma . diag(t^m, t^n, 1) . w        (projectively)

with gamma in the modular group PGL(d, F_q[t]), w in the maximal compact
PGL(d, O) (entries of valuation >= 0, determinant of valuation 0), and a
unique exponent pair m >= n >= 0 (a single exponent for d = 2).  The
reduction is constructive: row operations over F_q[t] act on the left,
column operations over the local ring O on the right, and the two witness
factors are accumulated exactly, so results carry a certificate that
``verify_witness`` checks independently.

The engine is a column echelon pass over O (minimal-valuation pivoting,
lowest-index tie break) followed by alternating 2x2 block reductions.  A
block whose diagonal t-exponents are out of order is handled by the
swap-and-invert chain built on the continued-fraction step ``gauss_map``;
the exponent gap shrinks by at least two per step, which gives termination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Poly, RatFunc, nth_root

MAX_BLOCK_STEPS = 10 ** 4


class Singular(ValueError):
    """Input matrix has determinant zero."""


class ReductionStalled(RuntimeError):
    """Iteration guard tripped; indicates an implementation bug."""


@dataclass(frozen=True)
class ProjMat:
    """Invertible d x d matrix over F_q(t) taken modulo scalars (d in {2, 3})."""

    entries: tuple[tuple[RatFunc, ...], ...]

    def __post_init__(self):
        d = len(self.entries)
        if d not in (2, 3) or any(len(row) != d for row in self.entries):
            raise ValueError("entries must form a 2x2 or 3x3 matrix")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def q(self) -> int:
        return self.entries[0][0].q

    @classmethod
    def from_rows(cls, rows) -> "ProjMat":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, q: int, dim: int) -> "ProjMat":
        one, zero = RatFunc.one(q), RatFunc.zero(q)
        return cls.from_rows([[one if i == j else zero for j in range(dim)]
                              for i in range(dim)])

    @classmethod
    def diagonal(cls, q: int, powers) -> "ProjMat":
        """diag(t^k) for a list of integer exponents."""
        dim = len(powers)
        zero = RatFunc.zero(q)
        return cls.from_rows([[RatFunc.t_power(q, powers[i]) if i == j else zero
                               for j in range(dim)] for i in range(dim)])

    @classmethod
    def from_strings(cls, q: int, rows) -> "ProjMat":
        from .algebra import parse_ratfunc
        return cls.from_rows([[parse_ratfunc(q, e) for e in row] for row in rows])

    def __matmul__(self, other: "ProjMat") -> "ProjMat":
        return ProjMat.from_rows(_matmul(self.entries, other.entries))

    def scaled(self, lam: RatFunc) -> "ProjMat":
        return ProjMat.from_rows([[lam * e for e in row] for row in self.entries])

    def det(self) -> RatFunc:
        return _det(self.entries)

    def min_valuation(self):
        return min(e.valuation() for row in self.entries for e in row)

    def proj_eq(self, other: "ProjMat") -> bool:
        """Equality as projective classes: other = lambda * self."""
        if self.dim != other.dim:
            return False
        lam = None
        for i in range(self.dim):
            for j in range(self.dim):
                a, b = self.entries[i][j], other.entries[i][j]
                if a.is_zero != b.is_zero:
                    return False
                if not a.is_zero:
                    r = b / a
                    if lam is None:
                        lam = r
                    elif r != lam:
                        return False
        return lam is not None

    def __str__(self) -> str:
        return ";".join(",".join(str(e) for e in row) for row in self.entries)


def _matmul(A, B):
    d = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(1, d)),
                 start=A[i][0] * B[0][j]) for j in range(d)] for i in range(d)]


def _det(E) -> RatFunc:
    if len(E) == 2:
        return E[0][0] * E[1][1] - E[0][1] * E[1][0]
    a, b, c = E[0]
    d, e, f = E[1]
    g, h, i = E[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@dataclass(frozen=True)
class ReductionResult:
    """Normal-form exponents plus the two verified group witnesses.

    For dim 2 the single exponent lives in ``m`` and ``n`` is None.
    The defining relation, checked by ``verify_witness``, is
    input = gamma . diag(t^m, t^n, 1) . w  as projective classes.
    """

    m: int
    n: int | None
    gamma: ProjMat
    w: ProjMat

    def normal_form(self, q: int) -> ProjMat:
        if self.n is None:
            return ProjMat.diagonal(q, [self.m, 0])
        return ProjMat.diagonal(q, [self.m, self.n, 0])


# ---------------------------------------------------------------------------
# group membership tests
# ---------------------------------------------------------------------------

def in_modular_group(g: ProjMat) -> bool:
    """Does the class contain a matrix over F_q[t] with unit determinant?

    Any qualifying rescaling lambda satisfies lambda^d = det(g) up to a
    constant, so the reduced determinant's numerator and denominator must
    both be d-th powers; the candidate lambda is then unique up to constants
    and the rescaled entries are checked directly.
    """
    d = g.det()
    if d.is_zero:
        return False
    r = g.dim
    a, b = d.num.monic(), d.den  # den already monic
    a1, b1 = nth_root(a, r), nth_root(b, r)
    if a1 is None or b1 is None:
        return False
    lam = RatFunc(b1, a1)  # rescale by b1/a1, i.e. divide by a1/b1
    h = g.scaled(lam)
    if any(not e.is_polynomial for row in h.entries for e in row):
        return False
    return h.det().is_constant and not h.det().is_zero


def in_maximal_compact(g: ProjMat) -> bool:
    """Does the class contain a matrix with all valuations >= 0 and
    determinant of valuation 0?

    Normalizing the minimal entry valuation to 0 is the only scalar freedom,
    so a single candidate decides membership.
    """
    if g.det().is_zero:
        return False
    mu = g.min_valuation()
    h = g.scaled(RatFunc.t_power(g.q, int(mu)))
    return h.det().valuation() == 0


# ---------------------------------------------------------------------------
# the reduction engine
# ---------------------------------------------------------------------------

class _Reducer:
    """Mutable state (X, gamma, w) with invariant  input = gamma . X . w.

    Row operations multiply X on the left by modular-group elementaries and
    fold the inverse into gamma; column operations multiply on the right by
    compact-group elementaries and fold the inverse into w.
    """

    def __init__(self, g: ProjMat):
        self.q = g.q
        self.d = g.dim
        self.X = [list(row) for row in g.entries]
        ident = ProjMat.identity(self.q, self.d).entries
        self.gamma = [list(row) for row in ident]
        self.w = [list(row) for row in ident]

    # row ops (left, modular group)
    def row_add(self, i: int, j: int, p: Poly) -> None:
        """row_i += p * row_j with p polynomial."""
        rp = RatFunc(p)
        self.X[i] = [self.X[i][k] + rp * self.X[j][k] for k in range(self.d)]
        for a in range(self.d):  # gamma <- gamma . E_ij(-p): col j -= p * col i
            self.gamma[a][j] = self.gamma[a][j] - rp * self.gamma[a][i]

    def row_swap(self, i: int, j: int) -> None:
        self.X[i], self.X[j] = self.X[j], self.X[i]
        for a in range(self.d):
            self.gamma[a][i], self.gamma[a][j] = self.gamma[a][j], self.gamma[a][i]

    # column ops (right, maximal compact)
    def col_add(self, j: int, i: int, c: RatFunc) -> None:
        """col_j += c * col_i with val(c) >= 0."""
        for a in range(self.d):
            self.X[a][j] = self.X[a][j] + c * self.X[a][i]
        for b in range(self.d):  # w <- E_ij(-c) . w: row i -= c * row j
            self.w[i][b] = self.w[i][b] - c * self.w[j][b]

    def col_swap(self, i: int, j: int) -> None:
        for a in range(self.d):
            self.X[a][i], self.X[a][j] = self.X[a][j], self.X[a][i]
        self.w[i], self.w[j] = self.w[j], self.w[i]

    def col_scale(self, j: int, u: RatFunc) -> None:
        """col_j *= u with val(u) = 0."""
        inv = u.inverse()
        for a in range(self.d):
            self.X[a][j] = self.X[a][j] * u
        self.w[j] = [inv * e for e in self.w[j]]

    # -- echelon pass over the local ring --------------------------------
    def triangularize(self) -> None:
        """Column-reduce to upper triangular, pivoting on the minimal
        valuation in each row from the bottom up."""
        for r in range(self.d - 1, 0, -1):
            pivot, best = None, None
            for c in range(r + 1):
                v = self.X[r][c].valuation()
                if not self.X[r][c].is_zero and (best is None or v < best):
                    pivot, best = c, v
            if pivot is None:
                raise Singular("zero row during reduction")
            if pivot != r:
                self.col_swap(pivot, r)
            for c in range(r):
                if not self.X[r][c].is_zero:
                    self.col_add(c, r, -(self.X[r][c] / self.X[r][r]))

    def normalize_diag(self, j: int) -> int:
        """Scale column j by a unit so X[j][j] is exactly t^k; returns k."""
        piv = self.X[j][j]
        if piv.is_zero:
            raise Singular("zero diagonal during reduction")
        _, k = piv.unit_power()
        self.col_scale(j, RatFunc.t_power(self.q, k) / piv)
        return k

    # -- 2x2 block pass ---------------------------------------------------
    def block_reduce(self, i: int, j: int) -> None:
        """Clear X[i][j] and order the (i, j) diagonal exponents, keeping X
        upper triangular at loop boundaries."""
        for _ in range(MAX_BLOCK_STEPS):
            ki = self.normalize_diag(i)
            kj = self.normalize_diag(j)
            a = self.X[i][j]
            if not a.is_zero:
                # drop the part divisible by t^ki over O (column op) ...
                c = (a / RatFunc.t_power(self.q, ki)).o_part()
                if not c.is_zero:
                    self.col_add(j, i, -c)
                a = self.X[i][j]
            if not a.is_zero:
                # ... and the polynomial multiples of t^kj (row op)
                p = (a / RatFunc.t_power(self.q, kj)).polynomial_part()
                if not p.is_zero:
                    self.row_add(i, j, -p)
                a = self.X[i][j]
            if a.is_zero:
                if ki >= kj:
                    return
                self.row_swap(i, j)
                self.col_swap(i, j)
                continue
            # leftover coupling forces ki < kj; swap-and-invert step
            c = self.X[i][i] / a  # valuation >= 1 by the degree window
            self.col_add(i, j, -c)
            self.row_swap(i, j)
        raise ReductionStalled("block reduction exceeded the step guard")

    def clear_upper_right(self) -> None:
        """With sorted exponents and zero couplings, X[0][2] reduces away."""
        k0 = self.normalize_diag(0)
        k2 = self.normalize_diag(2)
        a = self.X[0][2]
        if not a.is_zero:
            c = (a / RatFunc.t_power(self.q, k0)).o_part()
            if not c.is_zero:
                self.col_add(2, 0, -c)
            a = self.X[0][2]
        if not a.is_zero:
            p = (a / RatFunc.t_power(self.q, k2)).polynomial_part()
            if not p.is_zero:
                self.row_add(0, 2, -p)

    def exponents(self) -> list[int]:
        return [self.normalize_diag(j) for j in range(self.d)]


def reduce2(g: ProjMat) -> ReductionResult:
    """Normal form diag(t^m, 1) of an invertible 2x2 class, with witnesses."""
    if g.dim != 2:
        raise ValueError("reduce2 expects a 2x2 matrix")
    if g.det().is_zero:
        raise Singular("determinant is zero")
    r = _Reducer(g)
    r.triangularize()
    r.block_reduce(0, 1)
    k0, k1 = r.exponents()
    if not r.X[0][1].is_zero or k0 < k1:
        raise ReductionStalled("2x2 reduction left a coupling")
    return ReductionResult(m=k0 - k1, n=None,
                           gamma=ProjMat.from_rows(r.gamma),
                           w=ProjMat.from_rows(r.w))


def reduce3(g: ProjMat) -> ReductionResult:
    """Normal form diag(t^m, t^n, 1), m >= n >= 0, of an invertible 3x3 class."""
    if g.dim != 3:
        raise ValueError("reduce3 expects a 3x3 matrix")
    if g.det().is_zero:
        raise Singular("determinant is zero")
    r = _Reducer(g)
    r.triangularize()
    for _ in range(MAX_BLOCK_STEPS):
        r.block_reduce(0, 1)
        r.block_reduce(1, 2)
        k0, k1, k2 = r.exponents()
        if r.X[0][1].is_zero and r.X[1][2].is_zero and k0 >= k1 >= k2:
            break
    else:
        raise ReductionStalled("block alternation exceeded the step guard")
    r.clear_upper_right()
    if any(not r.X[i][j].is_zero for i in range(3) for j in range(3) if i != j):
        raise ReductionStalled("reduction left an off-diagonal entry")
    k0, k1, k2 = r.exponents()
    return ReductionResult(m=k0 - k2, n=k1 - k2,
                           gamma=ProjMat.from_rows(r.gamma),
                           w=ProjMat.from_rows(r.w))


def reduce_matrix(g: ProjMat) -> ReductionResult:
    return reduce2(g) if g.dim == 2 else reduce3(g)


def verify_witness(result: ReductionResult, g: ProjMat) -> bool:
    """Certificate check: witnesses lie in their groups and reassemble g."""
    if not in_modular_group(result.gamma):
        return False
    if not in_maximal_compact(result.w):
        return False
    product = result.gamma @ result.normal_form(g.q) @ result.w
    return product.proj_eq(g)


# ---------------------------------------------------------------------------
# constructive random sampling of the two groups (membership by construction)
# ---------------------------------------------------------------------------

def random_poly(q: int, rng, max_deg: int = 2) -> Poly:
    return Poly(q, [rng.randrange(q) for _ in range(rng.randrange(max_deg + 1) + 1)])


def random_modular(q: int, dim: int, rng, steps: int = 6, max_deg: int = 2) -> ProjMat:
    """Random product of elementary matrices over F_q[t]."""
    r = _Reducer(ProjMat.identity(q, dim))
    for _ in range(steps):
        kind = rng.randrange(3)
        i, j = rng.sample(range(dim), 2)
        if kind == 0:
            r.row_add(i, j, random_poly(q, rng, max_deg))
        elif kind == 1:
            r.row_swap(i, j)
        else:
            r.row_add(i, j, Poly.const(q, rng.randrange(1, q)))
    return ProjMat.from_rows(r.gamma)


def random_compact(q: int, dim: int, rng, steps: int = 6, max_deg: int = 2) -> ProjMat:
    """Random product of elementaries with valuations >= 0 and unit diagonal."""
    r = _Reducer(ProjMat.identity(q, dim))
    for _ in range(steps):
        kind = rng.randrange(3)
        i, j = rng.sample(range(dim), 2)
        if kind == 0:
            p = random_poly(q, rng, max_deg)
            extra = rng.randrange(3)
            c = RatFunc(p) / RatFunc.t_power(q, max(p.degree, 0) + extra)
            r.col_add(i, j, c)
        elif kind == 1:
            r.col_swap(i, j)
        else:
            p = random_poly(q, rng, max_deg)
            if p.is_zero:
                p = Poly.one(q)
            u = RatFunc(p) / RatFunc.t_power(q, p.degree)
            r.col_scale(i, u)
    return ProjMat.from_rows(r.w)
