"""Raw enumeration oracle for stabilizer orders and intersections.

Independent of the package: polynomials are coefficient tuples, the
determinant is expanded by hand, and groups are counted by exhausting all
matrices whose (i,j) entry is a polynomial of degree <= e_i - e_j for the
exponent vector e = (m, n, 0) (negative bound = zero entry).  This checks
the counted stabilizer orders, and settles the bottom-to-interior edge
index q+1 by plain counting.
"""

import itertools

import pytest

from a2quotient.quotient import (
    Vertex, edge_coeff_from_stabilizers, stabilizer_order,
)


def poly_mul(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    return tuple(out)


def poly_add(a, b, q):
    n = max(len(a), len(b))
    return tuple(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q
                 for i in range(n))


def poly_neg(a, q):
    return tuple((-x) % q for x in a)


def det3(rows, q):
    (a, b, c), (d, e, f), (g, h, i) = rows
    t1 = poly_mul(a, poly_add(poly_mul(e, i, q), poly_neg(poly_mul(f, h, q), q), q), q)
    t2 = poly_mul(b, poly_add(poly_mul(d, i, q), poly_neg(poly_mul(f, g, q), q), q), q)
    t3 = poly_mul(c, poly_add(poly_mul(d, h, q), poly_neg(poly_mul(e, g, q), q), q), q)
    return poly_add(poly_add(t1, poly_neg(t2, q), q), t3, q)


def is_unit(p):
    return p and p[0] != 0 and all(x == 0 for x in p[1:])


def bounds_for(m, n):
    e = (m, n, 0)
    return [[e[i] - e[j] for j in range(3)] for i in range(3)]


def enumerate_count(q, bounds):
    """Number of projective classes of matrices with the given entry degree
    bounds and determinant a nonzero constant."""
    slots = []
    for i in range(3):
        for j in range(3):
            d = bounds[i][j]
            if d < 0:
                slots.append([(0,)])
            else:
                slots.append([tuple(c) for c in
                              itertools.product(range(q), repeat=d + 1)])
    total = 0
    for combo in itertools.product(*slots):
        rows = [combo[0:3], combo[3:6], combo[6:9]]
        if is_unit(det3(rows, q)):
            total += 1
    return total // (q - 1)


def meet(a, b):
    return [[min(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


class TestBruteForceOrders:
    @pytest.mark.parametrize("q,m,n", [
        (2, 0, 0), (2, 1, 0), (2, 1, 1), (2, 2, 1), (2, 2, 0), (2, 2, 2),
        (3, 0, 0), (3, 1, 0), (3, 1, 1), (3, 2, 1),
    ])
    def test_orders(self, q, m, n):
        assert enumerate_count(q, bounds_for(m, n)) == stabilizer_order(q, m, n)

    def test_pgl3_f2(self):
        assert enumerate_count(2, bounds_for(0, 0)) == 168


class TestBruteForceIntersections:
    @pytest.mark.parametrize("q", [2, 3])
    def test_first_shell_edges(self, q):
        cases = [((0, 0), (1, 0)), ((0, 0), (1, 1)), ((1, 0), (1, 1)),
                 ((1, 1), (2, 1)), ((1, 0), (2, 0)), ((1, 1), (2, 2))]
        for (m1, n1), (m2, n2) in cases:
            inter = enumerate_count(q, meet(bounds_for(m1, n1), bounds_for(m2, n2)))
            idx = stabilizer_order(q, m1, n1) / inter
            assert idx == edge_coeff_from_stabilizers(
                q, Vertex(m1, n1), Vertex(m2, n2))

    @pytest.mark.parametrize("q", [2, 3])
    def test_contested_edge_is_q_plus_1(self, q):
        # v(1,0) -> v(2,1): raw enumeration settles the index
        inter = enumerate_count(q, meet(bounds_for(1, 0), bounds_for(2, 1)))
        assert stabilizer_order(q, 1, 0) == (q + 1) * inter

    def test_horizontal_edge_value(self):
        # |G(2,1) ∩ G(2,2)| = (q-1)^2 q^(2m+2) at q=2, m=2: raw count 64
        q = 2
        inter = enumerate_count(q, meet(bounds_for(2, 1), bounds_for(2, 2)))
        assert inter == (q - 1) ** 2 * q ** 6
        assert stabilizer_order(q, 2, 2) / inter == q * q + q
