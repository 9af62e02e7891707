import random

import pytest

from a2quotient.algebra import Poly, RatFunc
from a2quotient.reduction import (
    ProjMat, Singular, in_maximal_compact, in_modular_group, random_compact,
    random_modular, reduce2, reduce3, verify_witness,
)


def diag(q, *powers):
    return ProjMat.diagonal(q, list(powers))


class TestMembership:
    def test_identity(self):
        for q in (2, 3, 5):
            for d in (2, 3):
                eye = ProjMat.identity(q, d)
                assert in_modular_group(eye)
                assert in_maximal_compact(eye)

    def test_diag_t_in_neither(self):
        g = diag(2, 1, 0, 0)
        assert not in_modular_group(g)
        assert not in_maximal_compact(g)

    def test_scalar_class_of_identity(self):
        q = 3
        g = ProjMat.identity(q, 3).scaled(RatFunc.t_power(q, -1))
        assert in_maximal_compact(g)
        assert in_modular_group(g)  # scalar t^-1 I ~ I

    def test_modular_products(self):
        rng = random.Random(100)
        for q in (2, 3, 5):
            for _ in range(34):
                g = random_modular(q, 3, rng)
                assert in_modular_group(g)
                assert in_modular_group(g.scaled(RatFunc.t_power(q, 2)))

    def test_compact_products(self):
        rng = random.Random(0xBEEF)
        for q in (2, 3, 5):
            for _ in range(34):
                w = random_compact(q, 3, rng)
                assert in_maximal_compact(w)
                assert in_maximal_compact(w.scaled(RatFunc.t_power(q, -3)))

    def test_cross_membership_fails(self):
        # a genuinely fractional compact element is not modular and vice versa
        q = 2
        w = ProjMat.from_strings(q, [["1", "1/t"], ["0", "1"]])
        assert in_maximal_compact(w) and not in_modular_group(w)
        g = ProjMat.from_strings(q, [["1", "t"], ["0", "1"]])
        assert in_modular_group(g) and not in_maximal_compact(g)


class TestReduce2:
    def test_identity_and_normal_forms(self):
        q = 2
        r = reduce2(ProjMat.identity(q, 2))
        assert (r.m, r.n) == (0, None)
        assert verify_witness(r, ProjMat.identity(q, 2))
        r = reduce2(diag(q, 3, 0))
        assert r.m == 3
        assert verify_witness(r, diag(q, 3, 0))

    def test_inverted_diagonal(self):
        q = 3
        r = reduce2(diag(q, 0, 2))  # class of diag(t^-2, 1) ~ diag(t^2,1) swapped
        assert r.m == 2

    def test_singular(self):
        q = 2
        z = RatFunc.zero(q)
        one = RatFunc.one(q)
        with pytest.raises(Singular):
            reduce2(ProjMat.from_rows([[one, one], [one, one]]))
        with pytest.raises(Singular):
            reduce2(ProjMat.from_rows([[z, z], [one, one]]))

    @pytest.mark.parametrize("q", [2, 3])
    def test_roundtrip_200(self, q):
        rng = random.Random(300 + q)
        for _ in range(100):
            k = rng.randrange(6)
            gamma = random_modular(q, 2, rng)
            w = random_compact(q, 2, rng)
            g = gamma @ diag(q, k, 0) @ w
            r = reduce2(g)
            assert r.m == k
            assert verify_witness(r, g)


class TestReduce3:
    def test_normal_forms_idempotent(self):
        q = 2
        for m in range(0, 7):
            for n in range(0, m + 1):
                r = reduce3(diag(q, m, n, 0))
                assert (r.m, r.n) == (m, n)
                assert verify_witness(r, diag(q, m, n, 0))

    def test_identity(self):
        r = reduce3(ProjMat.identity(3, 3))
        assert (r.m, r.n) == (0, 0)

    def test_unsorted_diagonal(self):
        q = 2
        r = reduce3(diag(q, 0, 2, 1))
        assert (r.m, r.n) == (2, 1)
        r = reduce3(diag(q, -1, 0, 0))  # ~ diag(1, t, t) ~ diag(t, t, 1) -> (1,1)
        assert (r.m, r.n) == (1, 1)

    def test_singular(self):
        q = 2
        one = RatFunc.one(q)
        with pytest.raises(Singular):
            reduce3(ProjMat.from_rows([[one] * 3, [one] * 3, [one] * 3]))

    def test_scalar_invariance(self):
        q = 3
        rng = random.Random(77)
        for _ in range(20):
            gamma = random_modular(q, 3, rng)
            w = random_compact(q, 3, rng)
            g = gamma @ diag(q, 3, 1, 0) @ w
            lam = RatFunc(Poly(q, [rng.randrange(1, q), 1]))  # t + c
            r1, r2 = reduce3(g), reduce3(g.scaled(lam))
            assert (r1.m, r1.n) == (r2.m, r2.n) == (3, 1)

    def test_orbit_invariance(self):
        rng = random.Random(88)
        for q in (2, 3):
            base = diag(q, 2, 1, 0)
            for _ in range(25):
                gamma = random_modular(q, 3, rng)
                w = random_compact(q, 3, rng)
                r = reduce3(gamma @ base @ w)
                assert (r.m, r.n) == (2, 1)
                assert verify_witness(r, gamma @ base @ w)

    @pytest.mark.parametrize("q", [2, 3])
    def test_roundtrip_batch(self, q):
        rng = random.Random(500 + q)
        for _ in range(50):
            m = rng.randrange(6)
            n = rng.randrange(m + 1)
            gamma = random_modular(q, 3, rng)
            w = random_compact(q, 3, rng)
            g = gamma @ diag(q, m, n, 0) @ w
            r = reduce3(g)
            assert (r.m, r.n) == (m, n)
            assert verify_witness(r, g)


class TestFuzzArbitraryMatrices:
    """Random rational-entry matrices, not built from group factors: every
    invertible class must reduce with a valid witness."""

    @staticmethod
    def random_entry(q, rng):
        num = Poly(q, [rng.randrange(q) for _ in range(rng.randrange(4) + 1)])
        den = Poly(q, [rng.randrange(q) for _ in range(rng.randrange(3))] + [1])
        return RatFunc(num, den)

    @pytest.mark.parametrize("q", [2, 3])
    def test_fuzz_3x3(self, q):
        rng = random.Random(600 + q)
        done = 0
        while done < 60:
            g = ProjMat.from_rows(
                [[self.random_entry(q, rng) for _ in range(3)] for _ in range(3)])
            if g.det().is_zero:
                continue
            r = reduce3(g)
            assert r.m >= r.n >= 0
            assert verify_witness(r, g)
            done += 1

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_fuzz_2x2(self, q):
        rng = random.Random(700 + q)
        done = 0
        while done < 60:
            g = ProjMat.from_rows(
                [[self.random_entry(q, rng) for _ in range(2)] for _ in range(2)])
            if g.det().is_zero:
                continue
            r = reduce2(g)
            assert r.m >= 0
            assert verify_witness(r, g)
            done += 1

    def test_uniqueness_against_double_reduction(self):
        # reducing the assembled normal form again returns the same exponents
        rng = random.Random(71)
        q = 2
        for _ in range(20):
            g = ProjMat.from_rows(
                [[self.random_entry(q, rng) for _ in range(3)] for _ in range(3)])
            if g.det().is_zero:
                continue
            r = reduce3(g)
            again = reduce3(r.gamma @ r.normal_form(q) @ r.w)
            assert (again.m, again.n) == (r.m, r.n)


class TestVerifyWitness:
    def test_tampered_gamma(self):
        q = 2
        rng = random.Random(9)
        g = random_modular(q, 3, rng) @ diag(q, 2, 1, 0) @ random_compact(q, 3, rng)
        r = reduce3(g)
        assert verify_witness(r, g)
        rows = [list(row) for row in r.gamma.entries]
        rows[0][1] = rows[0][1] + RatFunc.one(q)  # perturb one entry
        bad = type(r)(m=r.m, n=r.n, gamma=ProjMat.from_rows(rows), w=r.w)
        assert not verify_witness(bad, g)

    def test_wrong_exponents(self):
        q = 2
        g = diag(q, 2, 1, 0)
        r = reduce3(g)
        bad = type(r)(m=r.m + 1, n=r.n, gamma=r.gamma, w=r.w)
        assert not verify_witness(bad, g)
