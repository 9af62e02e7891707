# Normal forms in PGL(3, F_q(t)): every invertible matrix class factors as
# gamma . diag(t^m, t^n, 1) . w with a polynomial-group gamma, a compact w
# and unique exponents m >= n >= 0.  The reducer returns the witnesses, and
# verify_witness re-multiplies them as an independent certificate.

import random

from a2quotient import ProjMat, reduce_matrix, verify_witness
from a2quotient.reduction import random_compact, random_modular

q = 2
rng = random.Random(0)

print("== a matrix already in normal form ==")
g = ProjMat.from_strings(q, [["t^2", "0", "0"], ["0", "t", "0"], ["0", "0", "1"]])
r = reduce_matrix(g)
print(f"exponents: (m, n) = ({r.m}, {r.n}); verified: {verify_witness(r, g)}")

print("\n== something messier: fractional entries ==")
g = ProjMat.from_strings(q, [
    ["(t^2+1)/(t)", "1", "0"],
    ["1/t", "t", "1"],
    ["0", "1", "1"],
])
r = reduce_matrix(g)
print(f"exponents: (m, n) = ({r.m}, {r.n})")
print(f"gamma = {r.gamma}")
print(f"w     = {r.w}")
print(f"verified: {verify_witness(r, g)}")

print("\n== orbit invariance: conjugating by random group elements ==")
base = ProjMat.diagonal(q, [3, 1, 0])
for trial in range(5):
    gamma = random_modular(q, 3, rng)
    w = random_compact(q, 3, rng)
    r = reduce_matrix(gamma @ base @ w)
    print(f"trial {trial}: recovered (m, n) = ({r.m}, {r.n}), "
          f"witness ok: {verify_witness(r, gamma @ base @ w)}")

print("\n== the 2x2 case has a single exponent ==")
g2 = ProjMat.from_strings(q, [["1/t", "1"], ["1", "t^3+t"]])
r2 = reduce_matrix(g2)
print(f"m = {r2.m}, verified: {verify_witness(r2, g2)}")
