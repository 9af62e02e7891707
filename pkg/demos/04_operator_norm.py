# The weighted operators are bounded with norm exactly q^2 + q + 1 (the
# constant function is a positive eigenfunction, so the bound is attained).
# Power iteration on the positive compression A- A+ over growing
# truncations approaches the bound from below, monotonically.

from a2quotient import GridFunction, L2Space
from a2quotient.operator import tri_size

import numpy as np

for q in (2, 3):
    bound = q * q + q + 1
    print(f"q = {q}: operator norm bound {bound}")
    print(f"  {'depth':>6} {'estimate':>18} {'gap':>12}")
    for depth in (5, 10, 20, 40, 80):
        est = L2Space(q, depth).norm_estimate(iters=200)
        print(f"  {depth:>6} {est:>18.12f} {bound - est:>12.3e}")
    print()

print("Rayleigh quotient of the constant function, the extremal vector:")
space = L2Space(2, 40)
ones = GridFunction(40, np.ones(tri_size(40)))
print(f"  <A+ 1, 1> / <1, 1> = {space.rayleigh(+1, ones).real:.12f}")

print("\nAdjointness in floating point (exact in rational arithmetic):")
defect = space.adjoint_defect(trials=30, exact=False)
print(f"  max |<A+ f, g> - <f, A- g>| over 30 random pairs: {defect:.3e}")
print(f"  exact-arithmetic defect: {L2Space(2, 20).adjoint_defect(trials=10)}")
