"""Sharp interpolation inequality and symmetry monotonicities at work.

The quartic norm of any field is bounded by the sharp constant built from
the free ground state's mass; rearrangement can only lower trap and
kinetic energies; taking the modulus can only lower the fractional
seminorm.

Run:  python3 demos/05_inequalities.py
"""

import numpy as np

from fgpe import (
    ProblemParams,
    energy,
    gn_constant,
    gn_quotient,
    hardy_constant,
    make_grid,
    modulus_seminorm_check,
    schwarz_rearrange,
    solve_ground_state,
)
from fgpe.verify import random_band_limited

grid = make_grid(16.0, 256)
rng = np.random.default_rng(7)
s = 0.85
res = solve_ground_state(s, make_grid(48.0, 512), tol=1e-10)
c0 = gn_constant(s, res.Ns_star)
print(f"sharp constant at s={s}: C0 = {c0:.6f} "
      f"(the ground state attains it: quotient = {gn_quotient(res.Q, s):.6f})")

worst = -np.inf
for _ in range(300):
    u = random_band_limited(grid, rng)
    worst = max(worst, gn_quotient(u, s) / c0)
print(f"largest quotient/C0 over 300 random fields: {worst:.3f}  (never above 1)")

u = random_band_limited(grid, rng, nonnegative=True)
ustar = schwarz_rearrange(u)
p = ProblemParams(s=s, N=1.0)
b, a = energy(u, p), energy(ustar, p)
print("\nrearrangement of a random nonnegative field:")
print(f"  trap term  {b.potential_term:.5f} -> {a.potential_term:.5f}")
print(f"  kinetic    {b.kinetic:.5f} -> {a.kinetic:.5f}")
print(f"  total      {b.total:.5f} -> {a.total:.5f}   (never increases)")

v = random_band_limited(grid, rng)
lhs, rhs = modulus_seminorm_check(v, s)
print(f"\nmodulus contraction: seminorm^2 |u| = {lhs:.5f} <= {rhs:.5f} = seminorm^2 u")

print("\nHardy constants (vanish as s -> 1, approach 1 as s -> 0):")
for sv in (0.6, 0.75, 0.9, 0.99):
    print(f"  s={sv:.2f}: C_s = {hardy_constant(sv):.6f}")
