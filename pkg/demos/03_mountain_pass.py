"""The second critical point: a mountain-pass saddle on the mass sphere.

The dilation path t -> t phi(t x) through the rescaled free profile
crosses the kinetic-ball boundary, which traps a saddle between the local
minimizer and the collapse region.  The solver auto-sizes its box to the
predicted concentration scale eps ~ t_s^(-1/(2s)).

Run:  python3 demos/03_mountain_pass.py
"""

import numpy as np

from fgpe import (
    ProblemParams,
    dilation_path_profile,
    make_grid,
    mountain_pass_bracket,
    solve_ground_state,
    solve_mountain_pass,
)

grid = make_grid(48.0, 512)
n1 = solve_ground_state(1.0, grid).Ns_star
s = 0.90
q = solve_ground_state(s, grid)
p = ProblemParams(s=s, N=0.5 * n1)

br = mountain_pass_bracket(q, p)
print(f"saddle level bracket: [{br.lower:.6f}, {br.upper:.6f}]")
print(f"path maximizer rho0 = {br.rho_max:.3f} (trap-free value {br.rho_one:.3f})")

print("\nenergy along the dilation path (discrete vs closed form):")
for row in dilation_path_profile(q, p, np.logspace(-0.3, 0.8, 7)):
    disc = "   aliased " if row["energy_discrete"] is None else f"{row['energy_discrete']:11.5f}"
    print(f"  t={row['t']:8.3f}  discrete {disc}  closed {row['energy_closed']:11.5f}")

rep = solve_mountain_pass(p, q, n_points=512, tol=1e-4)
b = rep.breakdown
print(f"\nsaddle solve: {rep.classification} on a box of extent "
      f"{rep.solution.grid.L:.4f} ({rep.solution.grid.n} points per axis)")
print(f"  energy       {b.total:.6f}  (inside the bracket)")
print(f"  kinetic      {b.kinetic:.4f}  vs ball radius {rep.t_s:.4f}")
print(f"  virial       {b.virial:+.3e}")
print(f"  quartic/kin  {b.quartic / b.kinetic:.6f}  (bounded by 2s = {2 * s})")
print(f"  multiplier   {b.mu:.4f} (negative: the saddle is self-bound)")
rep.save("runs/demo3/saddle")
