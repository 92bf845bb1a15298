"""The local minimizer inside the kinetic ball, and what happens above
the critical mass.

Below the collapse threshold the trapped problem has a minimizer whose
kinetic energy stays inside the ball of radius t_s; above it the ball
collapses (t_s -> 0 as s -> 1) and every descent escapes immediately.

Run:  python3 demos/02_trapped_minimizer.py
"""

from fgpe import (
    ProblemParams,
    boundary_gap,
    make_grid,
    nonexistence_gap,
    solve_ground_state,
    solve_local_min,
)

grid = make_grid(16.0, 256)
n1 = solve_ground_state(1.0, grid).Ns_star
q = solve_ground_state(0.95, grid)
print(f"critical mass at s=1: {n1:.4f}")

# subcritical mass: a genuine local minimizer
p = ProblemParams(s=0.95, N=0.5 * n1)
rep = solve_local_min(p, q.Ns_star, grid=grid, tol=1e-8, p_tol=1e-3)
b = rep.breakdown
gap = boundary_gap(p, q.Ns_star)
print(f"\nN = 0.5 x critical: {rep.classification}")
print(f"  energy        {b.total:.8f} (boundary lower bound {gap.gap:.3g})")
print(f"  kinetic       {b.kinetic:.6f} inside ball of radius {rep.t_s:.4g}")
print(f"  multiplier    {b.mu:.6f}")
print(f"  virial        {b.virial:+.3e} (zero at a critical point)")
print(f"  EL residual   {rep.el_residual:.2e} in {rep.iterations} iterations")
rep.save("runs/demo2/minimizer")

# supercritical mass: the ball radius collapses and the descent escapes
q99 = solve_ground_state(0.99, grid)
p_hi = ProblemParams(s=0.99, N=1.5 * n1)
rep_hi = solve_local_min(p_hi, q99.Ns_star, grid=grid)
lhs, rhs = nonexistence_gap(p_hi, q99.Ns_star)
print(f"\nN = 1.5 x critical: {rep_hi.classification} "
      f"(t_s = {rep_hi.t_s:.3e}, crossed at iterate "
      f"{rep_hi.extras['crossing_iteration']})")
print(f"  collapse certificate: lhs = {lhs:.3e} < rhs = {rhs:.3e} -> "
      f"no positive local minimizer in the ball")
