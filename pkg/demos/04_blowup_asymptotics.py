"""Order-to-1 asymptotics: the minimizer converges, the saddle blows up.

As s -> 1 the minimizer branch approaches the classical trapped minimizer
while the saddle's kinetic energy diverges like (Ns*/N)^(s/(1-s)); zoomed
by eps = kinetic^(-1/(2s)) the saddle converges to the dilated free
profile at order one.

Run:  python3 demos/04_blowup_asymptotics.py
"""

from fgpe import ProblemParams, make_grid, multiplier_limit_check, solve_ground_state, sweep
from fgpe.asymptotics import write_sweep_csv, write_sweep_summary

grid = make_grid(16.0, 256)
n1 = solve_ground_state(1.0, grid).Ns_star
p = ProblemParams(s=0.90, N=0.5 * n1)

res = sweep(p, [0.90, 0.93, 0.95, 0.97], grid, saddle_points=512)
print(" s    | saddle kinetic | zoom eps  | profile err | minimizer err")
for r in res.records:
    print(f" {r.s:.2f} |  {r.kin_saddle:12.4g} | {r.eps:9.3g} | {r.rescale_err:11.4g} "
          f"| {r.min_err:11.4g}")

print("\ntrend verdicts:")
for k, v in res.trends.items():
    print(f"  {k}: {v}")

mlc = multiplier_limit_check(res.records, p.N)
print(f"\nmultiplier limit (target -1/N = {mlc['limit']:.5f}):")
for row in mlc["rows"]:
    print(f"  s={row['s']:.2f}: mu*eps^2s = {row['mu_eps2s']:+.5f} "
          f"(gap {row['gap_to_limit']:.2e}), quartic/kinetic = {row['quart_over_kin']:.5f}")

write_sweep_csv(res, "runs/demo4/sweep.csv")
write_sweep_summary(res, "runs/demo4/sweep_summary.json")
print("\nwrote runs/demo4/sweep.csv and sweep_summary.json")
print("render with: fgpe-plots render --kind sweep_trends --out runs/demo4/trends.png "
      "runs/demo4/sweep.csv runs/demo4/sweep_summary.json")
