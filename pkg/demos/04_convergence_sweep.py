"""Convergence as the noise vanishes, under both parameter rules.

Two ways to pick alpha(delta):

  apriori      alpha = delta (any schedule with alpha -> 0 and
               delta/sqrt(alpha) -> 0 works; this is the simplest)
  discrepancy  residual matching at C * delta

Either way the reconstruction converges to the exact minimal-norm
solution as delta -> 0.  The sweep below shows the errors shrinking and,
for the residual-matched rule, the solution norm staying below ||y||
the whole way down.
"""

from regkit.experiments import run_sweep, sweep_summary

DELTAS = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]

for name in ("deriv2", "phillips"):
    print(f"=== {name}, n = 64 ===")
    for rule in ("discrepancy", "apriori"):
        records = run_sweep(name, 64, DELTAS, seed=7, rule=rule)
        print(f"rule = {rule}")
        print(f"  {'delta':>8s} {'alpha':>12s} {'residual':>12s} "
              f"{'error_to_y':>12s} {'|u|/|y|':>10s}")
        for r in records:
            print(f"  {r.delta:8.0e} {r.alpha:12.4e} {r.residual:12.4e} "
                  f"{r.error_to_y:12.4e} {r.u_norm / r.y_norm:10.6f}")
        print("  " + sweep_summary(records))
    print()

print("The same sweeps are available from the command line, e.g.")
print("  regkit sweep --problem deriv2 --n 64 --deltas 1e-1,1e-2,1e-3,1e-4,1e-5 \\")
print("               --seed 7 --rule discrepancy --out sweep.csv")
