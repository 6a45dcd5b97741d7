"""Scan the collapse behavior across the constant c in p = c/sqrt(n).

Well below c=1 everything collapses below dimension 2; surviving
cross-polytope copies appear as c grows; around the conjectured constants
(sqrt of the tabulated collapse/homology thresholds, about 1.57 and 1.66)
the stuck fraction takes off.  Small n keeps this demo quick, so expect
soft edges rather than sharp ones.
"""

from flaglab import ExperimentConfig, reference_constants, threshold_scan

consts = reference_constants(2)
print("tabulated constants: gamma_2 =", consts.gamma_d, " c_2 =", consts.c_d)
print(f"conjectured flag-model thresholds: sqrt(gamma_2) = {consts.gamma_d ** 0.5:.3f},"
      f" sqrt(c_2) = {consts.c_d ** 0.5:.3f}")

cfg = ExperimentConfig(n=150, d=2, c=1.0, trials=40, master_seed=7,
                       collapse=True, census=True, betti_rational=True,
                       fvector=False)
grid = [0.8, 1.0, 1.2, 1.4, 1.57, 1.66, 1.8, 2.0]
print(f"\nscanning c over {grid} at n={cfg.n}, {cfg.trials} trials per point ...\n")
res = threshold_scan(cfg, grid)

hdr = f"{'c':>5} {'almost-coll.':>12} {'stuck':>7} {'mean b2':>8} {'mean copies':>11}  note"
print(hdr)
for row in res.rows:
    print(f"{row.c:5.2f} {row.frac_almost_collapsible:12.2f} "
          f"{row.frac_stuck:7.2f} {row.mean_beta_d:8.3f} "
          f"{row.mean_cp_count:11.3f}  {row.annotation}")

print("\n(torsion hunt: flaglab torsion --n 40 --c 2.0 --trials 20 --degree 1;"
      " emptiness is the expected outcome)")
