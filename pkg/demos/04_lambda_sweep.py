"""Cost-vs-lambda curves on the synthetic classifier benchmark.

Objects are 2-D linear classifiers sign(x_i - c) / sign(c - x_i); queries
ask for a classifier's label at a grid point. Thresholds near the origin
are a priori likelier (Zipf weights by |c| rank). The sweep rebuilds the
lambda-greedy tree at every grid lambda and compares it against plain
greedy (GBS) and prior-blind greedy (uniform GBS), averaging over seeded
tie-break repetitions.
"""

from pathlib import Path

import querytree as qt
from querytree.sweep import InstanceSource, gbs, lambda_gbs, run_sweep, uniform_gbs, write_sweep_csv

instance = qt.synthetic_classifier_instance(thresholds_per_axis=5, beta=1.0)
print(f"classifier instance: {instance.num_objects} classifiers, "
      f"{instance.num_queries} grid queries")

grid = [qt.finite_lambda(x) for x in (1.2, 2, 5, 20, 200)]
rows = run_sweep(
    InstanceSource(instance), grid,
    [lambda_gbs(), gbs(), uniform_gbs()],
    repetitions=25, seed=31295,
)

by = {(r.algorithm, r.regime.label): r for r in rows}
print(f"\n{'lam':>6} {'lambda-gbs':>12} {'gbs':>12} {'uniform-gbs':>12}")
for regime in grid:
    lab = regime.label
    print(
        f"{lab:>6} {by[('lambda-gbs', lab)].mean_cost:12.5f} "
        f"{by[('gbs', lab)].mean_cost:12.5f} {by[('uniform-gbs', lab)].mean_cost:12.5f}"
    )

print("\nreading the curves: lambda-gbs tracks gbs at small lambda, moves toward")
print("the prior-blind balanced splits as lambda grows, and stays at or below")
print("both comparison curves across the grid.")

out = Path(__file__).with_name("sweep_classifiers.csv")
write_sweep_csv(rows, out)
print(f"\nCSV written to {out} (byte-reproducible for seed 31295)")
