"""Exact optima vs greedy trees on desk-scale instances.

The oracle memoizes optimal subtree costs over reachable object subsets,
so it is exact but exponential; at M <= 12 it answers instantly and shows
how much the one-step-lookahead greedy gives up.
"""

import numpy as np

import querytree as qt

rng = np.random.default_rng(20260811)
regimes = [qt.LIMIT_ONE, qt.finite_lambda(2), qt.LIMIT_INFINITY]

print(f"{'instance':>12} {'mode':>7} {'lam':>4} {'greedy':>10} {'oracle':>10} {'ratio':>7}")
worst = (1.0, None)
for k in range(12):
    mode = "object" if k % 2 else "group"
    inst = qt.random_instance(
        int(rng.integers(6, 11)), int(rng.integers(7, 13)), 0.5,
        seed=int(rng.integers(1 << 31)),
        mode=mode, group_count=3 if mode == "group" else None,
    )
    for regime in regimes:
        greedy = qt.cost_direct(
            qt.build_tree(inst, qt.BuilderConfig(regime, mode=mode)), inst, regime
        )
        result = qt.optimal_tree(inst, regime, mode)
        ratio = greedy / result.cost if result.cost > 0 else 1.0
        tag = f"{inst.num_objects}x{inst.num_queries}#{k}"
        print(f"{tag:>12} {mode:>7} {regime.label:>4} {greedy:10.5f} {result.cost:10.5f} {ratio:7.4f}")
        assert greedy >= result.cost - 1e-9  # greedy never beats the optimum
        if ratio > worst[0]:
            worst = (ratio, (tag, mode, regime.label))

print(f"\nworst greedy/optimal ratio seen: {worst[0]:.4f} at {worst[1]}")

print("\nthe oracle also returns one optimal tree and its search effort:")
inst = qt.random_instance(10, 12, 0.5, seed=99, mode="object")
result = qt.optimal_tree(inst, qt.LIMIT_ONE, "object")
print(f"  optimal L1 = {result.cost:.5f} using {result.subsets_explored} memoized subsets")
print(f"  tree is valid: {qt.validate_tree(result.tree, inst) == []}")
