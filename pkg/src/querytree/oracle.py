"""Exact minimum-cost trees by memoized recursion over object subsets.

Desk-scale ground truth: the recursion explores every reachable subset of
objects (bitmask-keyed) and every query that splits it, so its cost is
exponential in the worst case but exact.  The per-regime recurrences are

    finite lam:     C(S) = min_q lam * (C(S0) + C(S1)),  C(S) = mass(S) at
                    homogeneous S, and the tree cost is log_lam C(full);
    limit-one:      C(S) = mass(S) + min_q (C(S0) + C(S1)), base 0;
    limit-infinity: C(S) = 1 + min_q max(C(S0), C(S1)), base 0.

Repeating a query on a path never splits the subset again, so the
"distinct queries per path" restriction needs no explicit enforcement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetExceededError, NotIdentifiableError
from .instance import DecisionTree, Internal, Leaf, Mode, ProblemInstance
from .metrics import LambdaRegime

DEFAULT_SUBSET_BUDGET = 2_000_000


@dataclass(frozen=True)
class OracleResult:
    """Optimal cost (in the regime's natural scale), one optimal tree, and
    the number of distinct subsets memoized along the way."""

    cost: float
    tree: DecisionTree
    subsets_explored: int


def optimal_tree(
    instance: ProblemInstance,
    regime: LambdaRegime,
    mode: Mode = "object",
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> OracleResult:
    """Globally optimal decision tree for the instance, regime, and mode.

    Ties between equal-cost splits go to the lowest query index.  Raises
    BudgetExceededError when the memo table outgrows ``max_subsets`` and
    NotIdentifiableError when some reachable heterogeneous subset cannot
    be split.
    """
    M = instance.num_objects
    labels = instance.effective_labels(mode)
    prior = instance.prior

    # Per-query bitmask of objects responding 1.
    one_masks = [0] * instance.num_queries
    for j in range(instance.num_queries):
        col = instance.responses[:, j]
        one_masks[j] = sum(1 << i for i in range(M) if col[i])

    lam = regime.lam if regime.is_finite else None
    log_lam = math.log(lam) if lam else None

    memo: dict[int, float] = {}
    best_query: dict[int, int] = {}

    def mask_objects(mask: int) -> tuple[int, ...]:
        return tuple(i for i in range(M) if mask >> i & 1)

    def homogeneous(mask: int) -> bool:
        groups = {labels[i] for i in range(M) if mask >> i & 1}
        return len(groups) <= 1

    def mass(mask: int) -> float:
        return float(sum(prior[i] for i in range(M) if mask >> i & 1))

    def solve(mask: int) -> float:
        if mask in memo:
            return memo[mask]
        if len(memo) >= max_subsets:
            raise BudgetExceededError(len(memo), max_subsets)
        if homogeneous(mask):
            value = mass(mask) if lam else 0.0
            memo[mask] = value
            return value
        memo[mask] = float("inf")  # placeholder; reachable subsets form a DAG
        best = float("inf")
        best_q = None
        for j, ones in enumerate(one_masks):
            m1 = mask & ones
            m0 = mask & ~ones
            if not m0 or not m1:
                continue
            c0 = solve(m0)
            c1 = solve(m1)
            if lam:
                value = lam * (c0 + c1)
            elif regime.kind == "one":
                value = c0 + c1
            else:
                value = max(c0, c1)
            if value < best:
                best = value
                best_q = j
        if best_q is None:
            raise NotIdentifiableError(mask_objects(mask))
        if lam:
            total = best
        elif regime.kind == "one":
            total = mass(mask) + best
        else:
            total = 1.0 + best
        memo[mask] = total
        best_query[mask] = best_q
        return total

    def rebuild(mask: int) -> Leaf | Internal:
        if homogeneous(mask):
            return Leaf(mask_objects(mask))
        j = best_query[mask]
        return Internal(j, rebuild(mask & ~one_masks[j]), rebuild(mask & one_masks[j]))

    full = (1 << M) - 1
    value = solve(full)
    tree = DecisionTree(rebuild(full), mode)
    if lam:
        cost = math.log(value) / log_lam
    else:
        cost = value
    return OracleResult(cost=cost, tree=tree, subsets_explored=len(memo))
