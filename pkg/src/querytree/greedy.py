"""Top-down greedy tree construction and the adaptive next-query primitive.

At every heterogeneous node the builder evaluates each unused query that
actually splits the node and keeps the ones minimizing the regime/mode
criterion (balanced mass at lam->1, diversity-weighted child mass for
finite lam, child cardinality or group count at lam->inf).  The argmin
set is formed with a relative tolerance before tie-breaking so float
noise cannot defeat the documented tie-break order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DegenerateSplitError, DomainError, InconsistentAnswersError, NotIdentifiableError
from .instance import DecisionTree, Internal, Leaf, Mode, ProblemInstance
from .metrics import LambdaRegime, SplitEvaluation, evaluate_split

CRITERION_RTOL = 1e-12
CRITERION_ATOL = 1e-15  # guards exact-zero criteria against last-ulp noise


@dataclass(frozen=True)
class BuilderConfig:
    """How to grow a tree: cost regime, identification mode, prior handling,
    and the tie-break rule applied inside each node's argmin set."""

    regime: LambdaRegime
    mode: Mode = "object"
    prior_override: Literal["uniform"] | None = None
    tiebreak: Literal["lowest", "seeded"] = "lowest"
    seed: int | None = None

    def __post_init__(self):
        if self.tiebreak == "seeded" and self.seed is None:
            raise DomainError("seeded-random tie-breaking requires an explicit seed")


@dataclass(frozen=True)
class Identified:
    """Terminal answer of an adaptive session: the object or group found."""

    kind: Literal["object", "group"]
    index: int  # object index (0-based) or group id (1-based)


def _working_instance(instance: ProblemInstance, config: BuilderConfig) -> ProblemInstance:
    if config.prior_override == "uniform":
        return instance.with_uniform_prior()
    return instance


def argmin_query_set(
    instance: ProblemInstance,
    node_objects: Sequence[int],
    available: Sequence[int],
    regime: LambdaRegime,
    mode: Mode,
) -> tuple[list[int], dict[int, SplitEvaluation]]:
    """Queries tying for the least criterion, plus every candidate's evaluation.

    Non-splitting queries are skipped; raises NotIdentifiableError when no
    available query splits the node.  Finite-regime criteria are compared
    through their logarithms, which matches relative comparison of the
    criteria themselves.
    """
    node_objects = tuple(node_objects)
    evaluations: dict[int, SplitEvaluation] = {}
    for q in sorted(available):
        try:
            evaluations[q] = evaluate_split(instance, node_objects, q, regime, mode)
        except DegenerateSplitError:
            continue
    if not evaluations:
        raise NotIdentifiableError(node_objects)

    if regime.is_finite:
        keys = {q: ev.criterion_log for q, ev in evaluations.items()}
        best = min(keys.values())
        winners = [q for q, k in keys.items() if k <= best + CRITERION_RTOL]
    else:
        keys = {q: ev.criterion for q, ev in evaluations.items()}
        best = min(keys.values())
        tol = CRITERION_ATOL + CRITERION_RTOL * abs(best)
        winners = [q for q, k in keys.items() if k <= best + tol]
    return sorted(winners), evaluations


def _pick(winners: list[int], node_objects: tuple[int, ...], config: BuilderConfig) -> int:
    if config.tiebreak == "lowest" or len(winners) == 1:
        return winners[0]
    # Per-node stream keyed by (seed, node set) so that rebuilding a tree and
    # replaying it adaptively make identical choices at every node.  Seeds are
    # folded to u64 (SeedSequence rejects negatives).
    ss = np.random.SeedSequence([int(config.seed) & 0xFFFFFFFFFFFFFFFF, *sorted(node_objects)])
    rng = np.random.default_rng(ss)
    return winners[int(rng.integers(len(winners)))]


def choose_query(
    instance: ProblemInstance,
    node_objects: Sequence[int],
    available: Sequence[int],
    config: BuilderConfig,
) -> tuple[int, SplitEvaluation]:
    """The winning query at a node and its split statistics."""
    work = _working_instance(instance, config)
    node_objects = tuple(node_objects)
    winners, evaluations = argmin_query_set(
        work, node_objects, available, config.regime, config.mode
    )
    q = _pick(winners, node_objects, config)
    return q, evaluations[q]


def _is_homogeneous(labels: tuple[int, ...], objects: Sequence[int]) -> bool:
    return len({labels[i] for i in objects}) <= 1


def build_tree(instance: ProblemInstance, config: BuilderConfig) -> DecisionTree:
    """Grow a full tree greedily; leaves are singletons (object mode) or
    group-pure (group mode).  Queries already used on a path are excluded.

    Raises NotIdentifiableError (carrying the stuck node's object set) when
    some heterogeneous node admits no splitting query.
    """
    work = _working_instance(instance, config)
    labels = work.effective_labels(config.mode)
    all_queries = tuple(range(work.num_queries))

    def grow(objects: tuple[int, ...], asked: frozenset[int]) -> Leaf | Internal:
        if _is_homogeneous(labels, objects):
            return Leaf(objects)
        available = [q for q in all_queries if q not in asked]
        if not available:
            raise NotIdentifiableError(objects)
        winners, evaluations = argmin_query_set(work, objects, available, config.regime, config.mode)
        q = _pick(winners, objects, config)
        ev = evaluations[q]
        used = asked | {q}
        return Internal(q, grow(ev.zero_objects, used), grow(ev.one_objects, used))

    root = grow(tuple(range(work.num_objects)), frozenset())
    return DecisionTree(root, config.mode)


def next_query(
    instance: ProblemInstance,
    remaining_objects: Sequence[int],
    asked: Sequence[int],
    config: BuilderConfig,
) -> int | Identified:
    """Adaptive form of the greedy loop: the next query for the current
    candidate set, or the identified object/group once it is homogeneous.

    The greedy choice depends only on the remaining set and the queries
    already asked, so this reproduces exactly the path an up-front tree
    build would take under the same config.
    """
    remaining = tuple(remaining_objects)
    if not remaining:
        raise InconsistentAnswersError("no object is consistent with the recorded answers")
    work = _working_instance(instance, config)
    labels = work.effective_labels(config.mode)
    if _is_homogeneous(labels, remaining):
        if config.mode == "object":
            return Identified("object", remaining[0])
        return Identified("group", labels[remaining[0]])
    available = [q for q in range(work.num_queries) if q not in set(asked)]
    if not available:
        raise NotIdentifiableError(remaining)
    q, _ = choose_query(work, remaining, available, config)
    return q
