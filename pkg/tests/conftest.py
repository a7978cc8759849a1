"""Shared fixtures: the four-object toy problem, reference trees, and
seeded random-instance corpora."""

from __future__ import annotations

import numpy as np
import pytest

from querytree.datagen import random_instance
from querytree.instance import DecisionTree, Internal, Leaf, ProblemInstance


@pytest.fixture
def toy() -> ProblemInstance:
    """Four objects, three queries, groups (1,1,1,2), uniform prior.

    theta1: 0 1 1   group 1
    theta2: 1 1 0   group 1
    theta3: 0 1 0   group 1
    theta4: 1 0 0   group 2
    """
    return ProblemInstance(
        responses=[[0, 1, 1], [1, 1, 0], [0, 1, 0], [1, 0, 0]],
        prior=[0.25, 0.25, 0.25, 0.25],
        labels=(1, 1, 1, 2),
    )


@pytest.fixture
def toy_gbs_group_tree() -> DecisionTree:
    """The group-task tree GBS produces on the toy problem: root q1, the
    response-0 side stops at the group-pure pair, the response-1 side asks
    q2 to separate the two groups."""
    return DecisionTree(
        Internal(0, Leaf((0, 2)), Internal(1, Leaf((3,)), Leaf((1,)))),
        mode="group",
    )


@pytest.fixture
def toy_depth1_tree() -> DecisionTree:
    """The one-question group tree: q2 alone separates group 2 from group 1."""
    return DecisionTree(Internal(1, Leaf((3,)), Leaf((0, 1, 2))), mode="group")


def complete_query_instance(num_objects: int, prior=None) -> ProblemInstance:
    """Every subset of the objects (up to complement) as a query column."""
    columns = []
    for mask in range(1, 1 << num_objects):
        if mask & 1:  # keep one representative of each {S, complement} pair
            columns.append([(mask >> i) & 1 for i in range(num_objects)])
    responses = np.array(columns, dtype=np.uint8).T
    if prior is None:
        prior = np.full(num_objects, 1.0 / num_objects)
    return ProblemInstance(responses=responses, prior=prior)


def random_corpus(count: int, seed: int, max_objects: int = 12, max_queries: int = 16):
    """Seeded stream of (instance, mode) pairs alternating modes, with
    group counts cycling 2..4 and dimensions kept identifiable-feasible."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        mode = "object" if k % 2 == 0 else "group"
        M = int(rng.integers(3, max_objects + 1))
        low = max(5, int(np.ceil(np.log2(M))) + 2)
        N = int(rng.integers(low, max_queries + 1))
        density = float(rng.uniform(0.3, 0.7))
        group_count = min(M, 2 + k % 3)
        inst = random_instance(
            M, N, density, seed=int(rng.integers(1 << 31)),
            mode=mode, group_count=group_count if mode == "group" else None,
        )
        out.append((inst, mode))
    return out
