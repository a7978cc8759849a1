"""Problem instances and decision trees.

An instance couples a binary response matrix (one row per object, one
column per query) with a prior over the objects and, optionally, a group
label per object.  A decision tree asks one query per internal node and
routes objects to the response-0 ("zero") or response-1 ("one") child;
leaves hold the object indices that reach them.

Object and query indices are 0-based throughout.  Group ids are 1-based
and contiguous (1..m) when normalized; ``normalize_labels`` and the file
loaders perform the normalization, while directly constructed instances
may carry arbitrary labels that ``validate_instance`` will report.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Literal, Sequence

import numpy as np

Mode = Literal["object", "group"]

PRIOR_SUM_TOL = 1e-12


def _frozen_array(data, dtype) -> np.ndarray:
    arr = np.asarray(data, dtype=dtype)
    arr = arr.copy() if arr.base is not None or arr.flags.writeable else arr
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ProblemInstance:
    """A query learning problem: response matrix, prior, optional groups.

    ``responses[i, j]`` is 1 iff object i is inside query j's subset.
    ``labels``, when present, give each object a group id; when absent the
    instance is an object-identification problem (every object its own
    group).  ``original_labels`` preserves pre-normalization ids for
    display.  Instances are immutable after construction.
    """

    responses: np.ndarray
    prior: np.ndarray
    labels: tuple[int, ...] | None = None
    object_names: tuple[str, ...] | None = None
    query_names: tuple[str, ...] | None = None
    original_labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "responses", _frozen_array(self.responses, np.uint8))
        object.__setattr__(self, "prior", _frozen_array(self.prior, np.float64))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(int(g) for g in self.labels))
        if self.object_names is not None:
            object.__setattr__(self, "object_names", tuple(self.object_names))
        if self.query_names is not None:
            object.__setattr__(self, "query_names", tuple(self.query_names))

    @property
    def num_objects(self) -> int:
        return self.responses.shape[0]

    @property
    def num_queries(self) -> int:
        return self.responses.shape[1] if self.responses.ndim == 2 else 0

    @property
    def num_groups(self) -> int:
        """Number of groups (m); equals num_objects when unlabeled."""
        if self.labels is None:
            return self.num_objects
        return max(self.labels)

    def effective_labels(self, mode: Mode) -> tuple[int, ...]:
        """Group id per object under ``mode``.

        Object mode treats every object as its own group regardless of
        labels; group mode uses the labels (or singletons when absent).
        """
        if mode == "object" or self.labels is None:
            return tuple(range(1, self.num_objects + 1))
        return self.labels

    def object_name(self, i: int) -> str:
        return self.object_names[i] if self.object_names else f"theta{i + 1}"

    def query_name(self, j: int) -> str:
        return self.query_names[j] if self.query_names else f"q{j + 1}"

    def group_display(self, group_id: int) -> str:
        """Display form of a normalized group id (original label if kept)."""
        if self.original_labels is not None and self.labels is not None:
            for k, g in enumerate(self.labels):
                if g == group_id:
                    return str(self.original_labels[k])
        return str(group_id)

    def with_uniform_prior(self) -> "ProblemInstance":
        m = self.num_objects
        return replace(self, prior=np.full(m, 1.0 / m))


def normalize_labels(raw: Sequence) -> tuple[tuple[int, ...], tuple]:
    """Map arbitrary labels to contiguous ids 1..m (sorted original order).

    Returns (normalized, original) so the original labels can be kept as
    display metadata.
    """
    original = tuple(raw)
    order = {lab: k + 1 for k, lab in enumerate(sorted(set(original)))}
    return tuple(order[lab] for lab in original), original


# ---------------------------------------------------------------------------
# Decision trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    """Terminal node holding the object indices that reach it."""

    objects: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(sorted(int(i) for i in self.objects)))


@dataclass(frozen=True)
class Internal:
    """Internal node asking ``query``; zero = response-0 child, one = response-1."""

    query: int
    zero: "TreeNode"
    one: "TreeNode"


TreeNode = Leaf | Internal


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    mode: Mode = "object"


@dataclass(frozen=True)
class NodeRecord:
    """One node of a tree walk: preorder position, depth, and object set."""

    index: int
    depth: int
    node: TreeNode
    objects: tuple[int, ...]


def walk(tree: DecisionTree) -> list[NodeRecord]:
    """All nodes in preorder (root first, zero subtree before one subtree).

    Internal-node object sets are the unions of their descendant leaves.
    """
    records: list[NodeRecord] = []

    def visit(node: TreeNode, depth: int) -> tuple[int, ...]:
        index = len(records)
        records.append(NodeRecord(index, depth, node, ()))
        if isinstance(node, Leaf):
            objs = node.objects
        else:
            zero_objs = visit(node.zero, depth + 1)
            one_objs = visit(node.one, depth + 1)
            objs = tuple(sorted(zero_objs + one_objs))
        records[index] = NodeRecord(index, depth, node, objs)
        return objs

    visit(tree.root, 0)
    return records


def leaves(tree: DecisionTree) -> Iterator[tuple[Leaf, int]]:
    """(leaf, depth) pairs in preorder."""
    for rec in walk(tree):
        if isinstance(rec.node, Leaf):
            yield rec.node, rec.depth


def traverse(tree: DecisionTree, response_row: Sequence[int]) -> Leaf:
    """Follow the tree using one object's responses until a leaf."""
    node = tree.root
    while isinstance(node, Internal):
        node = node.one if response_row[node.query] else node.zero
    return node


def tree_queries(tree: DecisionTree) -> set[int]:
    return {rec.node.query for rec in walk(tree) if isinstance(rec.node, Internal)}


def prune_to_groups(tree: DecisionTree, instance: ProblemInstance) -> DecisionTree:
    """Collapse every group-pure subtree into a leaf; result is a group-mode tree.

    Turns an object-identification tree into the tree actually used when
    only the group matters: descent stops as soon as the remaining set is
    a single group.
    """
    labels = instance.effective_labels("group")

    def collapse(node: TreeNode, objs: tuple[int, ...]) -> TreeNode:
        if len({labels[i] for i in objs}) == 1:
            return Leaf(objs)
        assert isinstance(node, Internal)  # heterogeneous set cannot be a leaf of a valid tree
        col = instance.responses[:, node.query]
        zero_objs = tuple(i for i in objs if not col[i])
        one_objs = tuple(i for i in objs if col[i])
        return Internal(node.query, collapse(node.zero, zero_objs), collapse(node.one, one_objs))

    all_objs = tuple(range(instance.num_objects))
    return DecisionTree(collapse(tree.root, all_objs), mode="group")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_instance(instance: ProblemInstance) -> list[str]:
    """All invariant violations of the instance (empty list = valid)."""
    v: list[str] = []
    resp = instance.responses
    if resp.ndim != 2:
        return [f"responses must be a 2-D matrix, got ndim={resp.ndim}"]
    M, N = resp.shape
    if M < 1:
        v.append("instance must have at least one object")
    if N < 1:
        v.append("instance must have at least one query")
    if not np.isin(resp, (0, 1)).all():
        v.append("responses must contain only 0/1 entries")
    if instance.prior.shape != (M,):
        v.append(f"prior has length {instance.prior.shape[0]}, expected {M}")
    else:
        if (instance.prior < 0).any():
            v.append("prior entries must be nonnegative")
        total = float(instance.prior.sum())
        if abs(total - 1.0) > PRIOR_SUM_TOL:
            v.append(f"prior sums to {total!r}, expected 1 within {PRIOR_SUM_TOL}")
    if instance.labels is not None:
        if len(instance.labels) != M:
            v.append(f"labels has length {len(instance.labels)}, expected {M}")
        else:
            if any(g < 1 for g in instance.labels):
                v.append("group ids must be >= 1")
            else:
                used = set(instance.labels)
                for g in range(1, max(used) + 1):
                    if g not in used:
                        v.append(f"group id {g} unused")
    if instance.object_names is not None and len(instance.object_names) != M:
        v.append(f"object_names has length {len(instance.object_names)}, expected {M}")
    if instance.query_names is not None and len(instance.query_names) != N:
        v.append(f"query_names has length {len(instance.query_names)}, expected {N}")
    return v


def check_identifiability(
    instance: ProblemInstance, mode: Mode | None = None
) -> tuple[int, int] | None:
    """None if every cross-group object pair differs in some query column.

    Object mode demands all rows distinct; group mode only separates
    objects of different groups.  ``mode`` defaults to group when labels
    are present.  Returns one offending (i, j) pair otherwise.
    """
    if mode is None:
        mode = "group" if instance.labels is not None else "object"
    labels = instance.effective_labels(mode)
    seen: dict[bytes, list[int]] = {}
    for i in range(instance.num_objects):
        key = instance.responses[i].tobytes()
        for j in seen.get(key, ()):
            if labels[i] != labels[j]:
                return (j, i)
        seen.setdefault(key, []).append(i)
    return None


def validate_tree(tree: DecisionTree, instance: ProblemInstance) -> list[str]:
    """All decision-tree invariant violations against the instance."""
    v: list[str] = []
    M = instance.num_objects
    labels = instance.effective_labels(tree.mode)

    def visit(node: TreeNode, objs: tuple[int, ...], path: set[int]) -> None:
        if isinstance(node, Leaf):
            if set(node.objects) != set(objs):
                v.append(f"leaf holds {node.objects}, expected {tuple(sorted(objs))}")
            if tree.mode == "object" and len(node.objects) != 1:
                v.append(f"object-mode leaf holds {len(node.objects)} objects")
            elif len({labels[i] for i in node.objects}) > 1:
                v.append(f"leaf {node.objects} mixes groups")
            return
        if node.query in path:
            v.append(f"query {node.query} repeated on a path")
            return
        col = instance.responses[:, node.query]
        zero_objs = tuple(i for i in objs if not col[i])
        one_objs = tuple(i for i in objs if col[i])
        if not zero_objs or not one_objs:
            v.append(f"query {node.query} leaves an empty child for {tuple(sorted(objs))}")
            return
        # Child object sets must mirror the query column exactly.
        declared_zero = _subtree_objects(node.zero)
        declared_one = _subtree_objects(node.one)
        if set(declared_zero) != set(zero_objs) or set(declared_one) != set(one_objs):
            v.append(
                f"children of query {node.query} disagree with its response column"
            )
            return
        visit(node.zero, zero_objs, path | {node.query})
        visit(node.one, one_objs, path | {node.query})

    root_objs = _subtree_objects(tree.root)
    if set(root_objs) != set(range(M)) or len(root_objs) != M:
        v.append(f"tree covers objects {root_objs}, expected a partition of 0..{M - 1}")
    else:
        visit(tree.root, root_objs, set())
    return v


def _subtree_objects(node: TreeNode) -> tuple[int, ...]:
    if isinstance(node, Leaf):
        return node.objects
    return tuple(sorted(_subtree_objects(node.zero) + _subtree_objects(node.one)))
