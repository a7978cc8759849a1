"""Entropy functions, split statistics, and the two tree-cost evaluators.

The cost of a tree is the exponentially weighted depth
``L = log_lam(sum_j mass_j * lam**depth_j)`` over its leaves, which tends
to the probability-weighted mean depth as lam -> 1 and to the maximum
depth as lam -> inf.  ``cost_direct`` evaluates that sum; the independent
``cost_via_decomposition`` rebuilds the same number as a Renyi/Shannon
entropy bound plus one nonneg gap term per internal node, and
``decomposition_terms`` exposes the per-node identities behind it.

All entropies are in bits.  Exponential sums are evaluated in log domain
(max-shifted) so that lambdas up to 1e9 stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import DegenerateSplitError, DomainError, InvalidTreeError, UnsupportedRegimeError
from .instance import DecisionTree, Internal, Leaf, Mode, NodeRecord, ProblemInstance, validate_tree, walk

DIST_SUM_TOL = 1e-9
LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Lambda regimes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaRegime:
    """Choice of cost exponent: the lam->1 limit, a finite lam>1, or lam->inf.

    Callers always pick the regime explicitly; no formula switches on the
    magnitude of lam behind their back.
    """

    kind: Literal["one", "finite", "infinity"]
    lam: float | None = None

    def __post_init__(self):
        if self.kind == "finite":
            if self.lam is None or not self.lam > 1.0:
                raise DomainError(f"finite regime requires lam > 1, got {self.lam}")
        elif self.lam is not None:
            raise DomainError(f"limit regime {self.kind!r} takes no lam value")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def label(self) -> str:
        """Decimal-string form used in CSV output: '1', 'inf', or the value."""
        if self.kind == "one":
            return "1"
        if self.kind == "infinity":
            return "inf"
        return f"{self.lam:g}"


LIMIT_ONE = LambdaRegime("one")
LIMIT_INFINITY = LambdaRegime("infinity")


def finite_lambda(lam: float) -> LambdaRegime:
    return LambdaRegime("finite", float(lam))


def regime_from_value(value: float | str) -> LambdaRegime:
    """Interpret 1 as the limit-one regime and inf as limit-infinity."""
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("one", "1"):
            return LIMIT_ONE
        if v in ("inf", "infinity"):
            return LIMIT_INFINITY
        value = float(v)
    if value == 1:
        return LIMIT_ONE
    if math.isinf(value):
        return LIMIT_INFINITY
    return finite_lambda(value)


def alpha_from_lambda(regime: LambdaRegime) -> float:
    """Renyi order matching the regime: 1/(1 + log2 lam).

    The limit-one regime maps to alpha=1 (Shannon); limit-infinity maps to
    the marker value 0, flagging the cardinality-based criterion.
    """
    if regime.kind == "one":
        return 1.0
    if regime.kind == "infinity":
        return 0.0
    return 1.0 / (1.0 + math.log2(regime.lam))


# ---------------------------------------------------------------------------
# Entropies and diversity
# ---------------------------------------------------------------------------

def _check_distribution(dist: np.ndarray) -> np.ndarray:
    dist = np.asarray(dist, dtype=np.float64)
    if dist.ndim != 1:
        raise DomainError("distribution must be one-dimensional")
    if (dist < 0).any():
        raise DomainError("distribution has a negative entry")
    total = float(dist.sum())
    if abs(total - 1.0) > DIST_SUM_TOL:
        raise DomainError(f"distribution sums to {total!r}, expected 1")
    return dist


def shannon_entropy(dist: Sequence[float]) -> float:
    """-sum p*log2(p) in bits, with 0*log(0) = 0."""
    dist = _check_distribution(dist)
    p = dist[dist > 0]
    return float(-(p * np.log2(p)).sum())


def binary_entropy(p: float) -> float:
    """Shannon entropy of a proportion p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"proportion {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def renyi_entropy(dist: Sequence[float], alpha: float) -> float:
    """Renyi entropy of order alpha in (0, 1], in bits; alpha=1 is Shannon."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if alpha == 1.0:
        return shannon_entropy(dist)
    dist = _check_distribution(dist)
    p = dist[dist > 0]
    log_power_sum = logsumexp(alpha * np.log(p))
    return float(log_power_sum / (1.0 - alpha) / LOG2)


def d_alpha(node_masses: Sequence[float], alpha: float) -> float:
    """Diversity [sum (mass_i/total)**alpha]**(1/alpha) of per-group masses.

    Equals 1 exactly when a single group carries all mass.  Zero-mass
    groups contribute nothing.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    masses = np.asarray(node_masses, dtype=np.float64)
    if (masses < 0).any():
        raise DomainError("masses must be nonnegative")
    positive = masses[masses > 0]
    if positive.size == 0:
        raise DomainError("all-zero mass vector has no diversity")
    if positive.size == 1:
        return 1.0
    return math.exp(_log_d_alpha(positive, alpha))


def _log_d_alpha(positive_masses: np.ndarray, alpha: float) -> float:
    """ln D_alpha over strictly positive masses (log-domain, max-shifted)."""
    if positive_masses.size == 1:
        return 0.0
    log_m = np.log(positive_masses)
    return float(logsumexp(alpha * log_m) / alpha - logsumexp(log_m))


# ---------------------------------------------------------------------------
# Split evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitEvaluation:
    """Statistics of splitting a node's object set with one query.

    ``rho`` is the larger child's share of the node's mass; ``group_rhos``
    the same per group present at the node.  ``zero_diversity`` and
    ``one_diversity`` are the children's D_alpha (number of groups present
    in the limit-infinity regime; identically 1 at alpha=1).  For finite
    regimes ``criterion_log`` carries ln(criterion) for stable argmin
    comparisons.  Zero-mass denominators report rho = 1 by convention.
    """

    query: int
    zero_objects: tuple[int, ...]
    one_objects: tuple[int, ...]
    zero_mass: float
    one_mass: float
    rho: float
    group_rhos: Mapping[int, float]
    zero_diversity: float
    one_diversity: float
    criterion: float
    criterion_log: float | None = None


def _group_mass_table(
    prior: np.ndarray, labels: tuple[int, ...], objects: Sequence[int]
) -> dict[int, float]:
    """Mass per group present (by membership, not mass) among ``objects``."""
    table: dict[int, float] = {}
    for i in objects:
        table[labels[i]] = table.get(labels[i], 0.0) + float(prior[i])
    return table


def split_objects(
    instance: ProblemInstance, node_objects: Sequence[int], query: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Partition ``node_objects`` by the query column (response 0, response 1)."""
    col = instance.responses[:, query]
    zero = tuple(i for i in node_objects if not col[i])
    one = tuple(i for i in node_objects if col[i])
    return zero, one


def evaluate_split(
    instance: ProblemInstance,
    node_objects: Sequence[int],
    query: int,
    regime: LambdaRegime,
    mode: Mode = "object",
) -> SplitEvaluation:
    """Split statistics and the regime/mode criterion for one candidate query.

    Raises DegenerateSplitError when the query leaves a child empty.
    """
    node_objects = tuple(node_objects)
    zero, one = split_objects(instance, node_objects, query)
    if not zero or not one:
        raise DegenerateSplitError(query, node_objects)

    labels = instance.effective_labels(mode)
    prior = instance.prior
    zero_mass = float(prior[list(zero)].sum())
    one_mass = float(prior[list(one)].sum())
    parent_mass = zero_mass + one_mass
    rho = max(zero_mass, one_mass) / parent_mass if parent_mass > 0 else 1.0

    parent_groups = _group_mass_table(prior, labels, node_objects)
    zero_groups = _group_mass_table(prior, labels, zero)
    one_groups = _group_mass_table(prior, labels, one)
    group_rhos: dict[int, float] = {}
    for g, mass in parent_groups.items():
        if mass > 0:
            larger = max(zero_groups.get(g, 0.0), one_groups.get(g, 0.0))
            group_rhos[g] = larger / mass
        else:
            group_rhos[g] = 1.0

    if regime.kind == "infinity":
        n_zero = float(len(zero_groups))
        n_one = float(len(one_groups))
        return SplitEvaluation(
            query, zero, one, zero_mass, one_mass, rho, group_rhos,
            zero_diversity=n_zero, one_diversity=n_one,
            criterion=max(n_zero, n_one),
        )

    if regime.kind == "one":
        if mode == "object":
            criterion = rho
        elif parent_mass > 0:
            weighted = sum(
                (mass / parent_mass) * binary_entropy(group_rhos[g])
                for g, mass in parent_groups.items()
            )
            criterion = 1.0 - binary_entropy(rho) + weighted
        else:
            criterion = 1.0
        return SplitEvaluation(
            query, zero, one, zero_mass, one_mass, rho, group_rhos,
            zero_diversity=1.0, one_diversity=1.0, criterion=criterion,
        )

    alpha = alpha_from_lambda(regime)
    log_terms = []
    diversities = []
    for child_mass, child_groups in ((zero_mass, zero_groups), (one_mass, one_groups)):
        masses = np.array([m for m in child_groups.values() if m > 0])
        log_d = _log_d_alpha(masses, alpha) if masses.size else 0.0
        diversities.append(math.exp(log_d))
        if child_mass > 0:
            log_terms.append(math.log(child_mass) - math.log(parent_mass) + log_d)
    criterion_log = float(logsumexp(log_terms)) if log_terms else -math.inf
    return SplitEvaluation(
        query, zero, one, zero_mass, one_mass, rho, group_rhos,
        zero_diversity=diversities[0], one_diversity=diversities[1],
        criterion=math.exp(criterion_log), criterion_log=criterion_log,
    )


# ---------------------------------------------------------------------------
# Tree costs
# ---------------------------------------------------------------------------

def _validated_walk(tree: DecisionTree, instance: ProblemInstance) -> list[NodeRecord]:
    violations = validate_tree(tree, instance)
    if violations:
        raise InvalidTreeError(violations)
    return walk(tree)


def cost_direct(tree: DecisionTree, instance: ProblemInstance, regime: LambdaRegime) -> float:
    """Tree cost straight from the leaf depths.

    limit-one: probability-weighted mean depth.  finite lam:
    log_lam(sum mass*lam**depth) via a log-domain sum over positive-mass
    leaves.  limit-infinity: maximum leaf depth, zero-mass leaves included.
    """
    records = _validated_walk(tree, instance)
    leaf_recs = [r for r in records if isinstance(r.node, Leaf)]
    masses = np.array([instance.prior[list(r.objects)].sum() for r in leaf_recs])
    depths = np.array([r.depth for r in leaf_recs], dtype=np.float64)

    if regime.kind == "infinity":
        return float(depths.max())
    if regime.kind == "one":
        return float((masses * depths).sum())
    log_lam = math.log(regime.lam)
    pos = masses > 0
    return float(logsumexp(np.log(masses[pos]) + depths[pos] * log_lam) / log_lam)


@dataclass(frozen=True)
class CostReport:
    """Dual-route cost of one tree: direct leaf sum vs entropy decomposition.

    ``gap_terms`` maps each internal node's preorder index to its
    contribution to the gap above the entropy bound.
    """

    regime: LambdaRegime
    cost_direct: float
    cost_decomposed: float
    entropy_bound: float
    gap_terms: Mapping[int, float]

    def to_json(self) -> dict:
        return {
            "regime": self.regime.label,
            "cost_direct": self.cost_direct,
            "cost_decomposed": self.cost_decomposed,
            "entropy_bound": self.entropy_bound,
            "gap_terms": {str(k): v for k, v in self.gap_terms.items()},
        }


def _internal_stats(
    instance: ProblemInstance, records: list[NodeRecord], mode: Mode
) -> list[tuple[NodeRecord, float, dict[int, float], tuple[int, ...], tuple[int, ...]]]:
    """(record, node mass, node group masses, zero objects, one objects)."""
    labels = instance.effective_labels(mode)
    out = []
    for rec in records:
        if not isinstance(rec.node, Internal):
            continue
        groups = _group_mass_table(instance.prior, labels, rec.objects)
        zero, one = split_objects(instance, rec.objects, rec.node.query)
        out.append((rec, sum(groups.values()), groups, zero, one))
    return out


def group_mass_distribution(instance: ProblemInstance, mode: Mode) -> np.ndarray:
    """Total prior mass per group id 1..m (the distribution behind the bound)."""
    labels = instance.effective_labels(mode)
    m = max(labels)
    dist = np.zeros(m)
    for i, g in enumerate(labels):
        dist[g - 1] += instance.prior[i]
    return dist


def cost_via_decomposition(
    tree: DecisionTree, instance: ProblemInstance, regime: LambdaRegime
) -> CostReport:
    """Tree cost reassembled as entropy bound + per-internal-node gap terms.

    Not defined for the limit-infinity regime.
    """
    if regime.kind == "infinity":
        raise UnsupportedRegimeError("the decomposition is undefined for limit-infinity")
    records = _validated_walk(tree, instance)
    mode = tree.mode
    labels = instance.effective_labels(mode)
    prior = instance.prior
    root_dist = group_mass_distribution(instance, mode)

    gap_terms: dict[int, float] = {}
    if regime.kind == "one":
        bound = shannon_entropy(root_dist)
        for rec, node_mass, groups, zero, one in _internal_stats(instance, records, mode):
            if node_mass == 0:
                gap_terms[rec.index] = 0.0
                continue
            zero_mass = float(prior[list(zero)].sum())
            rho = max(zero_mass, node_mass - zero_mass) / node_mass
            zero_groups = _group_mass_table(prior, labels, zero)
            weighted = 0.0
            for g, g_mass in groups.items():
                if g_mass > 0:
                    g_rho = max(zero_groups.get(g, 0.0), g_mass - zero_groups.get(g, 0.0)) / g_mass
                    weighted += (g_mass / node_mass) * binary_entropy(g_rho)
            gap_terms[rec.index] = node_mass * (1.0 - binary_entropy(rho) + weighted)
        total = bound + sum(gap_terms.values())
    else:
        lam = regime.lam
        alpha = alpha_from_lambda(regime)
        bound = renyi_entropy(root_dist, alpha)
        # S = lam**H_alpha = (sum of group masses**alpha)**(1/alpha)
        pos_root = root_dist[root_dist > 0]
        scale = math.exp(float(logsumexp(alpha * np.log(pos_root)) / alpha))
        for rec, node_mass, groups, zero, one in _internal_stats(instance, records, mode):
            if node_mass == 0:
                gap_terms[rec.index] = 0.0
                continue
            d_node = _masses_diversity(groups, alpha)
            zero_groups = _group_mass_table(prior, labels, zero)
            one_groups = _group_mass_table(prior, labels, one)
            zero_mass = sum(zero_groups.values())
            one_mass = sum(one_groups.values())
            d_zero = _masses_diversity(zero_groups, alpha)
            d_one = _masses_diversity(one_groups, alpha)
            gap_terms[rec.index] = node_mass * (
                (lam - 1.0) * math.exp(rec.depth * math.log(lam))
                - d_node
                + (zero_mass / node_mass) * d_zero
                + (one_mass / node_mass) * d_one
            )
        total = math.log(scale + sum(gap_terms.values())) / math.log(lam)

    return CostReport(
        regime=regime,
        cost_direct=cost_direct(tree, instance, regime),
        cost_decomposed=total,
        entropy_bound=bound,
        gap_terms=gap_terms,
    )


def _masses_diversity(groups: Mapping[int, float], alpha: float) -> float:
    """D_alpha of a group-mass table; 1.0 when no mass is present."""
    masses = np.array([m for m in groups.values() if m > 0])
    if masses.size == 0:
        return 1.0
    return math.exp(_log_d_alpha(masses, alpha))


@dataclass(frozen=True)
class DecompositionTerms:
    """The appendix quantities behind the cost formula, per internal node.

    ``l_tilde`` = (sum mass*lam**depth - 1)/(lam - 1) and decomposes as
    sum of ``lam**depth_a * mass_a`` over internal nodes; ``h_tilde`` =
    1 - 1/S with S = (sum group_mass**alpha)**(1/alpha), and S*h_tilde
    decomposes as the per-node diversity differences.
    """

    l_tilde: float
    h_tilde: float
    l_node_terms: Mapping[int, float]
    h_node_terms: Mapping[int, float]
    scale: float  # S = (sum group_mass**alpha)**(1/alpha), the factor multiplying h_tilde


def decomposition_terms(
    tree: DecisionTree, instance: ProblemInstance, regime: LambdaRegime
) -> DecompositionTerms:
    """Both appendix aggregates and their per-node contributions (finite lam only)."""
    if not regime.is_finite:
        raise UnsupportedRegimeError("decomposition terms require a finite lam")
    records = _validated_walk(tree, instance)
    mode = tree.mode
    labels = instance.effective_labels(mode)
    prior = instance.prior
    lam = regime.lam
    alpha = alpha_from_lambda(regime)

    leaf_recs = [r for r in records if isinstance(r.node, Leaf)]
    exp_sum = 0.0
    for rec in leaf_recs:
        mass = float(prior[list(rec.objects)].sum())
        exp_sum += mass * math.exp(rec.depth * math.log(lam))
    l_tilde = (exp_sum - 1.0) / (lam - 1.0)

    root_dist = group_mass_distribution(instance, mode)
    pos_root = root_dist[root_dist > 0]
    scale = math.exp(float(logsumexp(alpha * np.log(pos_root)) / alpha))
    h_tilde = 1.0 - 1.0 / scale

    l_node_terms: dict[int, float] = {}
    h_node_terms: dict[int, float] = {}
    for rec, node_mass, groups, zero, one in _internal_stats(instance, records, mode):
        l_node_terms[rec.index] = math.exp(rec.depth * math.log(lam)) * node_mass
        zero_groups = _group_mass_table(prior, labels, zero)
        one_groups = _group_mass_table(prior, labels, one)
        zero_mass = sum(zero_groups.values())
        one_mass = sum(one_groups.values())
        h_node_terms[rec.index] = (
            (node_mass * _masses_diversity(groups, alpha) if node_mass > 0 else 0.0)
            - (zero_mass * _masses_diversity(zero_groups, alpha) if zero_mass > 0 else 0.0)
            - (one_mass * _masses_diversity(one_groups, alpha) if one_mass > 0 else 0.0)
        )

    return DecompositionTerms(
        l_tilde=l_tilde,
        h_tilde=h_tilde,
        l_node_terms=l_node_terms,
        h_node_terms=h_node_terms,
        scale=scale,
    )
