"""querytree: query-decision trees with exponentially weighted query costs.

Construct, evaluate, and interactively run binary query-decision trees for
object and group identification: greedy builders for the whole lambda
range, exact entropy-decomposition cost accounting, an optimal-tree
oracle, experiment data generators, a sweep harness, and an HTTP session
service.
"""

from .datagen import random_instance, synthetic_classifier_instance, zipf_prior
from .errors import (
    BudgetExceededError,
    DegenerateSplitError,
    DomainError,
    FormatError,
    GenerationFailedError,
    InconsistentAnswersError,
    InvalidTreeError,
    NotIdentifiableError,
    QueryTreeError,
    UnsupportedRegimeError,
)
from .greedy import BuilderConfig, Identified, argmin_query_set, build_tree, choose_query, next_query
from .instance import (
    DecisionTree,
    Internal,
    Leaf,
    ProblemInstance,
    check_identifiability,
    normalize_labels,
    prune_to_groups,
    traverse,
    validate_instance,
    validate_tree,
    walk,
)
from .metrics import (
    LIMIT_INFINITY,
    LIMIT_ONE,
    CostReport,
    DecompositionTerms,
    LambdaRegime,
    SplitEvaluation,
    alpha_from_lambda,
    binary_entropy,
    cost_direct,
    cost_via_decomposition,
    d_alpha,
    decomposition_terms,
    evaluate_split,
    finite_lambda,
    regime_from_value,
    renyi_entropy,
    shannon_entropy,
)
from .oracle import OracleResult, optimal_tree
from .sweep import InstanceSource, SweepAlgorithm, SweepRow, gbs, lambda_gbs, run_sweep, sweep_csv, uniform_gbs, write_sweep_csv

__version__ = "0.1.0"
