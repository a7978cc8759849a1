"""Instance generators: Zipf priors, the 2-D linear-classifier benchmark,
and random binary matrices for test corpora.

All randomness comes from numpy's default generator (PCG64) seeded
explicitly, so every generated object is byte-reproducible from its
arguments.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, GenerationFailedError
from .instance import Mode, ProblemInstance, check_identifiability

RESAMPLE_LIMIT = 1000


def zipf_prior(num_objects: int, beta: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """A Zipf(beta) prior scattered over objects by a seeded permutation.

    Returns (prior, permutation) with prior[permutation[k]] proportional
    to (k+1)**-beta; beta = 0 gives the uniform distribution for any seed
    and large beta concentrates nearly all mass on one object.
    """
    if num_objects < 1:
        raise DomainError("num_objects must be >= 1")
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    weights = np.arange(1, num_objects + 1, dtype=np.float64) ** (-beta)
    weights /= weights.sum()
    permutation = np.random.default_rng(seed).permutation(num_objects)
    prior = np.empty(num_objects)
    prior[permutation] = weights
    return prior, permutation


def synthetic_classifier_instance(
    thresholds_per_axis: int, beta: float, seed: int | None = None
) -> ProblemInstance:
    """The active-learning benchmark: 2-D linear classifiers as objects,
    grid points as queries.

    Classifiers are sign(x_i - c) and sign(c - x_i) for both axes i and
    ``thresholds_per_axis`` threshold values c (unit-spaced, centered on
    0), giving 4*c_count objects.  Queries are the (c_count+1)**2 cell
    midpoints of the threshold grid; a query's response is 1 iff the
    classifier labels that point positive.  The prior gives Zipf weight
    k**-beta to the k-th classifier when ranked by |c| (ties by object
    index): thresholds near the origin are most likely.  The instance is
    fully deterministic; ``seed`` is accepted for signature parity and
    unused.
    """
    c_count = thresholds_per_axis
    if c_count < 1:
        raise DomainError("thresholds_per_axis must be >= 1")
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    del seed

    thresholds = np.arange(1, c_count + 1, dtype=np.float64) - (c_count + 1) / 2.0
    axis_points = np.concatenate(([thresholds[0] - 0.5], thresholds + 0.5))

    # (axis, orientation, threshold): orientation +1 is sign(x - c), -1 is sign(c - x).
    classifiers: list[tuple[int, int, float]] = []
    names: list[str] = []
    for axis in (0, 1):
        for orientation in (1, -1):
            for c in thresholds:
                classifiers.append((axis, orientation, float(c)))
                if orientation == 1:
                    names.append(f"sign(x{axis + 1}-({c:g}))")
                else:
                    names.append(f"sign(({c:g})-x{axis + 1})")

    points = [(float(px), float(py)) for px in axis_points for py in axis_points]
    query_names = [f"point({px:g},{py:g})" for px, py in points]

    responses = np.zeros((len(classifiers), len(points)), dtype=np.uint8)
    for i, (axis, orientation, c) in enumerate(classifiers):
        for j, point in enumerate(points):
            responses[i, j] = 1 if orientation * (point[axis] - c) > 0 else 0

    rank_order = sorted(range(len(classifiers)), key=lambda i: (abs(classifiers[i][2]), i))
    weights = np.arange(1, len(classifiers) + 1, dtype=np.float64) ** (-beta)
    prior = np.empty(len(classifiers))
    prior[rank_order] = weights / weights.sum()

    return ProblemInstance(
        responses=responses,
        prior=prior,
        object_names=tuple(names),
        query_names=tuple(query_names),
    )


def random_instance(
    num_objects: int,
    num_queries: int,
    density: float,
    seed: int,
    mode: Mode = "object",
    group_count: int | None = None,
) -> ProblemInstance:
    """Seeded i.i.d. Bernoulli(density) matrix, resampled until identifiable
    for ``mode``, with a flat-simplex random prior.

    Labels, when ``group_count`` is given, are assigned round-robin
    (1, 2, ..., group_count, 1, 2, ...).  Raises GenerationFailedError if
    no identifiable matrix appears within the retry bound.
    """
    if num_objects < 1 or num_queries < 1:
        raise DomainError("num_objects and num_queries must be >= 1")
    if not 0.0 < density < 1.0:
        raise DomainError(f"density must lie in (0, 1), got {density}")
    if group_count is not None and not 1 <= group_count <= num_objects:
        raise DomainError(f"group_count must lie in 1..{num_objects}")

    labels = None
    if group_count is not None:
        labels = tuple(i % group_count + 1 for i in range(num_objects))

    rng = np.random.default_rng(seed)
    for _ in range(RESAMPLE_LIMIT):
        responses = (rng.random((num_objects, num_queries)) < density).astype(np.uint8)
        candidate = ProblemInstance(
            responses=responses,
            prior=np.full(num_objects, 1.0 / num_objects),
            labels=labels,
        )
        if check_identifiability(candidate, mode) is None:
            prior = rng.dirichlet(np.ones(num_objects))
            return ProblemInstance(responses=responses, prior=prior, labels=labels)
    raise GenerationFailedError(
        f"no identifiable {num_objects}x{num_queries} matrix at density {density} "
        f"within {RESAMPLE_LIMIT} draws (seed {seed}, mode {mode})"
    )
