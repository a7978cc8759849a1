"""Cost-vs-lambda sweeps: repeated greedy builds averaged per (algorithm, lambda).

A sweep repeats ``repetitions`` times.  Each repetition draws its own
randomness from the master seed: a fresh Zipf prior permutation when the
source re-priors the instance, and a tie-break seed shared by all
algorithms of that repetition otherwise (fixed-prior sources vary only
through tie-breaking among equally good splits).  Lambda-following
algorithms rebuild their tree at every grid lambda; the others build once
per repetition and are evaluated at every lambda.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .datagen import zipf_prior
from .errors import QueryTreeError
from .greedy import BuilderConfig, build_tree
from .instance import Mode, ProblemInstance
from .metrics import LIMIT_ONE, LambdaRegime, cost_direct

CSV_HEADER = "algorithm,lambda,mean_cost,std_cost,repetitions,failures"


@dataclass(frozen=True)
class SweepAlgorithm:
    """One curve of the sweep.

    ``follow_lambda`` marks the lambda-greedy family, whose builder regime
    tracks the grid; otherwise ``base`` is built as-is once per repetition.
    """

    name: str
    base: BuilderConfig
    follow_lambda: bool = False


def lambda_gbs(mode: Mode = "object") -> SweepAlgorithm:
    return SweepAlgorithm("lambda-gbs", BuilderConfig(LIMIT_ONE, mode=mode), follow_lambda=True)


def gbs(mode: Mode = "object") -> SweepAlgorithm:
    return SweepAlgorithm("gbs", BuilderConfig(LIMIT_ONE, mode=mode))


def uniform_gbs(mode: Mode = "object") -> SweepAlgorithm:
    return SweepAlgorithm(
        "uniform-gbs", BuilderConfig(LIMIT_ONE, mode=mode, prior_override="uniform")
    )


@dataclass(frozen=True)
class InstanceSource:
    """Yields the instance used by one repetition.

    ``zipf_beta`` switches on per-repetition re-priors: the base matrix is
    kept and the prior is redrawn by Zipf permutation, so each repetition
    sees the same queries under a reshuffled prior.  With ``zipf_beta`` None
    the instance is fixed and repetitions differ only in tie-break seeds.
    """

    base: ProblemInstance
    zipf_beta: float | None = None

    def realize(self, rep_seed: int) -> ProblemInstance:
        if self.zipf_beta is None:
            return self.base
        prior, _ = zipf_prior(self.base.num_objects, self.zipf_beta, rep_seed)
        return replace(self.base, prior=prior)


@dataclass(frozen=True)
class SweepRow:
    algorithm: str
    regime: LambdaRegime
    mean_cost: float
    std_cost: float
    repetitions: int
    failures: int


def _rep_seed(master_seed: int, repetition: int, stream: int) -> int:
    folded = int(master_seed) & 0xFFFFFFFFFFFFFFFF  # SeedSequence rejects negatives
    ss = np.random.SeedSequence([folded, int(repetition), stream])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_sweep(
    source: InstanceSource,
    lambda_grid: Sequence[LambdaRegime],
    algorithms: Sequence[SweepAlgorithm],
    repetitions: int,
    seed: int,
    progress: Callable[[int], None] | None = None,
) -> list[SweepRow]:
    """Mean/std of cost_direct per (algorithm, grid lambda) over repetitions.

    Failed repetitions (unidentifiable instances and kin) are excluded
    from the means and counted in the ``failures`` column.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    costs: dict[tuple[str, int], list[float]] = {
        (alg.name, k): [] for alg in algorithms for k in range(len(lambda_grid))
    }
    failures: dict[tuple[str, int], int] = dict.fromkeys(costs, 0)

    for rep in range(repetitions):
        instance = source.realize(_rep_seed(seed, rep, 0))
        tiebreak_seed = _rep_seed(seed, rep, 1)
        for alg in algorithms:
            config = replace(alg.base, tiebreak="seeded", seed=tiebreak_seed)
            if alg.follow_lambda:
                for k, regime in enumerate(lambda_grid):
                    try:
                        tree = build_tree(instance, replace(config, regime=regime))
                        costs[(alg.name, k)].append(cost_direct(tree, instance, regime))
                    except QueryTreeError:
                        failures[(alg.name, k)] += 1
            else:
                try:
                    tree = build_tree(instance, config)
                except QueryTreeError:
                    for k in range(len(lambda_grid)):
                        failures[(alg.name, k)] += 1
                    continue
                for k, regime in enumerate(lambda_grid):
                    costs[(alg.name, k)].append(cost_direct(tree, instance, regime))
        if progress is not None:
            progress(rep)

    rows = []
    for alg in algorithms:
        for k, regime in enumerate(lambda_grid):
            values = costs[(alg.name, k)]
            mean = statistics.fmean(values) if values else float("nan")
            std = statistics.pstdev(values) if values else float("nan")
            rows.append(
                SweepRow(alg.name, regime, mean, std, len(values), failures[(alg.name, k)])
            )
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    """CSV text for the sweep; floats are repr'd so equal runs match byte-for-byte."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            f"{row.algorithm},{row.regime.label},{row.mean_cost!r},"
            f"{row.std_cost!r},{row.repetitions},{row.failures}"
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(rows: Sequence[SweepRow], path: str | Path) -> None:
    Path(path).write_text(sweep_csv(rows))
