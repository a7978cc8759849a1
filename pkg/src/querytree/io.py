"""File formats: instance JSON/CSV, tree JSON, and builder-config JSON.

Instance JSON:
    { "queries": [names], "objects": [ {"name", "prior", "group", "responses": [bits]} ] }
("group" is optional and may be any scalar label; loaders normalize ids
to contiguous 1..m and keep the originals for display.)

Instance CSV: header ``name,group,prior,<query names...>``, one row per
object.  An empty group cell means unlabeled.

Tree JSON is the recursive ``{"query": j, "zero": ..., "one": ...}`` with
``{"objects": [indices]}`` leaves.  All indices are 0-based.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .errors import FormatError
from .greedy import BuilderConfig
from .instance import DecisionTree, Internal, Leaf, Mode, ProblemInstance, TreeNode, normalize_labels
from .metrics import LIMIT_INFINITY, LIMIT_ONE, LambdaRegime, finite_lambda


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

def instance_to_json(instance: ProblemInstance) -> dict:
    objects = []
    display = instance.original_labels or instance.labels
    for i in range(instance.num_objects):
        entry: dict = {
            "name": instance.object_name(i),
            "prior": float(instance.prior[i]),
            "responses": [int(b) for b in instance.responses[i]],
        }
        if display is not None:
            entry["group"] = display[i]
        objects.append(entry)
    return {
        "queries": [instance.query_name(j) for j in range(instance.num_queries)],
        "objects": objects,
    }


def instance_from_json(doc: dict) -> ProblemInstance:
    try:
        queries = list(doc["queries"])
        objects = list(doc["objects"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"instance document missing field: {exc}") from exc
    if not objects:
        raise FormatError("instance document has no objects")
    names, priors, rows, raw_groups = [], [], [], []
    labeled = any(isinstance(o, dict) and "group" in o for o in objects)
    for k, obj in enumerate(objects):
        try:
            names.append(str(obj["name"]))
            priors.append(float(obj["prior"]))
            row = [int(b) for b in obj["responses"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"object {k} is malformed: {exc}") from exc
        if len(row) != len(queries):
            raise FormatError(f"object {k} has {len(row)} responses, expected {len(queries)}")
        rows.append(row)
        if labeled:
            if "group" not in obj:
                raise FormatError(f"object {k} is missing its group label")
            raw_groups.append(obj["group"])
    labels = original = None
    if labeled:
        labels, original = normalize_labels(raw_groups)
    return ProblemInstance(
        responses=np.array(rows, dtype=np.uint8),
        prior=np.array(priors),
        labels=labels,
        object_names=tuple(names),
        query_names=tuple(str(q) for q in queries),
        original_labels=original,
    )


def instance_to_csv(instance: ProblemInstance) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["name", "group", "prior"] + [instance.query_name(j) for j in range(instance.num_queries)]
    )
    display = instance.original_labels or instance.labels
    for i in range(instance.num_objects):
        group = "" if display is None else display[i]
        writer.writerow(
            [instance.object_name(i), group, repr(float(instance.prior[i]))]
            + [int(b) for b in instance.responses[i]]
        )
    return buf.getvalue()


def instance_from_csv(text: str) -> ProblemInstance:
    reader = csv.reader(_io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty CSV document") from None
    if len(header) < 4 or header[:3] != ["name", "group", "prior"]:
        raise FormatError("CSV header must start with name,group,prior followed by query names")
    queries = header[3:]
    names, priors, rows, raw_groups = [], [], [], []
    for k, row in enumerate(reader):
        if not row:
            continue
        if len(row) != 3 + len(queries):
            raise FormatError(f"row {k} has {len(row)} cells, expected {3 + len(queries)}")
        names.append(row[0])
        raw_groups.append(row[1])
        try:
            priors.append(float(row[2]))
            rows.append([int(b) for b in row[3:]])
        except ValueError as exc:
            raise FormatError(f"row {k} is malformed: {exc}") from exc
    if not rows:
        raise FormatError("CSV document has no object rows")
    labels = original = None
    if any(g != "" for g in raw_groups):
        if any(g == "" for g in raw_groups):
            raise FormatError("group column must be fully empty or fully populated")
        try:  # numeric labels order numerically, matching the JSON loader
            labels, original = normalize_labels([int(g) for g in raw_groups])
        except ValueError:
            labels, original = normalize_labels(raw_groups)
    return ProblemInstance(
        responses=np.array(rows, dtype=np.uint8),
        prior=np.array(priors),
        labels=labels,
        object_names=tuple(names),
        query_names=tuple(queries),
        original_labels=original,
    )


def read_instance(path: str | Path) -> ProblemInstance:
    """Load an instance from a .json or .csv file (by extension)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return instance_from_csv(text)
    return instance_from_json(json.loads(text))


def write_instance(instance: ProblemInstance, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(instance_to_csv(instance))
    else:
        path.write_text(json.dumps(instance_to_json(instance), indent=2) + "\n")


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

def tree_to_json(tree: DecisionTree) -> dict:
    def encode(node: TreeNode) -> dict:
        if isinstance(node, Leaf):
            return {"objects": list(node.objects)}
        return {"query": node.query, "zero": encode(node.zero), "one": encode(node.one)}

    return encode(tree.root)


def tree_from_json(doc: dict, mode: Mode = "object") -> DecisionTree:
    def decode(node: dict) -> TreeNode:
        if not isinstance(node, dict):
            raise FormatError(f"tree node must be an object, got {type(node).__name__}")
        if "objects" in node:
            return Leaf(tuple(int(i) for i in node["objects"]))
        try:
            return Internal(int(node["query"]), decode(node["zero"]), decode(node["one"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed tree node: {exc}") from exc

    return DecisionTree(decode(doc), mode)


# ---------------------------------------------------------------------------
# Builder configs
# ---------------------------------------------------------------------------

def config_to_json(config: BuilderConfig) -> dict:
    regime = config.regime
    lam: float | str
    if regime.kind == "one":
        lam = "one"
    elif regime.kind == "infinity":
        lam = "infinity"
    else:
        lam = regime.lam
    tiebreak: str | dict = "lowest" if config.tiebreak == "lowest" else {"seed": config.seed}
    return {
        "lambda": lam,
        "mode": config.mode,
        "prior": "uniform" if config.prior_override == "uniform" else "given",
        "tiebreak": tiebreak,
    }


def config_from_json(doc: dict) -> BuilderConfig:
    if not isinstance(doc, dict):
        raise FormatError("builder config must be a JSON object")
    lam = doc.get("lambda", "one")
    if lam == "one" or lam == 1:
        regime: LambdaRegime = LIMIT_ONE
    elif lam == "infinity" or lam == "inf":
        regime = LIMIT_INFINITY
    elif isinstance(lam, (int, float)):
        try:
            regime = finite_lambda(float(lam))
        except Exception as exc:
            raise FormatError(f"invalid lambda {lam!r}: {exc}") from exc
    else:
        raise FormatError(f"invalid lambda {lam!r}")
    mode = doc.get("mode", "object")
    if mode not in ("object", "group"):
        raise FormatError(f"invalid mode {mode!r}")
    prior = doc.get("prior", "given")
    if prior not in ("given", "uniform"):
        raise FormatError(f"invalid prior policy {prior!r}")
    tiebreak = doc.get("tiebreak", "lowest")
    if tiebreak == "lowest":
        return BuilderConfig(regime=regime, mode=mode,
                             prior_override="uniform" if prior == "uniform" else None)
    if isinstance(tiebreak, dict) and "seed" in tiebreak:
        return BuilderConfig(
            regime=regime, mode=mode,
            prior_override="uniform" if prior == "uniform" else None,
            tiebreak="seeded", seed=int(tiebreak["seed"]),
        )
    raise FormatError(f"invalid tiebreak {tiebreak!r}")
