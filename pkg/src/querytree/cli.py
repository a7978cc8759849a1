"""Command-line entry points: gen, oracle, sweep, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datagen import random_instance, synthetic_classifier_instance, zipf_prior
from .io import read_instance, tree_to_json, write_instance
from .metrics import LambdaRegime, regime_from_value
from .oracle import DEFAULT_SUBSET_BUDGET, optimal_tree
from .sweep import InstanceSource, SweepAlgorithm, gbs, lambda_gbs, run_sweep, sweep_csv, uniform_gbs


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "zipf":
        prior, permutation = zipf_prior(args.m, args.beta, args.seed)
        doc = {
            "m": args.m,
            "beta": args.beta,
            "seed": args.seed,
            "prior": [float(x) for x in prior],
            "permutation": [int(x) for x in permutation],
        }
        _write_output(json.dumps(doc, indent=2) + "\n", args.out)
        return 0
    if args.kind == "classifiers":
        instance = synthetic_classifier_instance(args.c_count, args.beta, args.seed)
    else:
        instance = random_instance(
            args.m, args.n, args.density, args.seed,
            mode="group" if args.groups else "object",
            group_count=args.groups,
        )
    if args.out:
        write_instance(instance, args.out)
    else:
        from .io import instance_to_json

        sys.stdout.write(json.dumps(instance_to_json(instance), indent=2) + "\n")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    instance = read_instance(args.instance)
    regime = regime_from_value(args.lam)
    result = optimal_tree(instance, regime, args.mode, max_subsets=args.budget)
    print(f"optimal cost (lambda={regime.label}, mode={args.mode}): {result.cost!r}")
    print(f"subsets explored: {result.subsets_explored}")
    if args.out:
        Path(args.out).write_text(json.dumps(tree_to_json(result.tree), indent=2) + "\n")
        print(f"tree written to {args.out}")
    return 0


def _parse_gen_spec(spec: str) -> object:
    """'classifiers:c_count=5,beta=1' or 'random:m=8,n=10,density=0.5,groups=2,seed=0'."""
    kind, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            params[key.strip()] = value.strip()
    if kind == "classifiers":
        return synthetic_classifier_instance(
            int(params.get("c_count", 25)), float(params.get("beta", 0.0)),
            int(params["seed"]) if "seed" in params else None,
        )
    if kind == "random":
        groups = int(params["groups"]) if "groups" in params else None
        return random_instance(
            int(params["m"]), int(params["n"]), float(params.get("density", 0.5)),
            int(params.get("seed", 0)),
            mode="group" if groups else "object", group_count=groups,
        )
    raise SystemExit(f"unknown --gen spec kind {kind!r}")


def _cmd_sweep(args: argparse.Namespace) -> int:
    if bool(args.instance) == bool(args.gen):
        raise SystemExit("exactly one of --instance and --gen is required")
    instance = read_instance(args.instance) if args.instance else _parse_gen_spec(args.gen)
    source = InstanceSource(instance, zipf_beta=args.zipf_beta)

    grid: list[LambdaRegime] = [regime_from_value(tok) for tok in args.lambdas.split(",")]
    names = {"lambda-gbs": lambda_gbs, "gbs": gbs, "uniform-gbs": uniform_gbs}
    algorithms: list[SweepAlgorithm] = []
    for token in args.algorithms.split(","):
        token = token.strip()
        if token not in names:
            raise SystemExit(f"unknown algorithm {token!r}; choose from {sorted(names)}")
        algorithms.append(names[token](args.mode))

    rows = run_sweep(source, grid, algorithms, repetitions=args.reps, seed=args.seed)
    _write_output(sweep_csv(rows), args.out)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        data_dir=args.data_dir,
        cors_origin=args.cors_origin,
        idle_ttl=args.idle_ttl,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="querytree")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate priors and instances")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    g_zipf = gen_sub.add_parser("zipf", help="Zipf prior with a seeded permutation")
    g_zipf.add_argument("--m", type=int, required=True)
    g_zipf.add_argument("--beta", type=float, required=True)
    g_zipf.add_argument("--seed", type=int, required=True)
    g_zipf.add_argument("--out")
    g_cls = gen_sub.add_parser("classifiers", help="2-D linear-classifier instance")
    g_cls.add_argument("--c-count", dest="c_count", type=int, required=True)
    g_cls.add_argument("--beta", type=float, default=0.0)
    g_cls.add_argument("--seed", type=int, default=None)
    g_cls.add_argument("--out")
    g_rnd = gen_sub.add_parser("random", help="random Bernoulli instance")
    g_rnd.add_argument("--m", type=int, required=True)
    g_rnd.add_argument("--n", type=int, required=True)
    g_rnd.add_argument("--density", type=float, default=0.5)
    g_rnd.add_argument("--groups", type=int, default=None)
    g_rnd.add_argument("--seed", type=int, required=True)
    g_rnd.add_argument("--out")
    for sp in (g_zipf, g_cls, g_rnd):
        sp.set_defaults(func=_cmd_gen)

    orc = sub.add_parser("oracle", help="exact optimal tree on a small instance")
    orc.add_argument("instance", help="instance .json or .csv file")
    orc.add_argument("--lambda", dest="lam", default="1",
                     help="'1' (limit), 'inf' (limit), or a value > 1")
    orc.add_argument("--mode", choices=("object", "group"), default="object")
    orc.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET)
    orc.add_argument("--out", help="write the optimal tree JSON here")
    orc.set_defaults(func=_cmd_oracle)

    sw = sub.add_parser("sweep", help="cost-vs-lambda sweep, CSV output")
    sw.add_argument("--instance", help="instance .json or .csv file")
    sw.add_argument("--gen", help="inline generator spec, e.g. classifiers:c_count=5,beta=1")
    sw.add_argument("--lambdas", required=True, help="comma list, e.g. 1,1.2,2,inf")
    sw.add_argument("--algorithms", default="lambda-gbs,gbs,uniform-gbs")
    sw.add_argument("--mode", choices=("object", "group"), default="object")
    sw.add_argument("--reps", type=int, default=100)
    sw.add_argument("--seed", type=int, required=True)
    sw.add_argument("--zipf-beta", dest="zipf_beta", type=float, default=None,
                    help="re-draw a permuted Zipf prior each repetition")
    sw.add_argument("--out", help="CSV path (stdout when omitted)")
    sw.set_defaults(func=_cmd_sweep)

    srv = sub.add_parser("serve", help="run the adaptive identification HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--data-dir", dest="data_dir", default=None)
    srv.add_argument("--cors-origin", dest="cors_origin", default=None)
    srv.add_argument("--idle-ttl", dest="idle_ttl", type=float, default=3600.0)
    srv.add_argument("--ui-dir", dest="ui_dir", default=None,
                     help="serve this directory of static files at /")
    srv.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
