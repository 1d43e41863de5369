"""Command-line front end: ``bipcount <subcommand> ...``.

Exit codes: 0 success, 2 precondition or regime error, 3 resource budget
exceeded, 4 malformed input.  Errors are printed as JSON on stderr, tagged
with the module that raised them.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback

from .errors import BipcountError, MalformedInputError
from .generate import SampleConfig, sample_graph
from .graph import to_json, to_text
from .polymer import DEFAULT_BUDGET
from .report import run_experiment

_PACKAGE_DIR = os.path.dirname(os.path.abspath(__file__))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="work budget for exact enumerations")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="write output here instead of stdout")
    return p


def _algo_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--force", action="store_true", help="bypass regime bounds")
    p.add_argument("--branch", choices=("auto", "brute", "polymer"), default="auto")
    p.add_argument("--m", type=int, help="fixed truncation order (error bound becomes heuristic)")
    p.add_argument("--alpha-n", type=int, dest="alpha_n")
    p.add_argument("--radius", type=float)
    p.add_argument("--n-threshold", type=int, default=24, dest="n_threshold")
    p.add_argument("--c-constant", type=float, default=1.01, dest="c_constant")
    p.add_argument("--no-oracle", action="store_true", dest="no_oracle")


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("hardcore", "coloring"), default="hardcore")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--side", choices=("L", "R"), default="L")
    p.add_argument("--q", type=int)
    p.add_argument("--x", help="colour class, e.g. 1,2")
    p.add_argument("--alpha-n", type=int, dest="alpha_n")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="bipcount", description="Polymer-model counting on bipartite graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="sample a graph from the matching model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("props", parents=[common], help="check structural properties")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", default="exact", help="exact, sampled, sampled(K) or auto")
    p.add_argument("--regime", choices=("is-high", "is-low", "coloring"), default="is-high")
    p.add_argument("--q", type=int)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("count-is", parents=[common], help="estimate the hardcore partition function")
    p.add_argument("--graph", required=True)
    p.add_argument("--lambda", dest="lam", default="1")
    _algo_flags(p)

    p = sub.add_parser("count-colorings", parents=[common], help="estimate the number of proper colorings")
    p.add_argument("--graph", required=True)
    p.add_argument("--q", type=int, required=True)
    _algo_flags(p)

    p = sub.add_parser("oracle", parents=[common], help="exact brute-force counts")
    p.add_argument("--graph", required=True)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--is", action="store_true", dest="is_")
    kind.add_argument("--colorings", action="store_true")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--q", type=int)
    p.add_argument("--cluster", help="L or R for independent sets, a colour set like 1,2 for colorings")
    p.add_argument("--alpha-n", type=int, dest="alpha_n")

    p = sub.add_parser("xi", parents=[common], help="truncated cluster expansion of one polymer model")
    p.add_argument("--graph", required=True)
    _model_flags(p)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--m", type=int)
    p.add_argument("--exact", action="store_true", help="also enumerate Xi(1) exactly")

    p = sub.add_parser("kp-check", parents=[common], help="Kotecky-Preiss condition on one graph")
    p.add_argument("--graph", required=True)
    _model_flags(p)
    p.add_argument("--a-coeff", type=float, dest="a_coeff")
    p.add_argument("--radius", type=float, default=1.0)

    p = sub.add_parser("experiment", parents=[common], help="run a JSON experiment config")
    p.add_argument("config", help="path to the config file")
    return parser


def _graph_spec(args) -> dict:
    return {"path": args.graph}


def _algo_task(args, op: str) -> dict:
    task = {"op": op, "eps": args.eps, "force": args.force, "branch": args.branch, "m": args.m,
            "alpha_n": args.alpha_n, "radius": args.radius, "n_threshold": args.n_threshold,
            "c_constant": args.c_constant, "oracle": not args.no_oracle}
    return task


def _model_task(args, op: str) -> dict:
    task = {"op": op, "model": args.model, "lambda": args.lam, "side": args.side, "q": args.q,
            "x": args.x, "alpha_n": args.alpha_n}
    if args.model == "coloring" and args.q is None:
        raise MalformedInputError("--q is required for the coloring model")
    return task


def config_from_args(args) -> dict:
    """Translate one subcommand invocation into an experiment config."""
    base = {"seed": args.seed, "budget": args.budget}
    if args.command == "experiment":
        with open(args.config) as fh:
            try:
                cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedInputError(exc.msg, exc.lineno) from None
        return {**base, **cfg}
    if args.command == "props":
        task = {"op": "props", "regime": args.regime, "mode": args.mode, "q": args.q, "force": args.force,
                "alpha": args.alpha, "beta": args.beta, "budget": args.budget}
    elif args.command == "count-is":
        task = {**_algo_task(args, "count-is"), "lambda": args.lam}
    elif args.command == "count-colorings":
        task = {**_algo_task(args, "count-colorings"), "q": args.q}
    elif args.command == "oracle":
        if args.colorings and args.q is None:
            raise MalformedInputError("--q is required with --colorings")
        if args.cluster is not None and args.alpha_n is None:
            raise MalformedInputError("--cluster needs --alpha-n")
        task = {"op": "oracle", "colorings": args.colorings, "lambda": args.lam, "q": args.q,
                "cluster": args.cluster, "alpha_n": args.alpha_n}
    elif args.command == "xi":
        task = {**_model_task(args, "xi"), "eps": args.eps, "radius": args.radius, "m": args.m,
                "exact": args.exact}
    else:
        task = {**_model_task(args, "kp-check"), "radius": args.radius}
        if args.a_coeff is not None:
            task["a_coeff"] = args.a_coeff
    return {**base, "graph": _graph_spec(args), "tasks": [task]}


def _origin(exc: BaseException) -> str:
    """Module inside this package where the exception was raised."""
    origin = "cli"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        path = os.path.abspath(frame.f_code.co_filename)
        if path.startswith(_PACKAGE_DIR):
            origin = os.path.splitext(os.path.basename(path))[0]
    return origin


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            G = sample_graph(SampleConfig(args.n, args.delta, args.seed))
            _emit(to_json(G) + "\n" if args.format == "json" else to_text(G), args.out)
            return 0
        report = run_experiment(config_from_args(args), threads=args.threads)
        _emit(report.to_json() + "\n", args.out)
        return 1 if report.violations else 0
    except BipcountError as exc:
        err = {"error": type(exc).__name__, "module": _origin(exc), "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": "OSError", "module": "cli", "message": str(exc)}), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
