"""Command-line interface: ``hypercomm {generate,detect,eval,bench}``.

Exit status: 0 success, 2 usage error, 3 data error (unreadable or invalid
input), 4 numerical failure during fitting.
"""
from __future__ import annotations

import argparse
import json
import logging
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bench import METHODS, UNSUPPORTED, benchmark, format_table, workers_from_env, write_csv, write_json
from .errors import HypercommError, NumericalFailure
from .hypergraph import load_hyperedge_list, load_labels, save_labels
from .metrics import hamming_error, hellinger
from .optimizer import AUTO, FitConfig, fit
from .synth import generate, load_embedding, save_embedding, write_instance

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4

log = logging.getLogger("hypercomm")


class DataError(Exception):
    pass


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _at_least_two(text):
    value = _positive_int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"expected an integer >= 2, got {value}")
    return value


def _sparsity(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"sparsity must lie in (0, 1], got {value}")
    return value


def _auto_or(kind):
    def parse(text):
        return AUTO if text == AUTO else kind(text)

    parse.__name__ = kind.__name__
    return parse


def _non_negative(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {value}")
    return value


def _positive_float(text):
    value = _non_negative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive number")
    return value


def _float_list(kind):
    def parse(text):
        return [kind(tok) for tok in text.split(",") if tok.strip()]

    return parse


def _methods(text):
    names = [tok.strip().lower() for tok in text.split(",") if tok.strip()]
    for name in names:
        if name in UNSUPPORTED:
            raise argparse.ArgumentTypeError(f"method {name!r} is unsupported (not implemented)")
        if name not in METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {name!r}; choose from {','.join(METHODS)}")
    return names


def _write_manifest(prefix, command, args, config, seed, inputs, outputs, started, extra=None):
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "config": config,
        "seed": seed,
        "inputs": inputs,
        "outputs": outputs,
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "seconds": time.perf_counter() - started,
    }
    manifest.update(extra or {})
    with open(f"{prefix}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, default=str)


def _ensure_parent(prefix):
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)


def cmd_generate(args):
    started = time.perf_counter()
    h, truth = generate(args.scenario, n=args.n, K=args.k, m=args.m, r=args.r, s_n=args.sn, seed=args.seed)
    _ensure_parent(args.out)
    write_instance(args.out, h, truth)
    outputs = [f"{args.out}.{ext}" for ext in ("hg", "labels", "alpha.csv")]
    config = dict(scenario=args.scenario, n=args.n, K=args.k, m=args.m, r=args.r, s_n=args.sn)
    _write_manifest(args.out, "generate", args, config, args.seed, [], outputs, started,
                    {"edges": len(h.edges)})
    print(f"wrote {len(h.edges)} hyperedges on {h.n} vertices to {args.out}.hg")
    return 0


def cmd_detect(args):
    started = time.perf_counter()
    try:
        h = load_hyperedge_list(
            args.input, n=args.n, min_size=args.min_size, max_size=args.max_size, clique_m=args.clique_expand
        )
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc}") from exc
    config = FitConfig(
        K=args.k, r=args.r, s_n=args.sn, lambda0=args.lambda0, lambda1=args.lambda1,
        eta0=args.eta, tol=args.tol, max_outer=args.max_iter, seed=args.seed,
    )
    try:
        config.resolve(h, args.min_size or 1)
    except ValueError as exc:
        raise DataError(f"configuration does not fit the input: {exc}") from exc
    result = fit(h, config, min_size=args.min_size or 1)
    _ensure_parent(args.out)
    save_labels(result.labels, f"{args.out}.labels")
    save_embedding(result.alpha_hat, f"{args.out}.alpha.csv")
    with open(f"{args.out}.trace.csv", "w", encoding="utf-8") as fh:
        fh.write("iteration,objective,eta\n")
        for i, (obj, eta) in enumerate(zip(result.loss_trace, result.eta_trace)):
            fh.write(f"{i},{obj!r},{eta!r}\n")
    outputs = [f"{args.out}.{ext}" for ext in ("labels", "alpha.csv", "trace.csv")]
    _write_manifest(
        args.out, "detect", args, result.config.to_dict(), args.seed, [str(args.input)], outputs, started,
        {"converged": result.converged, "outer_iters": result.outer_iters,
         "final_objective": result.loss_trace[-1], "final_eta": result.final_eta,
         "n": h.n, "m": h.m, "edges": len(h.edges)},
    )
    status = "converged" if result.converged else "stopped at iteration cap"
    print(f"{status} after {result.outer_iters} iterations; objective {result.loss_trace[-1]:.6g}")
    return 0


def cmd_eval(args):
    try:
        truth = load_labels(args.truth)
        pred = load_labels(args.pred)
    except OSError as exc:
        raise DataError(str(exc)) from exc
    if truth.shape != pred.shape:
        raise DataError(f"label files differ in length: {truth.size} vs {pred.size}")
    try:
        report = {"hamming_error": hamming_error(truth, pred, args.k)}
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    if args.alpha_true or args.alpha_pred:
        if not (args.alpha_true and args.alpha_pred and args.sn and args.m):
            raise DataError("Hellinger distance needs --alpha-true, --alpha-pred, --sn and --m")
        a_true, a_pred = load_embedding(args.alpha_true), load_embedding(args.alpha_pred)
        if a_true.shape[0] != a_pred.shape[0]:
            raise DataError("embedding files differ in vertex count")
        report["hellinger"] = hellinger(a_pred, a_true, a_true.shape[0] - 1, args.m, args.sn)
    if args.json:
        print(json.dumps(report))
    else:
        for key, value in report.items():
            print(f"{key}: {value!r}")
    return 0


def cmd_bench(args):
    started = time.perf_counter()
    grid = [(args.scenario, n, s) for n in args.n_list for s in args.sn_list]
    fit_options = {}
    if args.max_iter is not None:
        fit_options["max_outer"] = args.max_iter
    reports = benchmark(
        grid, methods=args.methods, reps=args.reps, seed=args.seed, K=args.k, m=args.m, r=args.r,
        workers=workers_from_env(), fit_options=fit_options or None,
    )
    _ensure_parent(args.out)
    write_csv(reports, f"{args.out}.csv")
    write_json(reports, f"{args.out}.json")
    config = dict(scenario=args.scenario, n_list=args.n_list, sn_list=args.sn_list, reps=args.reps,
                  methods=args.methods, K=args.k, m=args.m, r=args.r, fit_options=fit_options)
    _write_manifest(args.out, "bench", args, config, args.seed, [],
                    [f"{args.out}.csv", f"{args.out}.json"], started)
    print(format_table(reports))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="hypercomm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a planted-partition hypergraph")
    g.add_argument("--scenario", type=int, choices=(1, 2), required=True)
    g.add_argument("--n", type=_positive_int, default=300)
    g.add_argument("--k", type=_positive_int, default=2)
    g.add_argument("--m", type=_at_least_two, default=3)
    g.add_argument("--r", type=_at_least_two, default=10)
    g.add_argument("--sn", type=_sparsity, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output prefix")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("detect", help="fit the embedding model to a .hg file")
    d.add_argument("--input", required=True)
    d.add_argument("--k", type=_at_least_two, required=True)
    d.add_argument("--r", type=_positive_int, required=True)
    d.add_argument("--sn", type=_auto_or(_sparsity), default=AUTO)
    d.add_argument("--lambda0", type=_auto_or(_non_negative), default=AUTO)
    d.add_argument("--lambda1", type=_auto_or(_non_negative), default=AUTO)
    d.add_argument("--eta", type=_auto_or(_positive_float), default=AUTO)
    d.add_argument("--tol", type=_positive_float, default=1e-6)
    d.add_argument("--max-iter", type=int, default=500)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--n", type=_positive_int, default=None, help="override the vertex count")
    d.add_argument("--clique-expand", type=_at_least_two, default=None, metavar="M")
    d.add_argument("--min-size", type=_positive_int, default=None)
    d.add_argument("--max-size", type=_positive_int, default=None)
    d.add_argument("--out", required=True, help="output prefix")
    d.set_defaults(func=cmd_detect)

    e = sub.add_parser("eval", help="score predicted labels (and embeddings) against the truth")
    e.add_argument("--truth", required=True)
    e.add_argument("--pred", required=True)
    e.add_argument("--k", type=_at_least_two, required=True)
    e.add_argument("--alpha-true")
    e.add_argument("--alpha-pred")
    e.add_argument("--sn", type=_sparsity)
    e.add_argument("--m", type=_at_least_two)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="replicated comparison on synthetic hypergraphs")
    b.add_argument("--scenario", type=int, choices=(1, 2), required=True)
    b.add_argument("--n-list", type=_float_list(_positive_int), required=True)
    b.add_argument("--sn-list", type=_float_list(_sparsity), required=True)
    b.add_argument("--reps", type=_positive_int, default=50)
    b.add_argument("--methods", type=_methods, default=list(METHODS))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--k", type=_at_least_two, default=2)
    b.add_argument("--m", type=_at_least_two, default=3)
    b.add_argument("--r", type=_at_least_two, default=10)
    b.add_argument("--max-iter", type=int, default=None)
    b.add_argument("--out", required=True, help="output prefix")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "generate" and args.k > args.n:
        parser.error("--k cannot exceed --n")
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"hypercomm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, HypercommError, ValueError, OSError) as exc:
        print(f"hypercomm: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
