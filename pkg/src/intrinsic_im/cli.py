"""Command-line interface.

Every command writes a machine-readable payload to ``--output`` (stdout by
default). JSON payloads are ``{"metadata": ..., "result": ...}``; CSV
payloads start with ``# key=value`` metadata lines. The metadata holds a
hash of the command configuration (excluding ``--threads`` and
``--output``), the seed and package versions, and nothing time-dependent, so
two runs with the same seed give byte-identical output.

Exit codes: 0 success, 2 invalid input, 3 solver did not converge.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import platform
import sys

import numpy as np

from . import __version__
from ._parallel import thread_limit
from .exceptions import NotConverged, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED = 0, 2, 3
_NOT_CONFIG = {"threads", "output", "func"}


def _versions():
    import numba
    import scipy
    import sklearn

    return {"intrinsic_im": __version__, "numpy": np.__version__,
            "scipy": scipy.__version__, "scikit-learn": sklearn.__version__,
            "numba": numba.__version__, "python": platform.python_version()}


def _metadata(args):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return {"command": args.command,
            "config_hash": hashlib.sha256(blob).hexdigest(),
            "seed": args.seed,
            "versions": _versions()}


def _emit(args, result, rows=None, fieldnames=None):
    """Write ``result`` as JSON, or ``rows`` as CSV when ``--format csv``."""
    meta = _metadata(args)
    if getattr(args, "format", "json") == "csv" and rows is not None:
        buf = io.StringIO()
        for key, value in meta.items():
            if isinstance(value, dict):
                value = ",".join(f"{k}:{v}" for k, v in value.items())
            buf.write(f"# {key}={value}\n")
        out = csv.DictWriter(buf, fieldnames=fieldnames or list(rows[0]),
                             lineterminator="\n")
        out.writeheader()
        out.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps({"metadata": meta, "result": result}, indent=2) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _csv_list(text, cast=str):
    items = [x.strip() for x in str(text).split(",") if x.strip()]
    try:
        return [cast(x) for x in items]
    except ValueError:
        raise ValidationError(f"cannot parse list {text!r}") from None


# graph loading ----------------------------------------------------------

def _load(args):
    from .graph import normalize_weighted_cascade
    from .io import load_graph

    g = load_graph(args.graph, args.nodes, args.default_alpha)
    return g if args.no_normalize else normalize_weighted_cascade(g)


def _load_or_generate(args):
    from .generators import power_law_graph

    if args.graph is not None:
        return _load(args)
    return power_law_graph(args.n_nodes, random_state=args.seed)


def _samples(args, default=1000):
    return default if args.samples is None else args.samples


def _config(args, mode=None, default=1000):
    from .sampling import SamplerConfig

    return SamplerConfig(args.seed, _samples(args, default),
                         mode if mode is not None else args.mode)


# commands ---------------------------------------------------------------

def cmd_normalize(args):
    from .graph import normalize_weighted_cascade
    from .io import load_graph, write_edges, write_nodes

    g = normalize_weighted_cascade(load_graph(args.graph, args.nodes, args.default_alpha))
    write_edges(g, args.out_edges)
    if args.out_nodes:
        write_nodes(g, args.out_nodes)
    _emit(args, {"n_nodes": g.n_nodes, "n_edges": g.n_edges,
                 "edges": args.out_edges, "nodes": args.out_nodes})


def cmd_spread(args):
    from .spread import estimate_spread

    g = _load(args)
    seeds = _csv_list(args.seeds)
    est = estimate_spread(g, seeds, _config(args), args.objective)
    _emit(args, est.as_dict())


def cmd_greedy(args):
    from .greedy import greedy

    g = _load(args)
    trace = greedy(g, args.k, _config(args), args.objective, lazy=args.lazy)
    result = trace.as_dict(g.labels)
    result["ids"] = list(trace.seeds)
    rows = [{"step": i + 1, "seed": g.labels[s], "marginal_gain": m,
             "cumulative_spread": c, "std_error": e}
            for i, (s, m, c, e) in enumerate(zip(trace.seeds, trace.marginal_gain,
                                                 trace.cumulative_spread,
                                                 trace.std_error))]
    _emit(args, result, rows)


def cmd_centrality(args):
    from .centrality import rank_scores, solve_linear_system
    from .validation import check_k

    g = _load(args)
    k = check_k(args.k, g.n_nodes)
    cv, probs = solve_linear_system(g, args.tol, args.max_iter)
    top = rank_scores(cv.c_a, k)
    result = {"c_a": {lab: float(x) for lab, x in zip(g.labels, cv.c_a)},
              "top_k": [g.labels[i] for i in top],
              "converged": cv.converged, "iterations": cv.iterations,
              "residual": cv.residual}
    rows = [{"node": lab, "c_a": float(x), "p": float(p)}
            for lab, x, p in zip(g.labels, cv.c_a, probs.p)]
    _emit(args, result, rows)


def _read_ranking(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    if isinstance(data, dict) and "result" in data:
        data = data["result"]
    if isinstance(data, dict):
        for key in ("ranking", "top_k", "seeds"):
            if key in data:
                data = data[key]
                break
    if not isinstance(data, list):
        raise ValidationError(f"{path}: expected a JSON list of node names")
    return [str(x) for x in data]


def cmd_compare(args):
    from .rank_compare import compare_rankings

    a, b = _read_ranking(args.first), _read_ranking(args.second)
    depths = _csv_list(args.k, int) if args.k else [min(len(a), len(b))]
    rows = compare_rankings(a, b, depths, args.rbo_p)
    _emit(args, {"p": args.rbo_p, "rows": rows}, rows)


def cmd_ingest(args):
    from .estimation import (FOLLOWER_HEADER, InteractionLog,
                             build_interaction_graph)
    from .io import read_tsv, write_edges, write_nodes

    nodes, edges = {}, []
    for user, follower in read_tsv(args.follows, FOLLOWER_HEADER):
        nodes.setdefault(user)
        nodes.setdefault(follower)
        edges.append((user, follower))
    log = InteractionLog.from_tsv(args.interactions, args.intrinsic)
    g, report = build_interaction_graph(list(nodes), edges, log, args.default_alpha)
    write_edges(g, args.out_edges)
    write_nodes(g, args.out_nodes)
    _emit(args, {"n_nodes": g.n_nodes, "n_edges": g.n_edges,
                 "dropped_pairs": report.dropped_pairs,
                 "no_activity": report.no_activity})


def cmd_sample_graph(args):
    from .estimation import OfflineFollowerProvider, snowball_sample

    provider = OfflineFollowerProvider.from_tsv(args.followers)
    sg = snowball_sample(provider, args.seed_user, args.k_in, args.k_out, args.n,
                         args.max_rounds, random_state=args.seed)
    with open(args.out_follows, "w", newline="") as fh:
        out = csv.writer(fh, delimiter="\t", lineterminator="\n")
        out.writerow(("user", "follower"))
        out.writerows(sg.edges)
    _emit(args, {"n_nodes": len(sg.nodes), "n_edges": len(sg.edges),
                 "rounds": sg.rounds, "exhausted": sg.exhausted,
                 "nodes": sg.nodes})


def cmd_orgtree_sweep(args):
    from .experiments import ORG_SAMPLES, run_orgtree_sweep

    deltas = _csv_list(args.deltas, float)
    rows = run_orgtree_sweep(deltas, _samples(args, ORG_SAMPLES), args.seed)
    _emit(args, rows, rows)


def cmd_alpha_experiment(args):
    from .experiments import run_alpha_experiment

    g = _load_or_generate(args)
    curves = run_alpha_experiment(g, _csv_list(args.policies), args.runs, args.k,
                                  _samples(args), args.seed, args.objective)
    rows = [{"k": i + 1, **{c.name: float(c.mean[i]) for c in curves},
             **{f"{c.name}_std": float(c.std[i]) for c in curves}}
            for i in range(args.k)]
    _emit(args, [c.as_dict() for c in curves], rows)


def cmd_ic_vs_icint(args):
    from .experiments import run_ic_vs_icint

    g = _load_or_generate(args)
    cmp = run_ic_vs_icint(g, args.k, args.runs, _samples(args), args.seed,
                          args.policy, args.objective)
    rows = [{"k": i + 1, "ic": float(cmp.ic.mean[i]),
             "icint_mean": float(cmp.icint.mean[i]),
             "icint_min": float(cmp.icint.spread[:, i].min()),
             "icint_max": float(cmp.icint.spread[:, i].max())}
            for i in range(cmp.ic.spread.shape[1])]
    _emit(args, cmp.as_dict(), rows)


def cmd_gen_graph(args):
    from .generators import power_law_graph
    from .io import write_edges, write_nodes

    in_exp = None if args.in_exponent.lower() == "none" else float(args.in_exponent)
    g = power_law_graph(args.n_nodes, args.mean_degree, args.exponent, in_exp,
                        args.reciprocity, args.alpha, random_state=args.seed)
    write_edges(g, args.out_edges)
    write_nodes(g, args.out_nodes)
    _emit(args, {"n_nodes": g.n_nodes, "n_edges": g.n_edges,
                 "max_out_degree": int(g.out_degree().max())})


# parser -----------------------------------------------------------------

def _graph_args(p, required=True):
    p.add_argument("--graph", required=required, help="edge TSV (src, dst, weight)")
    p.add_argument("--nodes", help="node TSV (node, alpha)")
    p.add_argument("--default-alpha", type=float, default=0.5,
                   help="alpha of nodes missing from --nodes")
    p.add_argument("--no-normalize", action="store_true",
                   help="use edge weights as probabilities without normalizing")


def _format_arg(p, default="json"):
    p.add_argument("--format", choices=("json", "csv"), default=default)


def _diffusion_args(p):
    p.add_argument("--mode", choices=("icint", "ic"), default="icint")
    p.add_argument("--objective", choices=("influenced", "literal"),
                   default="influenced")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master random seed")
    common.add_argument("--samples", type=int, default=None,
                        help="Monte Carlo samples (command-specific default)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads; results do not depend on it")
    common.add_argument("--output", default="-", help="result file (default stdout)")

    parser = argparse.ArgumentParser(
        prog="intrinsic-im",
        description="Influence maximization with intrinsic activation.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=func)
        return p

    p = add("normalize", cmd_normalize, "normalize raw weights to a weighted cascade")
    _graph_args(p)
    p.add_argument("--out-edges", required=True)
    p.add_argument("--out-nodes")

    p = add("spread", cmd_spread, "Monte Carlo spread of a seed set")
    _graph_args(p)
    _diffusion_args(p)
    p.add_argument("--seeds", required=True, help="comma-separated node names")

    p = add("greedy", cmd_greedy, "greedy seed selection")
    _graph_args(p)
    _diffusion_args(p)
    _format_arg(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lazy", action=argparse.BooleanOptionalAction, default=True)

    p = add("centrality", cmd_centrality, "activation centrality ranking")
    _graph_args(p)
    _format_arg(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=None)

    p = add("compare", cmd_compare, "Jaccard and RBO of two rankings")
    _format_arg(p)
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--k", default="10,20,30,50",
                   help="comma-separated depths")
    p.add_argument("--rbo-p", type=float, default=0.9)

    p = add("ingest", cmd_ingest, "build a weighted graph from interaction data")
    p.add_argument("--follows", required=True, help="TSV (user, follower)")
    p.add_argument("--interactions", help="TSV (followee, follower, count)")
    p.add_argument("--intrinsic", help="TSV (user, intrinsic_count)")
    p.add_argument("--default-alpha", type=float, default=0.5)
    p.add_argument("--out-edges", required=True)
    p.add_argument("--out-nodes", required=True)

    p = add("sample-graph", cmd_sample_graph, "snowball-sample a follower graph")
    p.add_argument("--followers", required=True, help="TSV (user, follower)")
    p.add_argument("--seed-user", required=True)
    p.add_argument("--k-in", type=int, default=15)
    p.add_argument("--k-out", type=int, default=11)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--max-rounds", type=int, default=20)
    p.add_argument("--out-follows", required=True)

    p = add("orgtree-sweep", cmd_orgtree_sweep, "org-tree delta sweep")
    _format_arg(p, "csv")
    p.add_argument("--deltas", default="0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45")

    p = add("alpha-experiment", cmd_alpha_experiment, "greedy curves per alpha policy")
    _graph_args(p, required=False)
    _format_arg(p, "csv")
    p.add_argument("--n-nodes", type=int, default=1000,
                   help="size of the generated graph when --graph is absent")
    p.add_argument("--policies",
                   default="uniform:0:0.2,uniform:0.4:0.6,uniform:0.8:1,outdegree")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--k", type=int, default=30)
    p.add_argument("--objective", choices=("influenced", "literal"),
                   default="influenced")

    p = add("ic-vs-icint", cmd_ic_vs_icint, "IC greedy curve against IC-Int curves")
    _graph_args(p, required=False)
    _format_arg(p, "csv")
    p.add_argument("--n-nodes", type=int, default=1000)
    p.add_argument("--policy", default="uniform:0:1")
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--objective", choices=("influenced", "literal"),
                   default="influenced")

    p = add("gen-graph", cmd_gen_graph, "generate a power-law follower-style graph")
    p.add_argument("--n-nodes", type=int, default=1000)
    p.add_argument("--mean-degree", type=float, default=11.0)
    p.add_argument("--exponent", type=float, default=2.0)
    p.add_argument("--in-exponent", default="2.0", help="number or 'none'")
    p.add_argument("--reciprocity", type=float, default=0.22)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--out-edges", required=True)
    p.add_argument("--out-nodes", required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with thread_limit(args.threads):
            args.func(args)
    except NotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
