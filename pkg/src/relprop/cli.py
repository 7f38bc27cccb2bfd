"""Command-line surface: build-graph, rank, eval, sweep, and synth.

Flags mirror the parameter symbols used throughout the library (--theta,
--sigma for the match kernel; --roots, --depth for the subgraph; --alpha,
--gamma, --iters for propagation). Values resolve as CLI flag over config
file over built-in default. Exit codes: 0 success, 2 input or parse error,
3 query without direct matches, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections.abc import Callable, Mapping
from pathlib import Path

from . import __version__, fileio
from .errors import (
    BadParams,
    IoError,
    MissingTruth,
    NoDirectMatches,
    ParseError,
    RelpropError,
    UnknownQueryId,
)
from .evaluation import SweepSpec, average_precision, mean_ap, run_sweep
from .graph import (
    DEFAULT_SIGMA,
    DEFAULT_THETA,
    KernelParams,
    build_graph,
    load_graph,
    save_graph,
)
from .pipeline import rank_query
from .propagation import (
    DEFAULT_ALPHA,
    DEFAULT_GAMMA,
    DEFAULT_ITERS,
    PropagationParams,
)
from .subgraph import DEFAULT_DEPTH, DEFAULT_ROOT_SIZE, SubgraphParams
from .synthetic import gen_synthetic

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_DIRECT = 3
EXIT_IO = 4

CONFIG_KEYS = ("theta", "sigma", "roots", "depth", "alpha", "gamma", "iters")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ParseError(f"{path}: config must be a JSON object")
    unknown = set(payload) - set(CONFIG_KEYS)
    if unknown:
        raise ParseError(f"{path}: unknown config keys {sorted(unknown)}")
    return payload


def _number(value: object, key: str, conv: Callable[[object], float]) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BadParams(f"config key {key!r} must be a number, got {value!r}")
    if conv is int and float(value) != int(value):
        raise BadParams(f"config key {key!r} must be an integer, got {value!r}")
    return conv(value)


def _scalar(cli_value, config: Mapping, key: str, default, conv):
    """CLI flag > config file > default, rejecting list-valued config here."""
    if cli_value is not None:
        return cli_value
    if key in config:
        if isinstance(config[key], list):
            raise BadParams(f"config key {key!r} must be a single value for this command")
        return conv(_number(config[key], key, conv))
    return default


def _grid(cli_text: str | None, config: Mapping, key: str, default, conv, flag: str) -> tuple:
    """Comma-separated CLI list > config scalar or list > singleton default."""
    if cli_text is not None:
        tokens = [tok.strip() for tok in cli_text.split(",")]
        if not tokens or any(not tok for tok in tokens):
            raise BadParams(f"{flag} must be a comma-separated value list, got {cli_text!r}")
        try:
            return tuple(conv(tok) for tok in tokens)
        except ValueError:
            raise BadParams(f"{flag} has a malformed value in {cli_text!r}") from None
    if key in config:
        value = config[key]
        if isinstance(value, list):
            if not value:
                raise BadParams(f"config key {key!r} must not be an empty list")
            return tuple(conv(_number(v, key, conv)) for v in value)
        return (conv(_number(value, key, conv)),)
    return (default,)


def _progress(args: argparse.Namespace) -> Callable[[str], None] | None:
    if args.quiet:
        return None
    return lambda message: print(message, file=sys.stderr)


def _note(args: argparse.Namespace, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _kernel_from(args: argparse.Namespace, config: Mapping) -> KernelParams:
    return KernelParams(
        theta=_scalar(args.theta, config, "theta", DEFAULT_THETA, int),
        sigma=_scalar(args.sigma, config, "sigma", DEFAULT_SIGMA, float),
    )


def _subgraph_from(args: argparse.Namespace, config: Mapping) -> SubgraphParams:
    return SubgraphParams(
        root_size=_scalar(args.roots, config, "roots", DEFAULT_ROOT_SIZE, int),
        depth=_scalar(args.depth, config, "depth", DEFAULT_DEPTH, int),
    )


def _propagation_from(args: argparse.Namespace, config: Mapping) -> PropagationParams:
    return PropagationParams(
        alpha=_scalar(args.alpha, config, "alpha", DEFAULT_ALPHA, float),
        gamma=_scalar(args.gamma, config, "gamma", DEFAULT_GAMMA, float),
        iters=_scalar(args.iters, config, "iters", DEFAULT_ITERS, int),
    )


def cmd_build_graph(args: argparse.Namespace, config: Mapping) -> None:
    records = fileio.read_matches(args.matches)
    graph = build_graph(records, _kernel_from(args, config))
    save_graph(graph, args.out)
    print(f"vertices={len(graph.vertex_ids)} edges={len(graph.edge_triples())}")
    _note(args, f"wrote {args.out}")


def _pick_query(
    queries: Mapping[str, dict[str, int]], query_id: str | None, path: str
) -> tuple[str, dict[str, int]]:
    if query_id is not None:
        if query_id not in queries:
            raise UnknownQueryId(f"query {query_id!r} not present in {path}")
        return query_id, queries[query_id]
    if not queries:
        raise ParseError(f"{path}: no queries found")
    if len(queries) > 1:
        raise BadParams(
            f"{path} holds {len(queries)} queries; select one with --query-id"
        )
    ((sole_id, counts),) = queries.items()
    return sole_id, counts


def cmd_rank(args: argparse.Namespace, config: Mapping) -> None:
    graph = load_graph(args.graph)
    queries = fileio.read_queries(args.query)
    query_id, counts = _pick_query(queries, args.query_id, args.query)
    result = rank_query(
        graph,
        counts,
        query_id=query_id,
        subgraph_params=_subgraph_from(args, config),
        propagation_params=_propagation_from(args, config),
        use_subgraph=not args.no_subgraph,
    )
    fileio.write_ranking(args.out, query_id, result.ranking)
    scope = result.subgraph.order if result.subgraph is not None else len(graph.vertex_ids)
    _note(args, f"{query_id}: ranked {len(result.ranking)} of {scope} candidates -> {args.out}")


def cmd_eval(args: argparse.Namespace, config: Mapping) -> None:
    truths = fileio.read_truths(args.truth)
    scored: dict[str, float] = {}
    for ranking_path in args.rankings:
        query_id, ranking = fileio.read_ranking(ranking_path)
        if query_id in scored:
            raise BadParams(f"duplicate ranking for query {query_id!r} ({ranking_path})")
        if query_id not in truths:
            raise MissingTruth(f"no ground truth for query {query_id!r} ({ranking_path})")
        scored[query_id] = average_precision([vid for vid, _ in ranking], truths[query_id])
    lines = [(query_id, scored[query_id]) for query_id in sorted(scored)]
    for query_id, ap in lines:
        print(f"{query_id}\t{ap:.6f}")
    overall = mean_ap([ap for _, ap in lines])
    print(f"mAP\t{overall:.6f}")
    if args.csv is not None:
        try:
            with Path(args.csv).open("w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["query_id", "ap"])
                for query_id, ap in lines:
                    writer.writerow([query_id, f"{ap:.6f}"])
                writer.writerow(["mAP", f"{overall:.6f}"])
        except OSError as exc:
            raise IoError(f"cannot write {args.csv}: {exc.strerror or exc}") from exc
        _note(args, f"wrote {args.csv}")


def cmd_sweep(args: argparse.Namespace, config: Mapping) -> None:
    if args.workers < 1:
        raise BadParams(f"--workers must be >= 1, got {args.workers}")
    graph = load_graph(args.graph)
    queries = fileio.read_queries(args.queries)
    if not queries:
        raise ParseError(f"{args.queries}: no queries found")
    truths = fileio.read_truths(args.truth)
    spec = SweepSpec(
        root_sizes=_grid(args.roots, config, "roots", DEFAULT_ROOT_SIZE, int, "--roots"),
        depths=_grid(args.depth, config, "depth", DEFAULT_DEPTH, int, "--depth"),
        alphas=_grid(args.alpha, config, "alpha", DEFAULT_ALPHA, float, "--alpha"),
        gammas=_grid(args.gamma, config, "gamma", DEFAULT_GAMMA, float, "--gamma"),
        iters=_grid(args.iters, config, "iters", DEFAULT_ITERS, int, "--iters"),
    )
    rows = run_sweep(
        graph,
        sorted(queries.items()),
        truths,
        spec,
        workers=args.workers,
        progress=_progress(args),
    )
    fileio.write_sweep_csv(args.out, rows)
    _note(args, f"wrote {args.out} ({len(rows)} rows)")
    if not args.no_figures:
        from .figures import render_sweep_figures

        figures_dir = args.figures_dir if args.figures_dir is not None else Path(args.out).parent
        for path in render_sweep_figures(rows, figures_dir):
            _note(args, f"wrote {path}")


CHAIN_FLAGS = ("k", "noise", "chain_count", "query_count")
CLUSTERS_FLAGS = ("clusters", "cluster_size", "noise_cliques", "clique_size", "hub_fan")

# CLI flag name -> generator keyword for the clusters model.
CLUSTERS_KEYWORDS = {
    "clusters": "n_clusters",
    "cluster_size": "cluster_size",
    "noise_cliques": "n_noise",
    "clique_size": "noise_size",
    "hub_fan": "hub_fan",
}


def cmd_synth(args: argparse.Namespace, config: Mapping) -> None:
    own = CHAIN_FLAGS if args.model == "chain" else CLUSTERS_FLAGS
    other = CLUSTERS_FLAGS if args.model == "chain" else CHAIN_FLAGS
    misused = [name for name in other if getattr(args, name) is not None]
    if misused:
        flags = ", ".join("--" + name.replace("_", "-") for name in misused)
        raise BadParams(f"{flags} not valid for model {args.model!r}")
    params = {"seed": args.seed}
    for name in own:
        value = getattr(args, name)
        if value is not None:
            params[CLUSTERS_KEYWORDS.get(name, name) if args.model == "clusters" else name] = value
    corpus = gen_synthetic(args.model, **params)

    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc.strerror or exc}") from exc
    matches_path = out_dir / "matches.tsv"
    queries_path = out_dir / "queries.tsv"
    truth_path = out_dir / "truth.json"
    fileio.write_matches(matches_path, corpus.records)
    fileio.write_queries(queries_path, corpus.queries)
    fileio.write_truths(truth_path, corpus.truths)
    for path in (matches_path, queries_path, truth_path):
        _note(args, f"wrote {path}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="JSON", help="config file overridden by CLI flags")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")

    parser = argparse.ArgumentParser(
        prog="relprop",
        description="Similarity propagation re-ranking over image match graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser(
        "build-graph", parents=[common], help="build and serialize a match graph"
    )
    p.add_argument("matches", help="match file of u<TAB>v<TAB>inlier_count lines")
    p.add_argument("--out", required=True, help="output graph file")
    p.add_argument("--theta", type=int, help=f"inlier count threshold (default {DEFAULT_THETA})")
    p.add_argument("--sigma", type=float, help=f"kernel saturation scale (default {DEFAULT_SIGMA})")
    p.set_defaults(handler=cmd_build_graph)

    p = commands.add_parser("rank", parents=[common], help="rank the corpus for one query")
    p.add_argument("graph", help="graph file from build-graph")
    p.add_argument("--query", required=True, help="query file of query_id<TAB>vertex_id<TAB>count")
    p.add_argument("--query-id", help="query to run when the file holds several")
    p.add_argument("--out", required=True, help="output ranking file")
    p.add_argument("--roots", type=int, help=f"root set size (default {DEFAULT_ROOT_SIZE})")
    p.add_argument("--depth", type=int, help=f"expansion depth (default {DEFAULT_DEPTH})")
    p.add_argument("--alpha", type=float, help=f"propagation weight (default {DEFAULT_ALPHA})")
    p.add_argument("--gamma", type=float, help=f"direct-relevance blend (default {DEFAULT_GAMMA})")
    p.add_argument("--iters", type=int, help=f"propagation iterations (default {DEFAULT_ITERS})")
    p.add_argument(
        "--no-subgraph",
        action="store_true",
        help="propagate over the full graph instead of the query subgraph",
    )
    p.set_defaults(handler=cmd_rank)

    p = commands.add_parser("eval", parents=[common], help="score ranking files against truth")
    p.add_argument("rankings", nargs="+", help="ranking files from rank")
    p.add_argument("--truth", required=True, help="ground-truth JSON file")
    p.add_argument("--csv", help="also write per-query APs to this CSV")
    p.set_defaults(handler=cmd_eval)

    p = commands.add_parser("sweep", parents=[common], help="evaluate a parameter grid")
    p.add_argument("graph", help="graph file from build-graph")
    p.add_argument("--queries", required=True, help="query file covering every query to score")
    p.add_argument("--truth", required=True, help="ground-truth JSON file")
    p.add_argument("--out", required=True, help="output CSV file")
    p.add_argument("--roots", help="comma-separated root set sizes")
    p.add_argument("--depth", help="comma-separated expansion depths")
    p.add_argument("--alpha", help="comma-separated propagation weights")
    p.add_argument("--gamma", help="comma-separated blend weights")
    p.add_argument("--iters", help="comma-separated iteration counts")
    p.add_argument("--workers", type=int, default=1, help="concurrent grid evaluators (default 1)")
    p.add_argument("--figures-dir", help="directory for rendered charts (default: CSV directory)")
    p.add_argument("--no-figures", action="store_true", help="skip chart rendering")
    p.set_defaults(handler=cmd_sweep)

    p = commands.add_parser("synth", parents=[common], help="generate a synthetic corpus")
    p.add_argument("model", choices=("chain", "clusters"), help="corpus model")
    p.add_argument("--out-dir", required=True, help="directory for matches/queries/truth files")
    p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    p.add_argument("--k", type=int, help="chain: number of linked relevant images")
    p.add_argument("--noise", type=int, help="chain: number of disconnected noise images")
    p.add_argument("--chain-count", type=int, help="chain: inlier count along the chain")
    p.add_argument("--query-count", type=int, help="chain: inlier count of the query match")
    p.add_argument("--clusters", type=int, help="clusters: number of object clusters")
    p.add_argument("--cluster-size", type=int, help="clusters: viewpoints per object")
    p.add_argument("--noise-cliques", type=int, help="clusters: number of distractor cliques")
    p.add_argument("--clique-size", type=int, help="clusters: images per distractor clique")
    p.add_argument("--hub-fan", type=int, help="clusters: distractor links per hub and clique")
    p.set_defaults(handler=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        args.handler(args, config)
    except NoDirectMatches as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return EXIT_NO_DIRECT
    except IoError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return EXIT_IO
    except RelpropError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())
