"""Retrieval scoring and parameter sweeps.

Average precision follows the Oxford buildings convention: a trapezoidal
walk down the ranking in which junk ("ignore") ids are transparent and
relevant ids missing from the ranking cost recall.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Sequence

from .errors import BadParams, EmptyInput, EmptyTruth, MissingTruth
from .graph import MatchGraph
from .pipeline import rank_query
from .propagation import PropagationParams
from .subgraph import Subgraph, SubgraphParams


@dataclass(frozen=True)
class EvalTruth:
    """Ground truth for one query: relevant ids plus transparent ignore ids."""

    query_id: str
    relevant: frozenset[str]
    ignore: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.relevant:
            raise EmptyTruth(f"query {self.query_id!r} has no relevant ids")
        overlap = self.relevant & self.ignore
        if overlap:
            raise BadParams(
                f"query {self.query_id!r}: ids {sorted(overlap)} are both relevant and ignored"
            )


def average_precision(ranking: Sequence[str], truth: EvalTruth) -> float:
    """Trapezoidal average precision of a ranked id list.

    Ignored ids are skipped without advancing the precision denominator;
    previous precision starts at 1 so a first-place hit is not discounted.
    Relevant ids that never appear contribute no recall, which penalizes
    rankings truncated by a too-small subgraph.
    """
    for vid in ranking:
        if not isinstance(vid, str):
            raise BadParams(f"ranking entries must be vertex ids, got {type(vid).__name__}")
    if len(set(ranking)) != len(ranking):
        raise BadParams("ranking contains duplicate ids")
    n_relevant = len(truth.relevant)
    hits = 0
    steps = 0
    ap = 0.0
    prev_recall = 0.0
    prev_precision = 1.0
    for vid in ranking:
        if vid in truth.ignore:
            continue
        steps += 1
        if vid in truth.relevant:
            hits += 1
        recall = hits / n_relevant
        precision = hits / steps
        ap += (recall - prev_recall) * (precision + prev_precision) / 2.0
        prev_recall = recall
        prev_precision = precision
    return ap


def mean_ap(per_query: Sequence[float]) -> float:
    """Arithmetic mean of per-query average precisions."""
    if not per_query:
        raise EmptyInput("no average precisions to mean")
    return sum(per_query) / len(per_query)


def subgraph_recall(sub: Subgraph, truth: EvalTruth) -> float:
    """Fraction of the relevant set contained in the subgraph."""
    members = set(sub.member_ids())
    return len(members & truth.relevant) / len(truth.relevant)


@dataclass(frozen=True)
class SweepSpec:
    """Parameter grids for a full-factorial sweep."""

    root_sizes: tuple[int, ...]
    depths: tuple[int, ...]
    alphas: tuple[float, ...]
    gammas: tuple[float, ...]
    iters: tuple[int, ...]

    def __post_init__(self) -> None:
        for name, grid in (
            ("root_sizes", self.root_sizes),
            ("depths", self.depths),
            ("alphas", self.alphas),
            ("gammas", self.gammas),
            ("iters", self.iters),
        ):
            if not grid:
                raise BadParams(f"sweep grid {name} is empty")
        # Domain checks happen eagerly so a bad grid fails before any work.
        for rs in self.root_sizes:
            for m in self.depths:
                SubgraphParams(rs, m)
        for a in self.alphas:
            for g in self.gammas:
                for n in self.iters:
                    PropagationParams(a, g, n)

    def grid(self) -> list[tuple[int, int, float, float, int]]:
        """Cartesian product in lexicographic (root_size, depth, alpha, gamma, iters) order."""
        return list(product(self.root_sizes, self.depths, self.alphas, self.gammas, self.iters))


@dataclass(frozen=True)
class SweepRow:
    """One grid point's aggregate metrics."""

    root_size: int
    depth: int
    alpha: float
    gamma: float
    iters: int
    map: float
    mean_recall: float
    mean_subgraph_order: float


def run_sweep(
    graph: MatchGraph,
    queries: Sequence[tuple[str, Mapping[str, int]]],
    truths: Mapping[str, EvalTruth],
    spec: SweepSpec,
    workers: int = 1,
    progress: Callable[[str], None] | None = None,
) -> list[SweepRow]:
    """Evaluate mAP, mean subgraph recall, and mean subgraph order on the full grid.

    Rows come back in the deterministic lexicographic grid order no matter
    how many workers evaluate them.
    """
    if not queries:
        raise EmptyInput("no queries to sweep")
    for query_id, _ in queries:
        if query_id not in truths:
            raise MissingTruth(f"no ground truth for query {query_id!r}")

    points = spec.grid()

    def evaluate(point: tuple[int, int, float, float, int]) -> SweepRow:
        root_size, depth, alpha, gamma, iters = point
        sub_params = SubgraphParams(root_size, depth)
        prop_params = PropagationParams(alpha, gamma, iters)
        aps: list[float] = []
        recalls: list[float] = []
        orders: list[int] = []
        for query_id, raw_counts in queries:
            result = rank_query(
                graph,
                raw_counts,
                query_id=query_id,
                subgraph_params=sub_params,
                propagation_params=prop_params,
            )
            truth = truths[query_id]
            aps.append(average_precision([vid for vid, _ in result.ranking], truth))
            recalls.append(subgraph_recall(result.subgraph, truth))
            orders.append(result.subgraph.order)
        row = SweepRow(
            root_size=root_size,
            depth=depth,
            alpha=alpha,
            gamma=gamma,
            iters=iters,
            map=mean_ap(aps),
            mean_recall=sum(recalls) / len(recalls),
            mean_subgraph_order=sum(orders) / len(orders),
        )
        if progress is not None:
            progress(
                f"root_size={root_size} depth={depth} alpha={alpha} gamma={gamma} "
                f"iters={iters} map={row.map:.6f}"
            )
        return row

    if workers <= 1:
        return [evaluate(point) for point in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, points))
