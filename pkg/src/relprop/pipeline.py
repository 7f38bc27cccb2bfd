"""End-to-end ranking of one query against a match graph.

Chains direct relevance, root selection, subgraph expansion, propagation,
and the final blend into a single call shared by the CLI and the sweep
driver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import KernelParams, MatchGraph
from .propagation import (
    PropagationParams,
    QueryContext,
    RelevanceState,
    comprehensive_relevance,
    direct_relevance,
    propagate,
    rank,
)
from .subgraph import Subgraph, SubgraphParams, expand_subgraph, restrict_vectors, select_roots


@dataclass(frozen=True)
class RankResult:
    """Everything produced while ranking one query."""

    query: QueryContext
    subgraph: Subgraph | None
    working_ids: tuple[str, ...]
    state: RelevanceState
    ranking: list[tuple[str, float]]


def rank_query(
    graph: MatchGraph,
    raw_counts: Mapping[str, int],
    query_id: str = "",
    kernel: KernelParams | None = None,
    subgraph_params: SubgraphParams | None = None,
    propagation_params: PropagationParams | None = None,
    use_subgraph: bool = True,
    exclude: Iterable[str] = (),
) -> RankResult:
    """Rank the corpus for one query by comprehensive relevance.

    With ``use_subgraph`` disabled, propagation runs over the full graph
    instead of the expanded root neighborhood. ``exclude`` drops ids from
    the final ranking only (used when the query is itself a corpus vertex).
    """
    kernel = kernel or graph.kernel
    sub_params = subgraph_params or SubgraphParams()
    prop_params = propagation_params or PropagationParams()

    ctx = direct_relevance(raw_counts, graph.vertex_ids, kernel, query_id=query_id)
    if use_subgraph:
        roots = select_roots(ctx.d, sub_params)
        sub = expand_subgraph(graph, roots, sub_params.depth)
        d, adjacency, working_ids = restrict_vectors(sub, ctx.d)
    else:
        sub = None
        d, adjacency, working_ids = ctx.d, graph.row_norm, graph.vertex_ids

    tau, residuals = propagate(adjacency, d, prop_params)
    s = comprehensive_relevance(d, tau, prop_params.gamma)
    state = RelevanceState(d=d, tau=tau, s=s, residuals=residuals)

    ranking = rank(s, working_ids)
    dropped = set(exclude)
    if dropped:
        ranking = [(vid, score) for vid, score in ranking if vid not in dropped]
    return RankResult(
        query=ctx,
        subgraph=sub,
        working_ids=tuple(working_ids),
        state=state,
        ranking=ranking,
    )
