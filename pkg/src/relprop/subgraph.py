"""Query-centered subgraph extraction.

The root set is the top slice of the direct-relevance ranking; the working
subgraph is the depth-limited breadth-first ball around those roots, with
the induced adjacency re-normalized so it keeps the row-stochastic contract
of the full graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import BadParams, NoDirectMatches
from .graph import MatchGraph, _row_normalize

DEFAULT_ROOT_SIZE = 30
DEFAULT_DEPTH = 3


@dataclass(frozen=True)
class SubgraphParams:
    """Root set size and breadth-expansion depth."""

    root_size: int = DEFAULT_ROOT_SIZE
    depth: int = DEFAULT_DEPTH

    def __post_init__(self) -> None:
        if self.root_size < 1:
            raise BadParams(f"root_size must be >= 1, got {self.root_size}")
        if self.depth < 0:
            raise BadParams(f"depth must be >= 0, got {self.depth}")


@dataclass(frozen=True)
class Subgraph:
    """A member set of a parent graph together with the roots that seeded it."""

    parent: MatchGraph
    members: frozenset[int]
    roots: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.members)

    def member_ids(self) -> tuple[str, ...]:
        """Member vertex ids in ascending vertex order."""
        return tuple(self.parent.vertex_ids[i] for i in sorted(self.members))


def select_roots(d: np.ndarray, params: SubgraphParams) -> frozenset[int]:
    """Indices of the largest positive direct-relevance entries.

    At most ``root_size`` roots are returned and zero-score vertices are
    never roots; ties are broken by ascending vertex index.
    """
    d = np.asarray(d, dtype=np.float64)
    positive = [int(i) for i in np.flatnonzero(d > 0.0)]
    if not positive:
        raise NoDirectMatches("all direct-relevance entries are zero")
    positive.sort(key=lambda i: (-d[i], i))
    return frozenset(positive[: params.root_size])


def expand_subgraph(graph: MatchGraph, roots: frozenset[int] | set[int], depth: int) -> Subgraph:
    """Grow the root set outward ``depth`` times along graph edges.

    Each pass merges the neighbors of everything gathered so far, which is
    exactly the breadth-first ball of radius ``depth`` around the roots.
    """
    if not roots:
        raise BadParams("root set must be non-empty")
    if depth < 0:
        raise BadParams(f"depth must be >= 0, got {depth}")
    members: set[int] = set()
    for v in roots:
        graph._check_index(v)
        members.add(int(v))

    frontier = set(members)
    for _ in range(depth):
        nxt: set[int] = set()
        for v in frontier:
            nxt |= graph.neighbors(v)
        nxt -= members
        if not nxt:
            break
        members |= nxt
        frontier = nxt
    return Subgraph(parent=graph, members=frozenset(members), roots=frozenset(int(v) for v in roots))


def restrict_vectors(
    sub: Subgraph, d: np.ndarray
) -> tuple[np.ndarray, sp.csr_array, tuple[str, ...]]:
    """Project a full-graph vector and adjacency onto the subgraph.

    Returns the restricted direct-relevance vector, the induced adjacency
    with rows re-normalized over the surviving edges, and the vertex ids
    of the restricted index space (ascending parent index).
    """
    d = np.asarray(d, dtype=np.float64)
    members = sorted(sub.members)
    idx = np.asarray(members, dtype=np.intp)
    d_sub = d[idx]
    weights_sub = sub.parent.weights[np.ix_(idx, idx)].tocsr()
    adjacency = _row_normalize(weights_sub)
    ids = tuple(sub.parent.vertex_ids[i] for i in members)
    return d_sub, adjacency, ids
