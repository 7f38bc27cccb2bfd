"""Weighted match graph built from pairwise inlier counts.

Vertices are image ids, edges carry a saturating kernel of the inlier count
between the two images, and every nonzero row of the normalized adjacency
sums to one so it can serve as a propagation operator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    BadParams,
    DuplicatePair,
    EmptyInput,
    IoError,
    ParseError,
    SelfMatch,
    UnknownVertex,
)

GRAPH_MAGIC = "RELPROP-GRAPH"
GRAPH_FORMAT_VERSION = 1

DEFAULT_THETA = 10
DEFAULT_SIGMA = 10.0


@dataclass(frozen=True)
class KernelParams:
    """Inlier-count kernel: hard threshold ``theta``, saturation scale ``sigma``."""

    theta: int = DEFAULT_THETA
    sigma: float = DEFAULT_SIGMA

    def __post_init__(self) -> None:
        if self.theta < 0:
            raise BadParams(f"theta must be >= 0, got {self.theta}")
        if not self.sigma > 0:
            raise BadParams(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class MatchRecord:
    """One undirected pairwise observation: two image ids and their inlier count."""

    u: str
    v: str
    inliers: int

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise SelfMatch(f"record pairs {self.u!r} with itself")
        if self.inliers < 0:
            raise BadParams(f"inlier count must be >= 0, got {self.inliers}")

    @property
    def key(self) -> tuple[str, str]:
        """Order-independent identity of the pair."""
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


def match_score(count: int, params: KernelParams) -> float:
    """Map an inlier count to a match weight in [0, 1).

    Counts below the threshold score exactly 0; above it the score is
    ``c^2 / (sigma^2 + c^2)``, which saturates toward 1 for large counts.
    """
    if count < params.theta:
        return 0.0
    c = float(count)
    return c * c / (params.sigma * params.sigma + c * c)


def _row_normalize(weights: sp.csr_array) -> sp.csr_array:
    """Divide each nonzero row by its sum; all-zero rows stay all-zero."""
    sums = np.asarray(weights.sum(axis=1)).ravel()
    scale = np.divide(1.0, sums, out=np.zeros_like(sums), where=sums > 0)
    normalized = (sp.diags_array(scale) @ weights).tocsr()
    normalized.sort_indices()
    return normalized


@dataclass(frozen=True)
class MatchGraph:
    """Immutable weighted undirected match graph.

    ``vertex_ids`` is lexicographically sorted and fixes the dense index
    assignment, so a graph built from the same records in any order is
    identical. ``weights`` holds the symmetric kernel weights, ``counts``
    the surviving raw inlier counts, and ``row_norm`` the row-normalized
    propagation operator. All three are CSR over the same index space.
    """

    vertex_ids: tuple[str, ...]
    kernel: KernelParams
    weights: sp.csr_array
    counts: sp.csr_array
    row_norm: sp.csr_array
    _index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def n_edges(self) -> int:
        return int(self.weights.nnz) // 2

    def index(self, vertex_id: str) -> int:
        """Dense index of ``vertex_id``; raises UnknownVertex otherwise."""
        try:
            return self._index[vertex_id]
        except KeyError:
            raise UnknownVertex(f"unknown vertex id {vertex_id!r}") from None

    def has_vertex(self, vertex_id: str) -> bool:
        return vertex_id in self._index

    def neighbors(self, v: int) -> set[int]:
        """Indices adjacent to vertex index ``v``; never contains ``v``."""
        self._check_index(v)
        start, stop = self.weights.indptr[v], self.weights.indptr[v + 1]
        return {int(j) for j in self.weights.indices[start:stop]}

    def match_counts(self, vertex_id: str) -> dict[str, int]:
        """Raw inlier counts of the edges incident to ``vertex_id``."""
        v = self.index(vertex_id)
        start, stop = self.counts.indptr[v], self.counts.indptr[v + 1]
        return {
            self.vertex_ids[int(j)]: int(c)
            for j, c in zip(self.counts.indices[start:stop], self.counts.data[start:stop])
        }

    def edge_triples(self) -> list[tuple[int, int, int]]:
        """Sorted upper-triangle edges as (i, j, inlier count) with i < j."""
        coo = sp.coo_array(self.counts)
        triples = [
            (int(i), int(j), int(c))
            for i, j, c in zip(coo.row, coo.col, coo.data)
            if i < j
        ]
        triples.sort()
        return triples

    def _check_index(self, v: int) -> None:
        if not 0 <= v < self.n_vertices:
            raise UnknownVertex(f"vertex index {v} out of range [0, {self.n_vertices})")


def _assemble(
    vertex_ids: Sequence[str],
    edges: Iterable[tuple[int, int, int]],
    kernel: KernelParams,
) -> MatchGraph:
    """Build a MatchGraph from indexed edge triples (i, j, count), i != j.

    Sub-threshold triples are dropped; both orientations of each surviving
    edge are stored so the matrices come out symmetric.
    """
    n = len(vertex_ids)
    rows: list[int] = []
    cols: list[int] = []
    wvals: list[float] = []
    cvals: list[int] = []
    for i, j, c in edges:
        w = match_score(c, kernel)
        if w <= 0.0:
            continue
        rows.extend((i, j))
        cols.extend((j, i))
        wvals.extend((w, w))
        cvals.extend((c, c))

    weights = sp.csr_array(
        sp.coo_array((wvals, (rows, cols)), shape=(n, n), dtype=np.float64)
    )
    weights.sort_indices()
    counts = sp.csr_array(
        sp.coo_array((cvals, (rows, cols)), shape=(n, n), dtype=np.int64)
    )
    counts.sort_indices()
    return MatchGraph(
        vertex_ids=tuple(vertex_ids),
        kernel=kernel,
        weights=weights,
        counts=counts,
        row_norm=_row_normalize(weights),
        _index={vid: i for i, vid in enumerate(vertex_ids)},
    )


def build_graph(records: Sequence[MatchRecord], params: KernelParams) -> MatchGraph:
    """Build the match graph from undirected pairwise records.

    Every id mentioned in any record becomes a vertex, even when the
    record's count is below threshold; an edge exists only for
    supra-threshold counts. Duplicate unordered pairs are rejected rather
    than merged because they signal a dirty upstream pipeline.
    """
    if not records:
        raise EmptyInput("no match records given")
    seen: set[tuple[str, str]] = set()
    ids: set[str] = set()
    for rec in records:
        if rec.key in seen:
            raise DuplicatePair(f"pair {rec.key} appears more than once")
        seen.add(rec.key)
        ids.add(rec.u)
        ids.add(rec.v)

    vertex_ids = sorted(ids)
    index = {vid: i for i, vid in enumerate(vertex_ids)}
    edges = [(index[rec.u], index[rec.v], rec.inliers) for rec in records]
    return _assemble(vertex_ids, edges, params)


def save_graph(graph: MatchGraph, path: str | Path) -> None:
    """Write the versioned graph file.

    The file stores the kernel and the raw edge counts; weights are
    recomputed at load time through the same kernel code path, which makes
    the round trip bit-exact.
    """
    payload = {
        "magic": GRAPH_MAGIC,
        "version": GRAPH_FORMAT_VERSION,
        "kernel": {"theta": graph.kernel.theta, "sigma": graph.kernel.sigma},
        "vertices": list(graph.vertex_ids),
        "edges": [list(t) for t in graph.edge_triples()],
    }
    try:
        Path(path).write_text(json.dumps(payload) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def load_graph(path: str | Path) -> MatchGraph:
    """Load a graph file written by :func:`save_graph`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or payload.get("magic") != GRAPH_MAGIC:
        raise ParseError(f"{path}: missing {GRAPH_MAGIC!r} magic; not a graph file")
    version = payload.get("version")
    if version != GRAPH_FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported graph format version {version!r}")

    try:
        kernel = KernelParams(int(payload["kernel"]["theta"]), float(payload["kernel"]["sigma"]))
        vertices = [str(v) for v in payload["vertices"]]
        edges = [(int(i), int(j), int(c)) for i, j, c in payload["edges"]]
    except (KeyError, TypeError, ValueError, BadParams) as exc:
        raise ParseError(f"{path}: malformed graph payload: {exc}") from None

    if sorted(set(vertices)) != vertices:
        raise ParseError(f"{path}: vertex table must be sorted and unique")
    n = len(vertices)
    seen: set[tuple[int, int]] = set()
    for i, j, c in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"{path}: edge ({i}, {j}) references an unknown vertex")
        if i == j:
            raise ParseError(f"{path}: edge ({i}, {j}) is a self-edge")
        if i > j:
            raise ParseError(f"{path}: edge ({i}, {j}) is not upper-triangular")
        if (i, j) in seen:
            raise ParseError(f"{path}: duplicate edge ({i}, {j})")
        if c < 0:
            raise ParseError(f"{path}: negative inlier count on edge ({i}, {j})")
        seen.add((i, j))
    return _assemble(vertices, edges, kernel)
