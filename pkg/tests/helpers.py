"""Shared test fixtures: random graph factories and independent oracles.

The oracles deliberately use a different algorithmic route than the library
code they check: dense numpy loops instead of sparse operators, a literal
repeated-union expansion instead of frontier search, and trapezoid
integration via numpy instead of the incremental accumulation.
"""

from __future__ import annotations

import numpy as np

from relprop import KernelParams, MatchGraph, MatchRecord, build_graph


def random_records(
    rng: np.random.Generator,
    n_vertices: int,
    density: float,
    count_lo: int = 0,
    count_hi: int = 80,
) -> list[MatchRecord]:
    """Random undirected match records over vertices v000..v{n-1}."""
    ids = [f"v{i:03d}" for i in range(n_vertices)]
    records = []
    for a in range(n_vertices):
        for b in range(a + 1, n_vertices):
            if rng.random() < density:
                records.append(MatchRecord(ids[a], ids[b], int(rng.integers(count_lo, count_hi + 1))))
    if not records:
        records.append(MatchRecord(ids[0], ids[-1], count_hi))
    return records


def random_graph(
    rng: np.random.Generator,
    max_vertices: int,
    density_lo: float = 0.05,
    density_hi: float = 0.20,
    kernel: KernelParams | None = None,
) -> MatchGraph:
    n = int(rng.integers(5, max_vertices + 1))
    density = float(rng.uniform(density_lo, density_hi))
    return build_graph(random_records(rng, n, density), kernel or KernelParams())


def random_direct(rng: np.random.Generator, n: int, n_positive: int | None = None) -> np.ndarray:
    """Random direct-relevance vector: a few positive entries, normalized."""
    if n_positive is None:
        n_positive = int(rng.integers(1, max(2, n // 3)))
    d = np.zeros(n)
    picks = rng.choice(n, size=min(n_positive, n), replace=False)
    d[picks] = rng.uniform(0.1, 1.0, size=len(picks))
    return d / d.sum()


def dense_propagate(
    adjacency: np.ndarray, d: np.ndarray, alpha: float, iters: int
) -> tuple[np.ndarray, list[float]]:
    """Reference damped iteration using plain dense matmul."""
    tau = d.copy()
    residuals = []
    for _ in range(iters):
        nxt = alpha * (adjacency @ tau) + (1.0 - alpha) * d
        residuals.append(float(np.max(np.abs(nxt - tau))))
        tau = nxt
    return tau, residuals


def solve_fixed_point(adjacency: np.ndarray, d: np.ndarray, alpha: float) -> np.ndarray:
    """Direct dense solve of (I - alpha A) tau = (1 - alpha) d."""
    n = len(d)
    return np.linalg.solve(np.eye(n) - alpha * adjacency, (1.0 - alpha) * d)


def repeated_union_expand(graph: MatchGraph, roots: frozenset[int], depth: int) -> frozenset[int]:
    """Literal repeated-union expansion: depth rounds of unioning all neighbors."""
    members = set(roots)
    for _ in range(depth):
        grown = set(members)
        for v in members:
            grown |= graph.neighbors(v)
        members = grown
    return frozenset(members)


def trapezoid_ap_reference(
    ranked_ids: list[str], relevant: frozenset[str], ignore: frozenset[str] = frozenset()
) -> float:
    """Second-route AP: build the recall/precision polyline, integrate with numpy."""
    recalls = [0.0]
    precisions = [1.0]
    hits = 0
    steps = 0
    for vid in ranked_ids:
        if vid in ignore:
            continue
        steps += 1
        if vid in relevant:
            hits += 1
        recalls.append(hits / len(relevant))
        precisions.append(hits / steps)
    return float(np.trapezoid(precisions, recalls))
