"""Direct, indirect, and comprehensive relevance.

Direct relevance scores the query against each vertex with the match
kernel and normalizes to a unit-sum vector. Indirect relevance spreads
that vector over the graph by a damped power iteration, and the final
score blends the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import BadParams, DimensionMismatch, EmptyInput, NoDirectMatches
from .graph import KernelParams, match_score

DEFAULT_ALPHA = 0.6
DEFAULT_GAMMA = 0.5
DEFAULT_ITERS = 10


@dataclass(frozen=True)
class PropagationParams:
    """Decay factor, direct/indirect blend, and iteration count."""

    alpha: float = DEFAULT_ALPHA
    gamma: float = DEFAULT_GAMMA
    iters: int = DEFAULT_ITERS

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise BadParams(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma <= 1.0:
            raise BadParams(f"gamma must be in [0, 1], got {self.gamma}")
        if self.iters < 1:
            raise BadParams(f"iters must be >= 1, got {self.iters}")


@dataclass(frozen=True)
class QueryContext:
    """A query's raw inlier counts and its normalized direct-relevance vector."""

    query_id: str
    raw_counts: dict[str, int]
    d: np.ndarray


@dataclass(frozen=True)
class RelevanceState:
    """Vectors produced for one query over one working vertex set."""

    d: np.ndarray
    tau: np.ndarray
    s: np.ndarray
    residuals: tuple[float, ...] = field(default_factory=tuple)


def direct_relevance(
    raw_counts: Mapping[str, int],
    working_set: Sequence[str],
    kernel: KernelParams,
    query_id: str = "",
) -> QueryContext:
    """Kernel-score the query against every vertex and normalize to sum 1.

    Vertices absent from ``raw_counts`` count as zero matches. Raises
    NoDirectMatches when every count is below threshold.
    """
    if not working_set:
        raise EmptyInput("working set is empty")
    d = np.array(
        [match_score(raw_counts.get(vid, 0), kernel) for vid in working_set],
        dtype=np.float64,
    )
    total = float(d.sum())
    if total <= 0.0:
        raise NoDirectMatches(
            f"query {query_id!r} has no supra-threshold match in the working set"
        )
    d /= total
    return QueryContext(query_id=query_id, raw_counts=dict(raw_counts), d=d)


def propagate(
    adjacency, d: np.ndarray, params: PropagationParams, tol: float | None = None
) -> tuple[np.ndarray, tuple[float, ...]]:
    """Damped power iteration ``tau <- alpha * A @ tau + (1 - alpha) * d``.

    Starts at ``tau = d`` and applies exactly ``params.iters`` updates
    unless ``tol`` is given, in which case iteration stops early once the
    max-norm step delta drops to ``tol`` or below. Returns the final
    vector and the per-iteration max-norm deltas.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    if adjacency.shape != (n, n):
        raise DimensionMismatch(
            f"adjacency is {adjacency.shape}, expected ({n}, {n})"
        )
    alpha = params.alpha
    bias = (1.0 - alpha) * d
    tau = d.copy()
    residuals: list[float] = []
    for _ in range(params.iters):
        nxt = alpha * (adjacency @ tau) + bias
        residuals.append(float(np.max(np.abs(nxt - tau))) if n else 0.0)
        tau = nxt
        if tol is not None and residuals[-1] <= tol:
            break
    return tau, tuple(residuals)


def comprehensive_relevance(d: np.ndarray, tau: np.ndarray, gamma: float) -> np.ndarray:
    """Blend direct and indirect relevance: ``gamma * d + (1 - gamma) * tau``."""
    d = np.asarray(d, dtype=np.float64)
    tau = np.asarray(tau, dtype=np.float64)
    if d.shape != tau.shape:
        raise DimensionMismatch(f"d has shape {d.shape}, tau has shape {tau.shape}")
    return gamma * d + (1.0 - gamma) * tau


def rank(scores: np.ndarray, ids: Sequence[str]) -> list[tuple[str, float]]:
    """Order ids by descending score, ties by ascending id.

    Zero-scored vertices carry no relevance evidence and are left out of
    the ranking, so a retrieval list never pads with arbitrary id-order
    ties.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape[0] != len(ids):
        raise DimensionMismatch(
            f"{scores.shape[0]} scores for {len(ids)} ids"
        )
    pairs = [(ids[i], float(scores[i])) for i in np.flatnonzero(scores > 0.0)]
    pairs.sort(key=lambda p: (-p[1], p[0]))
    return pairs
