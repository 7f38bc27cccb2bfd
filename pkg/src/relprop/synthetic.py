"""Deterministic synthetic corpora for desk-scale experiments.

Two generators: a transitive chain where relevant images link consecutively
and only the first one matches the query, and a cluster corpus where each
query targets one viewpoint loop and hub images bridge the loops into dense
distractor cliques. Both are fully reproducible from their seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import BadParams
from .evaluation import EvalTruth
from .graph import MatchRecord


@dataclass(frozen=True)
class SyntheticCorpus:
    """Match records plus per-query raw counts and ground truth."""

    records: tuple[MatchRecord, ...]
    queries: dict[str, dict[str, int]] = field(default_factory=dict)
    truths: dict[str, EvalTruth] = field(default_factory=dict)


def _fill_unmentioned(records: list[MatchRecord], vertex_ids: list[str]) -> None:
    """Pair each vertex missing from the records with the first other vertex at count 0.

    A zero count creates the vertex without creating an edge, so isolated
    corpus members still exist in the built graph.
    """
    mentioned = {rec.u for rec in records} | {rec.v for rec in records}
    for vid in vertex_ids:
        if vid in mentioned:
            continue
        anchor = next(other for other in vertex_ids if other != vid)
        records.append(MatchRecord(vid, anchor, 0))
        mentioned.add(vid)


def gen_chain(
    k: int = 4,
    noise: int = 10,
    seed: int = 0,
    chain_count: int = 30,
    query_count: int = 30,
) -> SyntheticCorpus:
    """Chain corpus: the same object seen from drifting viewpoints.

    Relevant images obj001..obj00k link consecutively with strong counts
    while the query matches only obj001, so everything past the first image
    is reachable only through propagation. Noise vertices form their own
    supra-threshold ring with random chords, disconnected from the chain.
    """
    if k < 1:
        raise BadParams(f"k must be >= 1, got {k}")
    if noise < 0:
        raise BadParams(f"noise must be >= 0, got {noise}")
    if k + noise < 2:
        raise BadParams("corpus needs at least 2 vertices")
    if chain_count < 1 or query_count < 1:
        raise BadParams("counts must be >= 1")

    rng = random.Random(seed)
    objs = [f"obj{i:03d}" for i in range(1, k + 1)]
    noise_ids = [f"noise{i:03d}" for i in range(1, noise + 1)]

    records = [MatchRecord(objs[i], objs[i + 1], chain_count) for i in range(k - 1)]

    seen_pairs = set()
    if noise >= 2:
        for i in range(noise):
            j = (i + 1) % noise
            if i == j:
                continue
            a, b = sorted((noise_ids[i], noise_ids[j]))
            if (a, b) in seen_pairs:
                continue
            seen_pairs.add((a, b))
            records.append(MatchRecord(a, b, rng.randint(15, 40)))
        for _ in range(noise // 2):
            i, j = rng.sample(range(noise), 2)
            a, b = sorted((noise_ids[i], noise_ids[j]))
            if (a, b) in seen_pairs:
                continue
            seen_pairs.add((a, b))
            records.append(MatchRecord(a, b, rng.randint(15, 40)))

    _fill_unmentioned(records, objs + noise_ids)

    query_id = "q001"
    return SyntheticCorpus(
        records=tuple(records),
        queries={query_id: {objs[0]: query_count}},
        truths={query_id: EvalTruth(query_id=query_id, relevant=frozenset(objs))},
    )


def gen_clusters(
    n_clusters: int = 3,
    cluster_size: int = 6,
    seed: int = 0,
    n_noise: int = 3,
    noise_size: int = 4,
    hub_fan: int = 2,
) -> SyntheticCorpus:
    """Cluster corpus: object clusters, distractor cliques, hub images.

    Each object cluster is a closed loop of ``cluster_size`` adjacent
    viewpoints: every image matches its two neighbours strongly, and the
    query matches only the first viewpoint, so the far side of the loop is
    reachable through propagation alone. The distractor groups are dense
    cliques of ``noise_size`` unrelated images. One hub image per cluster
    matches the queried viewpoint and ``hub_fan`` members of two distractor
    cliques, standing in for pictures that contain several objects at once.
    Hubs are scored as ignores: they do contain the object, but only
    partially.

    The loop-plus-hub layout makes ranking quality peak at moderate
    propagation weight. Weak propagation cannot lift the far side of the
    loop above the hub-fed distractors, while undamped propagation sloshes
    between the even and odd halves of the loop and drops the odd side
    below them.
    """
    if n_clusters < 1:
        raise BadParams(f"n_clusters must be >= 1, got {n_clusters}")
    if cluster_size < 3:
        raise BadParams(f"cluster_size must be >= 3, got {cluster_size}")
    if n_noise < 1:
        raise BadParams(f"n_noise must be >= 1, got {n_noise}")
    if noise_size < 2:
        raise BadParams(f"noise_size must be >= 2, got {noise_size}")
    if not 1 <= hub_fan <= noise_size:
        raise BadParams(f"hub_fan must be in [1, {noise_size}], got {hub_fan}")

    rng = random.Random(seed)
    members = [
        [f"c{c:02d}v{m:02d}" for m in range(cluster_size)] for c in range(n_clusters)
    ]
    noise = [[f"n{k:02d}v{m:02d}" for m in range(noise_size)] for k in range(n_noise)]
    hubs = [f"hub{c:02d}" for c in range(n_clusters)]

    records: list[MatchRecord] = []
    for ring in members:
        for a in range(cluster_size):
            records.append(
                MatchRecord(ring[a], ring[(a + 1) % cluster_size], rng.randint(25, 60))
            )
    for clique in noise:
        for a in range(noise_size):
            for b in range(a + 1, noise_size):
                records.append(MatchRecord(clique[a], clique[b], rng.randint(25, 60)))

    # Hub c shows object c next to clutter from two distractor cliques.
    for c, hub in enumerate(hubs):
        records.append(MatchRecord(hub, members[c][0], rng.randint(40, 60)))
        for k in (c % n_noise, (c + 1) % n_noise):
            for m in rng.sample(range(noise_size), hub_fan):
                records.append(MatchRecord(hub, noise[k][m], rng.randint(40, 60)))

    queries: dict[str, dict[str, int]] = {}
    truths: dict[str, EvalTruth] = {}
    for c in range(n_clusters):
        query_id = f"q{c + 1:03d}"
        queries[query_id] = {members[c][0]: rng.randint(35, 50)}
        truths[query_id] = EvalTruth(
            query_id=query_id,
            relevant=frozenset(members[c]),
            ignore=frozenset(hubs),
        )

    all_ids = [vid for group in members + noise for vid in group] + hubs
    _fill_unmentioned(records, all_ids)
    return SyntheticCorpus(records=tuple(records), queries=queries, truths=truths)


def gen_synthetic(model: str, **params) -> SyntheticCorpus:
    """Dispatch to a generator by model name ("chain" or "clusters")."""
    if model == "chain":
        return gen_chain(**params)
    if model == "clusters":
        return gen_clusters(**params)
    raise BadParams(f"unknown synthetic model {model!r}")
