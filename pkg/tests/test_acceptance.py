"""Acceptance gate: one test per pinned release behavior.

Each test freezes one property the library must keep: agreement with
independent numeric oracles, exact reductions at degenerate parameters,
closed-form scores on the synthetic corpora, the interior-maximum trend
of the alpha sweep, and byte-level determinism of the CLI pipeline.
"""

import time

import numpy as np
import pytest

from relprop import (
    EvalTruth,
    KernelParams,
    PropagationParams,
    SubgraphParams,
    SweepSpec,
    average_precision,
    build_graph,
    cli,
    comprehensive_relevance,
    expand_subgraph,
    gen_chain,
    gen_clusters,
    propagate,
    rank,
    rank_query,
    run_sweep,
    select_roots,
)
from helpers import (
    dense_propagate,
    random_direct,
    random_graph,
    repeated_union_expand,
    solve_fixed_point,
    trapezoid_ap_reference,
)


def test_propagation_reaches_the_linear_system_fixed_point():
    # 200 damped iterations at alpha=0.6 leave a geometric tail below
    # 0.6**200, so the sparse loop must land on the direct solve of
    # (I - alpha A) tau = (1 - alpha) d to far better than 1e-8.
    rng = np.random.default_rng(11)
    started = time.perf_counter()
    for _ in range(20):
        graph = random_graph(rng, max_vertices=200)
        d = random_direct(rng, len(graph.vertex_ids))
        tau, _ = propagate(graph.row_norm, d, PropagationParams(alpha=0.6, iters=200))
        expected = solve_fixed_point(graph.row_norm.toarray(), d, 0.6)
        assert float(np.max(np.abs(tau - expected))) <= 1e-8
    assert time.perf_counter() - started < 10.0


def test_sparse_and_dense_iterations_agree_at_every_step():
    rng = np.random.default_rng(13)
    for alpha in (0.3, 0.6, 0.9):
        for _ in range(2):
            graph = random_graph(rng, max_vertices=100)
            dense = graph.row_norm.toarray()
            d = random_direct(rng, len(graph.vertex_ids))
            for iters in range(1, 51):
                tau, _ = propagate(graph.row_norm, d, PropagationParams(alpha=alpha, iters=iters))
                expected, _ = dense_propagate(dense, d, alpha, iters)
                assert np.all(np.abs(tau - expected) <= 1e-12)


def test_residual_deltas_contract_by_alpha():
    # Row-normalized adjacency never expands the max norm, so each step
    # delta shrinks at least by the damping factor.
    rng = np.random.default_rng(17)
    graphs = [random_graph(rng, max_vertices=200) for _ in range(20)]
    for graph in graphs:
        d = random_direct(rng, len(graph.vertex_ids))
        for alpha in (0.3, 0.6, 0.9):
            _, residuals = propagate(graph.row_norm, d, PropagationParams(alpha=alpha, iters=30))
            for earlier, later in zip(residuals, residuals[1:]):
                assert later <= alpha * earlier + 1e-12


def test_zero_alpha_unit_gamma_and_zero_depth_reduce_exactly():
    rng = np.random.default_rng(19)
    for _ in range(10):
        graph = random_graph(rng, max_vertices=120)
        n = len(graph.vertex_ids)
        d = random_direct(rng, n)

        # alpha=0 leaves the direct vector untouched, bit for bit.
        tau, _ = propagate(graph.row_norm, d, PropagationParams(alpha=0.0, iters=10))
        assert np.array_equal(tau, d)

        # gamma=1 must reproduce the direct ranking including tie-breaks.
        tau, _ = propagate(graph.row_norm, d, PropagationParams(alpha=0.6, iters=10))
        blended = comprehensive_relevance(d, tau, gamma=1.0)
        assert rank(blended, graph.vertex_ids) == rank(d, graph.vertex_ids)

        # depth=0 keeps the expansion at exactly the root set.
        roots = select_roots(d, SubgraphParams(root_size=8, depth=0))
        assert expand_subgraph(graph, roots, depth=0).members == roots


def test_expansion_matches_repeated_union_and_grows_monotonically():
    rng = np.random.default_rng(23)
    for sample in range(50):
        graph = random_graph(rng, max_vertices=500)
        d = random_direct(rng, len(graph.vertex_ids))
        roots = select_roots(d, SubgraphParams(root_size=int(rng.integers(1, 12)), depth=0))
        depth = int(rng.integers(0, 5))
        sub = expand_subgraph(graph, roots, depth)
        assert sub.members == repeated_union_expand(graph, roots, depth)

        if sample % 5 == 0:
            by_depth = [expand_subgraph(graph, roots, m).members for m in range(4)]
            for smaller, larger in zip(by_depth, by_depth[1:]):
                assert smaller <= larger
            small_roots = select_roots(d, SubgraphParams(root_size=2, depth=0))
            large_roots = select_roots(d, SubgraphParams(root_size=10, depth=0))
            assert small_roots <= large_roots
            assert (
                expand_subgraph(graph, small_roots, 2).members
                <= expand_subgraph(graph, large_roots, 2).members
            )


def test_chain_query_direct_quarter_then_perfect_after_propagation():
    # Four chained relevant images with the query linked only to the
    # first: the direct ranking retrieves one of four relevant items at
    # precision 1, and the trapezoid rule gives (1/4) * (1 + 1) / 2 = 1/4.
    corpus = gen_chain()
    graph = build_graph(list(corpus.records), KernelParams())
    truth = corpus.truths["q001"]
    counts = corpus.queries["q001"]
    started = time.perf_counter()

    direct = rank_query(
        graph,
        counts,
        query_id="q001",
        propagation_params=PropagationParams(alpha=0.0, gamma=1.0, iters=10),
    )
    assert average_precision([vid for vid, _ in direct.ranking], truth) == 0.25

    propagated = rank_query(
        graph,
        counts,
        query_id="q001",
        subgraph_params=SubgraphParams(root_size=30, depth=3),
        propagation_params=PropagationParams(alpha=0.6, gamma=0.5, iters=10),
    )
    assert average_precision([vid for vid, _ in propagated.ranking], truth) == 1.0
    assert time.perf_counter() - started < 1.0


def test_three_item_ap_fixture_scores_nineteen_twenty_fourths():
    # Hits at ranks 1 and 3 of two relevant: segment one contributes
    # (1/2)(1 + 1)/2, segment three (1/2)(2/3 + 1/2)/2, total 19/24.
    truth = EvalTruth("q", frozenset({"r1", "r2"}))
    ranking = ["r1", "x", "r2"]
    ap = average_precision(ranking, truth)
    assert abs(ap - 19.0 / 24.0) <= 1e-12
    assert abs(ap - trapezoid_ap_reference(ranking, truth.relevant)) <= 1e-12


def test_cluster_corpus_map_peaks_at_moderate_alpha():
    # Weak propagation cannot lift the far side of each viewpoint loop
    # above hub-fed distractors; undamped propagation oscillates on the
    # even loop and drops it again. Quality must peak strictly inside.
    corpus = gen_clusters(seed=0)
    graph = build_graph(list(corpus.records), KernelParams())
    spec = SweepSpec(
        root_sizes=(30,),
        depths=(3,),
        alphas=(0.2, 0.4, 0.6, 0.8, 1.0),
        gammas=(0.5,),
        iters=(10,),
    )
    rows = run_sweep(graph, sorted(corpus.queries.items()), corpus.truths, spec)
    by_alpha = {row.alpha: row.map for row in rows}
    assert by_alpha[0.6] > by_alpha[0.2]
    assert by_alpha[0.6] > by_alpha[1.0]


def test_full_pipeline_rerun_is_byte_identical(tmp_path):
    produced = ("matches.tsv", "queries.tsv", "truth.json", "graph.json", "q001.rank", "aps.csv")
    for label in ("first", "second"):
        work = tmp_path / label
        assert cli.main(["synth", "chain", "--out-dir", str(work), "--seed", "3", "--quiet"]) == 0
        assert (
            cli.main(
                [
                    "build-graph",
                    str(work / "matches.tsv"),
                    "--out",
                    str(work / "graph.json"),
                    "--quiet",
                ]
            )
            == 0
        )
        assert (
            cli.main(
                [
                    "rank",
                    str(work / "graph.json"),
                    "--query",
                    str(work / "queries.tsv"),
                    "--out",
                    str(work / "q001.rank"),
                    "--quiet",
                ]
            )
            == 0
        )
        assert (
            cli.main(
                [
                    "eval",
                    str(work / "q001.rank"),
                    "--truth",
                    str(work / "truth.json"),
                    "--csv",
                    str(work / "aps.csv"),
                    "--quiet",
                ]
            )
            == 0
        )
    for name in produced:
        first = (tmp_path / "first" / name).read_bytes()
        second = (tmp_path / "second" / name).read_bytes()
        assert first == second, f"{name} differs between identical runs"
