"""Similarity-propagation re-ranking over pairwise match graphs."""

from .errors import (
    BadParams,
    DimensionMismatch,
    DuplicatePair,
    EmptyInput,
    EmptyTruth,
    IoError,
    MissingTruth,
    NoDirectMatches,
    ParseError,
    RelpropError,
    SelfMatch,
    UnknownQueryId,
    UnknownVertex,
)
from .evaluation import (
    EvalTruth,
    SweepRow,
    SweepSpec,
    average_precision,
    mean_ap,
    run_sweep,
    subgraph_recall,
)
from .fileio import (
    read_matches,
    read_queries,
    read_ranking,
    read_sweep_csv,
    read_truths,
    write_matches,
    write_queries,
    write_ranking,
    write_sweep_csv,
    write_truths,
)
from .graph import (
    KernelParams,
    MatchGraph,
    MatchRecord,
    build_graph,
    load_graph,
    match_score,
    save_graph,
)
from .pipeline import RankResult, rank_query
from .propagation import (
    PropagationParams,
    QueryContext,
    RelevanceState,
    comprehensive_relevance,
    direct_relevance,
    propagate,
    rank,
)
from .subgraph import (
    Subgraph,
    SubgraphParams,
    expand_subgraph,
    restrict_vectors,
    select_roots,
)
from .synthetic import SyntheticCorpus, gen_chain, gen_clusters, gen_synthetic

__version__ = "0.1.0"

__all__ = [
    "BadParams",
    "DimensionMismatch",
    "DuplicatePair",
    "EmptyInput",
    "EmptyTruth",
    "EvalTruth",
    "IoError",
    "KernelParams",
    "MatchGraph",
    "MatchRecord",
    "MissingTruth",
    "NoDirectMatches",
    "ParseError",
    "PropagationParams",
    "QueryContext",
    "RankResult",
    "RelevanceState",
    "RelpropError",
    "SelfMatch",
    "Subgraph",
    "SubgraphParams",
    "SweepRow",
    "SweepSpec",
    "SyntheticCorpus",
    "UnknownQueryId",
    "UnknownVertex",
    "average_precision",
    "build_graph",
    "comprehensive_relevance",
    "direct_relevance",
    "expand_subgraph",
    "gen_chain",
    "gen_clusters",
    "gen_synthetic",
    "load_graph",
    "match_score",
    "mean_ap",
    "propagate",
    "rank",
    "rank_query",
    "read_matches",
    "read_queries",
    "read_ranking",
    "read_sweep_csv",
    "read_truths",
    "restrict_vectors",
    "run_sweep",
    "save_graph",
    "select_roots",
    "subgraph_recall",
    "write_matches",
    "write_queries",
    "write_ranking",
    "write_sweep_csv",
    "write_truths",
]
