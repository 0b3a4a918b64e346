"""Call-graph similarity scoring and family clustering.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from graphfam._core import (  # noqa: F401
    DEFAULT_EXACT_ORDER_LIMIT,
    DUMMY,
    AnnealConfig,
    CallGraph,
    Clustering,
    ClusterSpread,
    CostBreakdown,
    DbscanConfig,
    DistanceMatrix,
    FrequencyTable,
    FunctionKind,
    GraphCorpus,
    GraphfamError,
    KMedoidsConfig,
    KMedoidsResult,
    Matching,
    MatchPair,
    SilhouetteReport,
    SimilarityScore,
    SynthConfig,
    Vertex,
    __version__,
    anneal_match,
    assignments_to_csv,
    cluster_purity,
    compute_matrix,
    dbscan,
    diameter_tightness,
    exact_min_ged,
    frequency_table,
    generate_corpus,
    graph_stats,
    init_plusplus,
    init_random,
    init_trained,
    kdist_curve,
    kmedoids,
    load_corpus,
    medoids_to_csv,
    pair_seed,
    pair_similarity,
    parse_graph,
    rename_locals,
    save_corpus,
    serialize_graph,
    silhouette,
    sum_of_error,
    validate_conventions,
)
