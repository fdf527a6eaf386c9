"""Cluster health scoring from cross-tab segregation.

The heavy lifting lives in the compiled extension; this package just
re-exports it.
"""

from ._cluscore import (  # noqa: F401
    BinnedVariable,
    BinStrategy,
    ClusError,
    ClusterAssignment,
    ComparisonEntry,
    ComparisonReport,
    CrossTabMatrix,
    Dataset,
    ImpactReport,
    ImpactRow,
    OutlierCell,
    ScoreCurve,
    ScoreReport,
    SegregationResult,
    Variable,
    VariableScore,
    __version__,
    bin_numeric,
    bin_variable,
    compare_methods,
    crosstab,
    crosstab_from_counts,
    dataset_score,
    default_strategy,
    drop_variables,
    encode_categorical,
    k_sweep,
    kmeans,
    kmeans_fit,
    load_assignment,
    load_dataset,
    outlier_cells,
    parse_dataset,
    score,
    segregated_count,
    select_variables,
    sparse_mask_render,
    suggest_k,
    variable_impact,
    variable_score,
)
