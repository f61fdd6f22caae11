"""Profile-guided inter-procedural basic block layout toolkit."""

from stitchkit._core import (
    BlockId,
    CacheConfig,
    Layout,
    PipelineConfig,
    StitchkitError,
    SyntheticSpec,
    TlbConfig,
    WeightedICFG,
    chain_cycle_cover,
    chain_greedy,
    compute_metrics,
    count_adjacent,
    count_d_close,
    cs_layout,
    default_distance_levels,
    generate_synthetic,
    hot_subgraph,
    ingest_lbr_files,
    layout_for_strategy,
    load_layout,
    load_profile,
    profile_to_string,
    save_layout,
    save_profile,
)

__all__ = [
    "BlockId",
    "CacheConfig",
    "Layout",
    "PipelineConfig",
    "StitchkitError",
    "SyntheticSpec",
    "TlbConfig",
    "WeightedICFG",
    "chain_cycle_cover",
    "chain_greedy",
    "compute_metrics",
    "count_adjacent",
    "count_d_close",
    "cs_layout",
    "default_distance_levels",
    "generate_synthetic",
    "hot_subgraph",
    "ingest_lbr_files",
    "layout_for_strategy",
    "load_layout",
    "load_profile",
    "profile_to_string",
    "save_layout",
    "save_profile",
]

__version__ = "0.1.0"
