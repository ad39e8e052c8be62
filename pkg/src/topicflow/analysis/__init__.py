"""Graph analyses over Topic Flow Networks."""
from .flows import FlowMatrix, flow_matrix, top_flows
from .kcore import core_numbers, coreness, coreness_grid
from .metrics import small_world_metrics
from .pagerank import pagerank
from .walktrap import (
    CommunityPartition,
    CommunitySummary,
    community_topic_summary,
    modularity,
    walktrap,
)

__all__ = [
    "CommunityPartition",
    "CommunitySummary",
    "FlowMatrix",
    "community_topic_summary",
    "core_numbers",
    "coreness",
    "coreness_grid",
    "flow_matrix",
    "modularity",
    "pagerank",
    "small_world_metrics",
    "top_flows",
    "walktrap",
]
