"""Leader-based incremental community detection for snapshot-sequenced networks."""

from .benchgen import EventBenchConfig, GroundTruth, KawadiaConfig, generate_events, generate_kawadia
from .cliques import maximal_cliques, maximal_cliques_containing
from .errors import (
    ConfigError,
    ContractViolation,
    EmptyNetworkError,
    InvariantError,
    LeaderTrackError,
    ParseError,
    UndefinedObjectiveError,
)
from .expansion import (
    CommunityState,
    ExpansionResult,
    expand,
    hub_similarity,
    incremental_ic,
    index_of_connectivity,
    resolve_memberships,
)
from .graph import (
    DynamicNetwork,
    SnapshotGraph,
    SymbolTable,
    TemporalEdgeRecord,
    degree,
    ego_network,
    in_community_degree,
    ingest_edge_stream,
)
from .leaders import LeaderSet, detect_leaders
from .metrics import ground_truth_series, nmi, persistence_series, smoothness_series
from .pipeline import Community, CommunityTimeline, Event, Partition, bootstrap, run, run_baseline, step
from .static import StaticPartition, cluster_leftovers, cluster_static, modularity

__version__ = "0.1.0"
