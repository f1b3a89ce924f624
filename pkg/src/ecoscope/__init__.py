"""Supply-chain risk analytics for language-based package ecosystems.

Covers snapshot ingestion, dependency-graph structure, download popularity,
abandonment, typo- and import-squatting scans, and install-time obscurity
alerts.
"""

from .abandonment import AbandonmentReport, abandonment_report, is_abandoned
from .advisor import AdvisorPolicy, Alert, AlertKind, PackageIndex, Severity, check_import, check_install, check_update
from .depgraph import (
    DependencyGraph,
    GraphStats,
    build_graph,
    chain_depth,
    closure_size,
    closure_size_distribution,
    graph_summary,
    prune_disconnected,
)
from .incidents import IncidentRecord, incident_summary, load_incidents
from .popularity import DownloadSample, PowerLawFit, ccdf, count_at_least, fit_power_law, top_share
from .snapshot import (
    DependencyExtraction,
    Ecosystem,
    PackageRecord,
    ParseStatus,
    Snapshot,
    extract_pypi_dependencies,
    parse_snapshot,
    read_snapshot,
    serialize_snapshot,
)
from .squatting import (
    SquatCandidate,
    candidate_pairs,
    content_similarity,
    edit_distance,
    import_squat_candidates,
    rank_typo_candidates,
    short_name_saturation,
)

__version__ = "0.1.0"
