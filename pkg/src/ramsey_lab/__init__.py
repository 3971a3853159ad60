"""Desk-scale laboratory for monochromatic tight paths in layered-graph
hypergraphs: random host construction, proper-cycle enumeration and
counting, the greedy tight-path builder with audited certificates, and
Monte Carlo property verification."""

from .bounds import (
    CanonicalExpectedStats,
    ExpectedStats,
    canonical_expected_stats,
    chernoff_lower,
    chernoff_upper,
    expected_stats,
    poly_concentration_scale,
    poly_concentration_threshold,
)
from .cycles import (
    DEFAULT_CYCLE_CAP,
    ProperCycle,
    ProperPath,
    TightHypergraph,
    TrashFamily,
    build_hypergraph,
    count_cycles_meeting,
    count_family_extensions,
    count_proper_cycles,
    count_restricted_extensions,
    cycle_subpaths,
    cycles_per_vertex,
    cycles_through_vertex,
    enumerate_proper_cycles,
    extend_path,
    proper_path,
    trash_family,
    validate_tight_path,
    validate_tight_path_verbose,
)
from .errors import (
    ConfigError,
    InvariantViolationError,
    ParameterError,
    ResourceLimitError,
    UnknownVertexError,
)
from .greedy import (
    Certificate,
    CertificateAudit,
    Coloring,
    FoundPath,
    LexChoice,
    RandomChoice,
    adversarial_coloring,
    audit_certificate,
    greedy_round,
    pick_majority_color,
    random_coloring,
    run_outer,
)
from .layered_graph import (
    CanonicalParams,
    GraphParams,
    LayeredGraph,
    canonical_params,
    complete_layered,
    generate_random,
    neighbors,
)
from .oracle import (
    ArrowResult,
    SearchResult,
    Verdict,
    arrow_check,
    brute_force_cycles,
    tight_path_exists,
)
from .verifier import (
    EPSILON_GRID,
    ConcentrationReport,
    PropertyReport,
    RatioReport,
    check_property_i,
    check_property_ii,
    check_property_iii,
    concentration_experiment,
    sample_trash_family,
)

__version__ = "0.1.0"
