"""coarselab: hyperbolic cones over finite metric spaces, level metrics,
net-of-nets graph structures, and coarse non-amenability certificates —
every construction paired with an executable verification."""

from .amenability import (
    CertificateReport,
    CheegerEstimate,
    IsoperimetryReport,
    QuasiLattice,
    boundary,
    cheeger_exact,
    cheeger_sweep,
    combine_components,
    isoperimetric_check,
    isoperimetric_constant_exact,
    nonamenability_certificate,
)
from .caograph import (
    CaoGraph,
    CaoParams,
    CaoVertex,
    DegreeStats,
    asymmetry_check,
    build_cao_graph,
    calibrate,
    choose_params,
    coboundedness_check,
    degree_stats,
    edge_length_check,
    laplacian_height,
    lipschitz_check,
    net_quality_check,
    qi_check,
    region_multiplicity_check,
    separation_check,
    valency_check,
)
from .cone import (
    ConePoint,
    ConeSample,
    KappaEstimate,
    LevelMetric,
    ball_height_confinement,
    bs_isometry,
    bs_metric,
    cone_metric,
    cone_metric_pairs,
    height,
    kappa,
    level_expansion_check,
    level_metric,
    project,
    segment_confinement_check,
    sigma_ray,
    step_bound,
)
from .errors import (
    AsymmetryError,
    CertificationFailure,
    CoarselabError,
    CoboundednessViolation,
    ConfinementViolation,
    DegenerateSpace,
    EmptyLevel,
    HypothesisViolation,
    InfeasibleParams,
    IsolatedVertex,
    MetricViolation,
    NegativeDistance,
    NoInteriorVertices,
    NotCobounded,
    NotConnected,
    NotRoughGeodesic,
    ResolutionWarning,
    SampleTooLarge,
    ScaleOutOfRange,
    SeparationViolation,
    TooLarge,
    TriangleViolation,
    ZeroDiagonalViolation,
)
from .generators import (
    cantor_sample,
    circle_sample,
    from_generator_spec,
    is_generator_spec,
    two_intervals,
    uniform_simplex,
)
from .io import load_distance_csv, load_point_cloud, save_distance_csv
from .report import CheckReport, read_isoperimetric_csv, read_json, write_isoperimetric_csv, write_json
from .spaces import (
    CoarsePartition,
    CoveringProfile,
    FiniteMetricSpace,
    HyperbolicityReport,
    Net,
    QuasilatticeReport,
    coarse_components,
    covering_number,
    estimate_properness_scale,
    gromov_product,
    hyperbolicity_delta,
    maximal_net,
    qi_scale_transfer,
    quasilattice_check,
    reparametrize_rough_geodesic,
    validate_metric,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
