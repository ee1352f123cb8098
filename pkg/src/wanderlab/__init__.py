"""Executable hyperbolic-metric dynamics on annuli.

Subpackages: exact hyperbolic geometry on canonical domains (hypgeo), the
power-tower annulus model and its distance trichotomy (tower), connectivity
silhouette classification (silhouette), the model-map construction lab
(modelmap), boundary-convergence probes (boundary), and a deterministic
experiment CLI (cli).
"""

__version__ = "0.1.0"

from . import errors
from .hypgeo import (
    Annulus,
    HorizontalStrip,
    LogPolarPoint,
    PolylinePath,
    RightHalfPlane,
    SymmetricAnnulus,
    UnitDisk,
    annulus,
    core_geodesic_length,
    degree_bound,
    density,
    distance,
    lift_to_strip,
    path_length,
)
from .tower import (
    PairClass,
    PairTag,
    PowerTower,
    TowerPoint,
    TrichotomyVerdict,
    circle_collapse_bound,
    classify_pair,
    h_value,
    iterate,
    limit_distance,
    pair_distance,
    trichotomy_report,
)
from .silhouette import (
    ConnectivitySignature,
    DynamicsClass,
    DynamicsVerdict,
    RHInstance,
    classify_silhouette,
    eventual_connectivity,
    feasible_degrees,
    modulus_growth,
    riemann_hurwitz,
)
from .modelmap import (
    ModelParams,
    SampledCurve,
    calibrate,
    connectivity_audit,
    generate_params,
    stage_map,
    trace_phi_component,
    verify_containment,
    winding_number,
)
from .boundary import (
    BoundaryTrace,
    ConvergenceCase,
    HullDomain,
    SyntheticSystem,
    convergence_class,
    delta_sequence,
    harnack_check,
    loop_length_bound,
    shadowing_check,
    topological_hull,
)

__all__ = [name for name in dir() if not name.startswith("_")]
