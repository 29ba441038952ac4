"""Numerical geometry of convex surfaces, equidistant foliations and
Chern-Simons invariants in hyperbolic 3-space."""
from .errors import ConfigError, DomainError, FocalRadiusError, NonConstantFrameError, NonConvexError
from .hypgeom import (
    BASE_FRAME,
    BASE_POINT,
    FermiChart,
    apply_isometry,
    christoffel,
    fermi_embed,
    frame_to_isometry,
    hyperbolic_distance,
    isometry_to_frame,
    metric_at,
    normal_flow,
)
from .spectral import ChartGrid
from .surfaces import (
    LeafGeometry,
    SurfaceChart,
    check_convexity,
    fundamental_forms,
    integrate_surface,
    principal_curvatures,
)
from .foliation import (
    CollarSpec,
    HyperbolicCollar,
    InfinityGeometry,
    WarpedCollar,
    conformal_check,
    metric_at_infinity,
    normal_hit,
    normal_hit_table,
    propagate,
)
from .scenarios import FuchsianStrip, GraphPatch, Tube, hemisphere, horosphere, paraboloid
from .frames import (
    FrameField,
    adapted_frame,
    build_constant_frame,
    fermi_frame,
    frame_at_infinity,
    gauge_between,
    tilted,
    twisted,
    verify_constant,
)
from .cartan import (
    compare_connections,
    complex_mean_curvature,
    frame_jet,
    levi_civita_forms,
    torsion_two_form,
    weitzenbock_shape,
)
from .chernsimons import (
    adapted_reduction,
    decomposition_residual,
    gauge_transform_terms,
    psl2_cs_pullback,
    so3_cs_pullback,
)
from .renorm import (
    Scenario,
    corollary_check,
    p_q_diagnostics,
    psl2_renormalize,
    renormalize,
    so3_renormalize,
    w_volume,
)

__version__ = "0.1.0"
