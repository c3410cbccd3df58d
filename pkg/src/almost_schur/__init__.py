"""Numerical curvature toolkit for almost-Schur integral inequalities.

Computes higher mean curvatures, Newton transformations, Lovelock curvatures
and generalized Einstein tensors on explicitly parametrized closed manifolds,
and verifies the associated sharp integral inequalities, their equality cases
and the conformal sharpness sweep at desk scale.
"""

from .catalog import get_manifold, list_catalog
from .curvature_functionals import (
    LovelockData,
    NewtonTensor,
    einstein_newton_bridge,
    lovelock,
    mean_curvature,
    mean_curvature_hypersurface,
    newton_transform,
    traceless_newton,
)
from .extrinsic_geometry import (
    AmbientSpace,
    ImmersionChart,
    PointGeometry,
    gauss_riemann,
    point_geometry,
    principal_curvatures,
    ricci_bound_certificate,
)
from .intrinsic_geometry import (
    ConformalFamily,
    MetricChart,
    ScalarChartFunction,
    christoffel,
    conformal_metric,
    covariant_divergence,
    riemann,
)
from .quadrature import QuadratureGrid, build_grid, integrate, l2_deviation
from .spectral import EigenvalueEstimate, lambda1, poincare_check
from .tensor_algebra import (
    AlgCurvTensor4,
    SymTensor2,
    VecValuedSym2,
    gen_kronecker,
    inner4,
    kulkarni_nomizu,
    traceless2,
)
from .verifier import (
    InequalityContext,
    InequalityReport,
    equality_taxonomy,
    sharpness_sweep,
    verify_cor_B,
    verify_gwx,
    verify_thm_R,
    verify_thm_main,
)

__version__ = "0.1.0"

__all__ = [
    "AlgCurvTensor4",
    "AmbientSpace",
    "ConformalFamily",
    "EigenvalueEstimate",
    "ImmersionChart",
    "InequalityContext",
    "InequalityReport",
    "LovelockData",
    "MetricChart",
    "NewtonTensor",
    "PointGeometry",
    "QuadratureGrid",
    "ScalarChartFunction",
    "SymTensor2",
    "VecValuedSym2",
    "build_grid",
    "christoffel",
    "conformal_metric",
    "covariant_divergence",
    "einstein_newton_bridge",
    "equality_taxonomy",
    "gauss_riemann",
    "gen_kronecker",
    "get_manifold",
    "inner4",
    "integrate",
    "kulkarni_nomizu",
    "l2_deviation",
    "lambda1",
    "list_catalog",
    "lovelock",
    "mean_curvature",
    "mean_curvature_hypersurface",
    "newton_transform",
    "point_geometry",
    "poincare_check",
    "principal_curvatures",
    "ricci_bound_certificate",
    "riemann",
    "sharpness_sweep",
    "traceless2",
    "traceless_newton",
    "verify_cor_B",
    "verify_gwx",
    "verify_thm_R",
    "verify_thm_main",
]
