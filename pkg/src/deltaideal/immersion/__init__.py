"""Submanifolds of Euclidean space: fundamental forms, curvature, inequality checks."""
from .checks import (
    InequalityRecord,
    InequalityReport,
    ideality_residual,
    is_ideal,
    verify_inequality,
)
from .core import (
    ImmersionSample,
    ParametricImmersion,
    fundamental_forms,
    induced_curvature,
    numeric_hessian,
    numeric_jacobian,
    reparametrize,
)
from .sampled import SampledImmersion
from .shapes import (
    BUILTIN_SHAPES,
    builtin_shape,
    cylinder,
    ellipsoid,
    plane,
    product_torus,
    sample_points,
    sphere,
    torus,
)
