"""Delta-invariants, the sharp inequality delta <= c H^2, and ideal-embedding verdicts."""
from .delta_opt import (
    DeltaResult,
    OptimizerOptions,
    delta_bruteforce,
    delta_constant_curvature,
    delta_invariant,
    max_normalized_delta,
)
from .partitions import Partition, c_coefficient, enumerate_tuples
from .tensor_core import (
    CurvatureTensor,
    Subspace,
    constant_curvature_tensor,
    random_curvature_tensor,
    scalar_curvature,
    sectional_curvature,
    subspace_scalar_curvature,
    validate_curvature_tensor,
)
from .verdict import Outcome, Verdict, covering_obstruction, ideality_criterion

__version__ = "0.1.0"
