"""Vector coherent states over quaternion and octonion matrix representations."""

from .clifford_core import (
    Algebra,
    AlgebraElement,
    RepMatrix,
    apply_phase,
    cd_multiply,
    conjugate,
    k8_metric,
    link_metric,
    oct_left_matrix,
    oct_right_matrix,
    quat_to_matrix,
)
from .rho_moments import (
    QuadratureSpec,
    RadialRule,
    RhoSequence,
    canonical_density,
    canonical_rho,
    normalization_factor,
    truncation_bound,
    verify_moments,
)
from .vcs_states import (
    RepFamily,
    VcsState,
    build_eigen_vcs,
    build_exponential_vcs,
    build_octonion_vcs,
    build_quaternion_vcs,
    build_series_vcs,
    eigen_split,
    representation,
    uncertainty,
)

__version__ = "0.1.0"
