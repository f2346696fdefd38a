"""Local symmetry of left-invariant Riemannian metrics on 3-dimensional Lie groups."""
from .errors import *
from .enum import (
    AlgebraFamily,
    FamilyTag,
    FrameKind,
    G0Form,
    HaLeeGroup,
    UnimodularKind,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .algebra import (
    BasisChange,
    MetricLieAlgebra,
    MetricMatrix,
    StructureTensor,
    bracket,
    change_basis,
    jacobi_residual,
    unimodularity,
)
from .catalog import abelian, e0tilde2, g_d, g_i, halee_algebra, load_algebra, su2
from .milnor import MilnorFrame, identify_family, milnor_D, milnor_frame
# NOTE: the `curvature` function is exported as `curvature_tensor` so that
# `liesym.curvature` stays the submodule.
from .curvature import (
    closed_form_R_nonunimodular,
    closed_form_R_unimodular,
    connection,
    curvature as curvature_tensor,
    is_locally_symmetric,
    nabla_R,
)
from .classification import (
    ClassificationVerdict,
    HaLeeMetric,
    classify,
    classify_halee,
    grid_verify,
    nonunimodular_residuals,
    solution_family,
    unimodular_residuals,
)
from .geodesics import (
    AlgebraVector,
    CoverPoint,
    GroupPoint,
    closed_geodesic,
    exp_e,
    integrate_geodesic,
    is_symmetric_space_E02,
    log_e,
    symmetry_based,
    symmetry_cover,
    symmetry_welldefined,
)


__version__ = "0.1.0"
