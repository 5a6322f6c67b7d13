"""Lorentz globally framed f-structures at a point and their null Osserman conditions."""

from .catalog import (
    ModelDescriptor,
    build_r4_model,
    build_space_form_model,
    build_u2_model,
    canonical_structure,
    load_model,
    serialize_model,
    structure_of,
)
from .curvature import (
    AlmostComplexJ,
    ChartPointModel,
    LiePointModel,
    check_identities_2,
    coordinate_curvature,
    degenerate_plane_tensors,
    lie_group_curvature,
    reconstructed_curvature,
    space_form_curvature,
    two_eigenvalue_formula_violations,
)
from .gff import GffPoint, PlaneSection, phi_sectional_curvature, sectional_curvature, validate_structure
from .osserman import (
    NullDirection,
    OssermanConfig,
    OssermanVerdict,
    check_null_osserman,
    check_phi_null_osserman,
    classify_single_eigenvalue,
    jacobi_operator,
    recover_J,
    space_form_jacobi_spectrum,
)
from .tensor_core import (
    CurvatureTensor,
    PseudoMetric,
    Spectrum,
    constant_k_form,
    lemma21_check,
    symmetric_eigen,
    validate_curvature_like,
)

__version__ = "0.1.0"
