"""Numerical differential geometry of curves in Euclidean space and on spheres.

Frenet frames and curvatures in dimensions 2..16, harmonic curvatures and
their closed forms, parallel transport under the Levi-Civita connection, and
generalized-helix classification with machine-checkable diagnostics.
"""

from .curves import (
    CurveSpec,
    UnitSpeedCurve,
    generate,
    load_curve,
    resample_by_arclength,
    save_curve,
    save_unit_curve,
    speed_profile,
    unit_curve_from_file_spec,
)
from .errors import (
    BadParams,
    DegenerateCurvature,
    DegenerateCurve,
    DegenerateInput,
    DimensionMismatch,
    DimensionTooHigh,
    EvenDimension,
    GeometryError,
    GridMismatch,
    NonFiniteField,
    NonMonotoneLength,
    NonTangentSeed,
    NotAHelix,
    OffManifold,
    TooFewSamples,
)
from .frenet import FrenetApparatus, frenet_apparatus, frenet_residual
from .harmonic import (
    CriterionResidual,
    HarmonicProfile,
    closed_form_constant_ratios,
    criterion_residual,
    curvature_ratios,
    expanded_residual_odd,
    harmonic_curvatures,
)
from .helix import (
    Analysis,
    DarbouxField,
    HelixReport,
    analyze,
    axis_field,
    classify,
    darboux_field,
    verify_theorem,
)
from .numerics import (
    Grid,
    cumulative_quadrature,
    diff_stencil,
    gram_schmidt,
    integrate_ode,
)
from .spaceform import (
    SpaceForm,
    TangentField,
    covariant_derivative,
    parallel_transport,
    tangent_project,
)

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "BadParams",
    "CriterionResidual",
    "CurveSpec",
    "DarbouxField",
    "DegenerateCurvature",
    "DegenerateCurve",
    "DegenerateInput",
    "DimensionMismatch",
    "DimensionTooHigh",
    "EvenDimension",
    "FrenetApparatus",
    "GeometryError",
    "Grid",
    "GridMismatch",
    "HarmonicProfile",
    "HelixReport",
    "NonFiniteField",
    "NonMonotoneLength",
    "NonTangentSeed",
    "NotAHelix",
    "OffManifold",
    "SpaceForm",
    "TangentField",
    "TooFewSamples",
    "UnitSpeedCurve",
    "analyze",
    "axis_field",
    "classify",
    "closed_form_constant_ratios",
    "covariant_derivative",
    "criterion_residual",
    "cumulative_quadrature",
    "curvature_ratios",
    "darboux_field",
    "diff_stencil",
    "expanded_residual_odd",
    "frenet_apparatus",
    "frenet_residual",
    "generate",
    "gram_schmidt",
    "harmonic_curvatures",
    "integrate_ode",
    "load_curve",
    "parallel_transport",
    "resample_by_arclength",
    "save_curve",
    "save_unit_curve",
    "speed_profile",
    "tangent_project",
    "unit_curve_from_file_spec",
    "verify_theorem",
]
