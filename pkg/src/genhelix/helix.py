"""Axis construction and generalized-helix classification.

A non-degenerate curve is a generalized helix when its unit tangent keeps a
constant angle with some parallel unit field.  The candidate axis direction
comes for free from the harmonic curvatures:

    D = v_1 + H_1 v_3 + ... + H_{n-2} v_n,      X = D / |D|

and two independent diagnostics decide the verdict: the criterion residual
(local, cheap) and the constancy of the angle between v_1 and the actual
parallel transport of X seeded at the midpoint (global, definitional).  The
report also carries the sum-of-squares spread of the harmonic curvatures (a
necessary condition only) and the deviation between the transported field
and D/|D| (the axis must itself be parallel on a helix).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import UnitSpeedCurve
from .errors import DimensionMismatch, GeometryError, NotAHelix
from .frenet import DEFAULT_EPS_DEGENERATE, FrenetApparatus, frenet_apparatus
from .harmonic import (
    CriterionResidual,
    HarmonicProfile,
    criterion_residual,
    harmonic_curvatures,
)
from .numerics import Grid
from .spaceform import SpaceForm, TangentField, covariant_derivative, parallel_transport

DEFAULT_TOL = 1e-3

VERDICT_HELIX = "Helix"
VERDICT_NON_HELIX = "NonHelix"
VERDICT_DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class DarbouxField:
    """Generalized Darboux vector per node, in ambient coordinates.

    By frame orthonormality |D|^2 = 1 + sum H_j^2, so the norm is at least 1
    and 1/|D| is the cosine of the axis angle on a helix.
    """

    grid: Grid
    vectors: np.ndarray
    norms: np.ndarray

    def __post_init__(self):
        self.vectors.setflags(write=False)
        self.norms.setflags(write=False)


@dataclass(frozen=True)
class HelixReport:
    """Classification verdict with the per-criterion diagnostics."""

    verdict: str
    tolerances: dict
    residual_rms: float | None = None
    angle_profile: np.ndarray | None = None
    angle_mean: float | None = None
    angle_spread: float | None = None
    sum_sq_spread: float | None = None
    transport_deviation: float | None = None
    cause: str | None = None

    def to_json_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "residual_rms": self.residual_rms,
            "angle_mean": self.angle_mean,
            "angle_spread": self.angle_spread,
            "sum_sq_spread": self.sum_sq_spread,
            "transport_deviation": self.transport_deviation,
            "tolerances": dict(self.tolerances),
        }
        if self.cause is not None:
            out["cause"] = self.cause
        return out


def darboux_field(app: FrenetApparatus, profile: HarmonicProfile) -> DarbouxField:
    """Assemble D = v_1 + sum_j H_j v_{j+2} node by node."""
    n = app.space.dim
    if profile.order != n - 2:
        raise DimensionMismatch("profile does not match the apparatus dimension")
    vectors = app.frames[:, 0, :].copy()
    for j in range(1, n - 1):
        vectors += profile.component(j)[:, None] * app.frames[:, j + 1, :]
    norms = np.linalg.norm(vectors, axis=1)
    return DarbouxField(grid=app.grid, vectors=vectors, norms=norms)


def axis_field(dar: DarbouxField) -> TangentField:
    """Unit axis candidate X = D/|D| (unit norm to rounding)."""
    return TangentField(dar.grid, dar.vectors / dar.norms[:, None])


@dataclass(frozen=True)
class Analysis:
    """Full pipeline bundle; classify and the verifiers share it."""

    space: SpaceForm
    curve: UnitSpeedCurve
    apparatus: FrenetApparatus
    profile: HarmonicProfile
    residual: CriterionResidual
    darboux: DarbouxField
    axis: TangentField
    transported: TangentField
    valid: np.ndarray  # margin-trimmed, unmasked interior nodes

    @property
    def angle_profile(self) -> np.ndarray:
        return np.einsum("nd,nd->n", self.apparatus.frames[:, 0, :], self.transported.vectors)


def analyze(
    space: SpaceForm,
    curve: UnitSpeedCurve,
    eps_degenerate: float = DEFAULT_EPS_DEGENERATE,
) -> Analysis:
    """Run frames -> harmonic curvatures -> residual -> axis -> transport.

    Raises GeometryError subclasses for degenerate input; classify() turns
    those into a Degenerate verdict instead.
    """
    app = frenet_apparatus(space, curve, eps_degenerate)
    profile = harmonic_curvatures(app)
    residual = criterion_residual(app, profile)
    dar = darboux_field(app, profile)
    axis = axis_field(dar)
    mid = curve.grid.count // 2
    transported = parallel_transport(space, curve, axis.vectors[mid], start_index=mid)

    count = curve.grid.count
    margin = residual.margin
    valid = ~residual.mask
    valid[:margin] = False
    valid[count - margin :] = False
    if not valid.any():
        valid = ~residual.mask
    return Analysis(
        space=space,
        curve=curve,
        apparatus=app,
        profile=profile,
        residual=residual,
        darboux=dar,
        axis=axis,
        transported=transported,
        valid=valid,
    )


def _spread(values: np.ndarray) -> float:
    return float(np.max(values) - np.min(values))


def classify(
    space: SpaceForm,
    curve: UnitSpeedCurve,
    tol: float = DEFAULT_TOL,
    eps_degenerate: float = DEFAULT_EPS_DEGENERATE,
) -> HelixReport:
    """Classify a unit-speed curve as Helix / NonHelix / Degenerate.

    Helix requires both the normalized criterion residual (RMS) and the
    spread of the transported-axis angle profile to stay below ``tol``.
    Pipeline failures (vanishing curvatures, stationary points, dimension
    too low for the criterion) produce a Degenerate verdict with the cause
    attached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    tolerances = {"tol": tol, "eps_degenerate": eps_degenerate}
    try:
        bundle = analyze(space, curve, eps_degenerate)
    except GeometryError as exc:
        return HelixReport(
            verdict=VERDICT_DEGENERATE,
            tolerances=tolerances,
            cause=f"{type(exc).__name__}: {exc}",
        )

    valid = bundle.valid
    angle = bundle.angle_profile
    residual_rms = bundle.residual.rms_normalized()
    angle_spread = _spread(angle[valid])
    sum_sq = bundle.profile.sum_of_squares()
    mean_sq = float(np.mean(sum_sq[valid]))
    sum_sq_spread = _spread(sum_sq[valid]) / max(mean_sq, 1e-300)
    axis_gap = np.linalg.norm(bundle.transported.vectors - bundle.axis.vectors, axis=1)
    transport_deviation = float(np.max(axis_gap[valid]))

    is_helix = residual_rms < tol and angle_spread < tol
    return HelixReport(
        verdict=VERDICT_HELIX if is_helix else VERDICT_NON_HELIX,
        tolerances=tolerances,
        residual_rms=residual_rms,
        angle_profile=angle,
        angle_mean=float(np.mean(angle[valid])),
        angle_spread=angle_spread,
        sum_sq_spread=sum_sq_spread,
        transport_deviation=transport_deviation,
    )


def verify_theorem(
    theorem_id: str,
    space: SpaceForm,
    curve: UnitSpeedCurve,
    tol: float = DEFAULT_TOL,
) -> tuple[float, dict]:
    """Numerically check one of the helix identities on a classified helix.

    ``theorem_id`` selects the check:

    T3  projection identities <v_{i+2}, X> = H_i <v_1, X> for the
        transported axis, maximized over i and the interior nodes.
    T6  the axis field is parallel: covariant derivative of D minus the
        predicted residual * v_n, maximized over the interior.
    T7  sum H_j^2 is constant and equals tan^2 of the axis angle.

    Returns (max_deviation, details).  Raises NotAHelix when the curve does
    not classify as a helix at ``tol`` (the identities are claims about
    helices only).
    """
    check = theorem_id.strip().upper()
    if check not in ("T3", "T6", "T7"):
        raise ValueError(f"unknown check id {theorem_id!r}; expected T3, T6 or T7")
    bundle = analyze(space, curve)
    residual_rms = bundle.residual.rms_normalized()
    angle = bundle.angle_profile
    valid = bundle.valid
    angle_spread = _spread(angle[valid])
    if not (residual_rms < tol and angle_spread < tol):
        raise NotAHelix(
            f"curve does not classify as a helix at tol={tol:g} "
            f"(residual_rms={residual_rms:.3e}, angle_spread={angle_spread:.3e})"
        )

    n = space.dim
    frames = bundle.apparatus.frames
    transported = bundle.transported.vectors

    if check == "T3":
        base = np.einsum("nd,nd->n", frames[:, 0, :], transported)
        worst = 0.0
        per_index = {}
        for i in range(1, n - 1):
            lhs = np.einsum("nd,nd->n", frames[:, i + 1, :], transported)
            gap = np.abs(lhs - bundle.profile.component(i) * base)
            per_index[i] = float(np.max(gap[valid]))
            worst = max(worst, per_index[i])
        return worst, {"per_index": per_index}

    if check == "T6":
        field = TangentField(curve.grid, bundle.darboux.vectors)
        dd = covariant_derivative(space, curve, field)
        predicted = bundle.residual.residual[:, None] * frames[:, n - 1, :]
        gap = np.linalg.norm(dd.vectors - predicted, axis=1)
        interior = bundle.valid
        k_scale = float(np.max(np.abs(bundle.apparatus.curvatures)))
        return float(np.max(gap[interior])), {"curvature_scale": k_scale}

    # T7: constancy of sum H_j^2 and agreement with tan^2(angle).
    sum_sq = bundle.profile.sum_of_squares()
    mean_sq = float(np.mean(sum_sq[valid]))
    spread = _spread(sum_sq[valid]) / max(mean_sq, 1e-300)
    cos_angle = float(np.mean(angle[valid]))
    tan_sq = (1.0 - cos_angle * cos_angle) / (cos_angle * cos_angle)
    gap = float(np.max(np.abs(sum_sq[valid] - tan_sq))) / (1.0 + tan_sq)
    return max(spread, gap), {
        "sum_sq_mean": mean_sq,
        "tan_sq_angle": tan_sq,
        "relative_spread": spread,
        "tan_sq_gap": gap,
    }
