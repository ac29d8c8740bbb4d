"""Curve specifications, arclength reparametrization, and test-curve generators.

A ``CurveSpec`` is either an analytic evaluator over a parameter interval or
a table of sampled points; both are turned into a ``UnitSpeedCurve`` (uniform
arclength grid) by :func:`resample_by_arclength`.  Derivatives are never taken
from user callbacks: curves are evaluated densely and differentiated with the
shared 5-point stencils, so every downstream quantity lives under one error
model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .errors import (
    BadParams,
    DegenerateCurve,
    NonMonotoneLength,
    TooFewSamples,
)
from .numerics import Grid, cumulative_quadrature, diff_stencil
from .spaceform import SpaceForm

_MIN_NODES = 64
_MIN_SAMPLES_HIGH_DIM = 512


@dataclass(frozen=True)
class CurveSpec:
    """Analytic or sampled description of a curve inside a space form."""

    space: SpaceForm
    kind: str  # "analytic" | "sampled"
    evaluator: Callable | None = None
    t_range: tuple[float, float] | None = None
    points: np.ndarray | None = None
    params: np.ndarray | None = None
    file_param: str = "generic"  # parametrization tag carried by curve files

    @classmethod
    def analytic(cls, space: SpaceForm, evaluator: Callable, t_range) -> "CurveSpec":
        t0, t1 = float(t_range[0]), float(t_range[1])
        if not (np.isfinite(t0) and np.isfinite(t1) and t1 > t0):
            raise BadParams(f"bad parameter range ({t0}, {t1})")
        return cls(space, "analytic", evaluator=evaluator, t_range=(t0, t1))

    @classmethod
    def sampled(cls, space: SpaceForm, points, params=None) -> "CurveSpec":
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != space.ambient_dim:
            raise BadParams(
                f"sample array shape {pts.shape} does not match ambient dimension "
                f"{space.ambient_dim}"
            )
        if not np.all(np.isfinite(pts)):
            raise BadParams("samples contain non-finite values")
        if params is None:
            ts = np.arange(len(pts), dtype=float)
        else:
            ts = np.asarray(params, dtype=float)
            if ts.shape != (len(pts),):
                raise BadParams("params length does not match sample count")
            if not np.all(np.diff(ts) > 0):
                raise BadParams("params must be strictly increasing")
        space.check_points(pts)
        return cls(space, "sampled", points=pts, params=ts)


@dataclass(frozen=True)
class UnitSpeedCurve:
    """Curve resampled to a uniform arclength grid with unit speed."""

    grid: Grid
    points: np.ndarray
    derivative_source: str = "AnalyticStencil"

    def __post_init__(self):
        self.points.setflags(write=False)


def _evaluate(spec: CurveSpec, ts: np.ndarray) -> np.ndarray:
    """Dense evaluation of a spec; sampled specs go through a cubic spline."""
    if spec.kind == "sampled":
        interp = CubicSpline(spec.params, spec.points, axis=0)
        return interp(ts)
    try:
        pts = np.asarray(spec.evaluator(ts), dtype=float)
        if pts.shape != (ts.size, spec.space.ambient_dim):
            raise ValueError
    except Exception:
        pts = np.array([spec.evaluator(t) for t in ts], dtype=float)
    if pts.shape != (ts.size, spec.space.ambient_dim):
        raise BadParams(
            f"evaluator returned shape {pts.shape}, expected "
            f"({ts.size}, {spec.space.ambient_dim})"
        )
    if not np.all(np.isfinite(pts)):
        raise BadParams("evaluator produced non-finite points")
    return pts


def resample_by_arclength(spec: CurveSpec, node_count: int) -> UnitSpeedCurve:
    """Reparametrize a curve to unit speed on a uniform arclength grid.

    Arclength is accumulated by composite-Simpson quadrature of the stencil
    speed on a dense parameter grid; the parameter is inverted with a
    monotone cubic (PCHIP) interpolant, then the curve is re-evaluated at the
    uniformly spaced arclength targets.

    Raises
    ------
    DegenerateCurve
        If the speed drops below 1e-10 anywhere (stationary point).
    NonMonotoneLength
        If the numerical arclength is not strictly increasing.
    """
    if node_count < _MIN_NODES:
        raise BadParams(f"node_count must be >= {_MIN_NODES}, got {node_count}")
    if spec.kind == "sampled":
        t0, t1 = spec.params[0], spec.params[-1]
        if spec.space.dim >= 4 and len(spec.points) < _MIN_SAMPLES_HIGH_DIM:
            raise TooFewSamples(
                f"sampled curves in dimension >= 4 need at least "
                f"{_MIN_SAMPLES_HIGH_DIM} samples, got {len(spec.points)}"
            )
    else:
        t0, t1 = spec.t_range

    dense_n = max(16 * node_count, 4096)
    ts = np.linspace(t0, t1, dense_n)
    pts = _evaluate(spec, ts)
    dt = ts[1] - ts[0]
    vel = diff_stencil(pts, dt)
    speed = np.linalg.norm(vel, axis=1)
    if np.min(speed) < 1e-10:
        raise DegenerateCurve(
            f"speed drops to {np.min(speed):.3e}; curve has a stationary point"
        )
    s_of_t = cumulative_quadrature(speed, dt)
    if np.any(np.diff(s_of_t) <= 0):
        raise NonMonotoneLength("numerical arclength is not strictly increasing")

    total = s_of_t[-1]
    grid = Grid(0.0, total / (node_count - 1), node_count)
    t_of_s = PchipInterpolator(s_of_t, ts)
    t_targets = t_of_s(grid.nodes())
    # Guard the endpoints against interpolation rounding.
    t_targets[0], t_targets[-1] = t0, t1
    out = _evaluate(spec, t_targets)
    if not spec.space.is_euclidean:
        radii = np.linalg.norm(out, axis=1)
        out = out * (spec.space.radius / radii)[:, None]
    source = "SampleStencil" if spec.kind == "sampled" else "AnalyticStencil"
    return UnitSpeedCurve(grid, out, derivative_source=source)


def speed_profile(curve: UnitSpeedCurve) -> np.ndarray:
    """Node-wise speed of a unit-speed curve (should be 1 within 1e-6)."""
    vel = diff_stencil(curve.points, curve.grid.step)
    return np.linalg.norm(vel, axis=1)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _require(params: dict, names: tuple[str, ...], kind: str) -> list[float]:
    vals = []
    for name in names:
        if name not in params:
            raise BadParams(f"{kind} requires parameter {name!r}")
        try:
            vals.append(float(params[name]))
        except (TypeError, ValueError):
            raise BadParams(f"parameter {name!r} of {kind} is not a real number")
    extra = set(params) - set(names) - {"t0", "t1"}
    if extra:
        raise BadParams(f"unknown parameters for {kind}: {sorted(extra)}")
    return vals


def _t_range(params: dict, default=(0.0, 2.0 * np.pi)) -> tuple[float, float]:
    t0 = float(params.get("t0", default[0]))
    t1 = float(params.get("t1", default[1]))
    if not t1 > t0:
        raise BadParams(f"need t1 > t0, got ({t0}, {t1})")
    return t0, t1


def generate(kind: str, **params) -> CurveSpec:
    """Build one of the named analytic test curves.

    Kinds
    -----
    circular_helix(a, b)
        ``(a cos t, a sin t, b t)`` in Euclidean 3-space; a > 0.
    w_curve_5(a, p, b, q, c)
        ``(a cos pt, a sin pt, b cos qt, b sin qt, c t)`` in Euclidean
        5-space; constant curvatures, requires p != q.
    clifford_s3(theta, p, q)
        ``(cos θ cos pt, cos θ sin pt, sin θ cos qt, sin θ sin qt)`` on the
        unit 3-sphere; requires p != q and θ strictly inside (0, π/2).
    perturbed(base=<kind>, eps, **base params)
        Base curve plus ``eps * sin(7t)`` on one coordinate (projected back
        to the sphere for spherical kinds); a deliberate non-helix.
    generic_3d(c1..c6 optional)
        Polynomial-plus-trigonometric curve in Euclidean 3-space used as a
        negative control.

    All kinds accept optional ``t0``/``t1`` overriding the parameter range.
    """
    if kind == "circular_helix":
        a, b = _require(params, ("a", "b"), kind)
        if a <= 0:
            raise BadParams(f"circular_helix needs a > 0, got a={a}")
        t_range = _t_range(params)

        def evaluator(t):
            t = np.asarray(t, dtype=float)
            return np.stack([a * np.cos(t), a * np.sin(t), b * t], axis=-1)

        return CurveSpec.analytic(SpaceForm.euclidean(3), evaluator, t_range)

    if kind == "w_curve_5":
        a, p, b, q, c = _require(params, ("a", "p", "b", "q", "c"), kind)
        if a <= 0 or b <= 0:
            raise BadParams("w_curve_5 needs positive radii a, b")
        if p == 0 or q == 0:
            raise BadParams("w_curve_5 needs nonzero frequencies")
        if p == q:
            raise BadParams("w_curve_5 needs distinct frequencies p != q")
        t_range = _t_range(params)

        def evaluator(t):
            t = np.asarray(t, dtype=float)
            return np.stack(
                [
                    a * np.cos(p * t),
                    a * np.sin(p * t),
                    b * np.cos(q * t),
                    b * np.sin(q * t),
                    c * t,
                ],
                axis=-1,
            )

        return CurveSpec.analytic(SpaceForm.euclidean(5), evaluator, t_range)

    if kind == "clifford_s3":
        theta, p, q = _require(params, ("theta", "p", "q"), kind)
        if not 0.0 < theta < 0.5 * np.pi:
            raise BadParams(f"clifford_s3 needs theta in (0, pi/2), got {theta}")
        if p == 0 or q == 0:
            raise BadParams("clifford_s3 needs nonzero frequencies")
        if p == q:
            raise BadParams("clifford_s3 needs distinct frequencies p != q")
        t_range = _t_range(params)
        ct, st = np.cos(theta), np.sin(theta)

        def evaluator(t):
            t = np.asarray(t, dtype=float)
            return np.stack(
                [
                    ct * np.cos(p * t),
                    ct * np.sin(p * t),
                    st * np.cos(q * t),
                    st * np.sin(q * t),
                ],
                axis=-1,
            )

        return CurveSpec.analytic(SpaceForm.sphere(3, 1.0), evaluator, t_range)

    if kind == "perturbed":
        sub = dict(params)
        base_kind = sub.pop("base", None)
        eps = sub.pop("eps", None)
        if base_kind is None or base_kind == "perturbed":
            raise BadParams("perturbed requires base=<generator kind>")
        if eps is None:
            raise BadParams("perturbed requires eps")
        eps = float(eps)
        base = generate(str(base_kind), **sub)
        base_eval = base.evaluator
        on_sphere = not base.space.is_euclidean

        def evaluator(t):
            t = np.asarray(t, dtype=float)
            pts = np.array(base_eval(t), dtype=float)
            bump = np.zeros_like(pts)
            bump[..., 0] = eps * np.sin(7.0 * t)
            if on_sphere:
                r2 = base.space.radius ** 2
                radial = np.sum(bump * pts, axis=-1, keepdims=True) / r2
                pts = pts + bump - radial * pts
                pts *= base.space.radius / np.linalg.norm(pts, axis=-1, keepdims=True)
                return pts
            return pts + bump

        return CurveSpec.analytic(base.space, evaluator, base.t_range)

    if kind == "generic_3d":
        defaults = {"c1": 1.0, "c2": 0.35, "c3": 0.6, "c4": 0.12, "c5": 0.8, "c6": 0.1}
        coeffs = dict(defaults)
        for key, val in params.items():
            if key in ("t0", "t1"):
                continue
            if key not in defaults:
                raise BadParams(f"unknown parameters for generic_3d: [{key!r}]")
            coeffs[key] = float(val)
        c1, c2, c3, c4, c5, c6 = (coeffs[k] for k in ("c1", "c2", "c3", "c4", "c5", "c6"))
        t_range = _t_range(params)

        def evaluator(t):
            t = np.asarray(t, dtype=float)
            return np.stack(
                [
                    c1 * t + c2 * np.sin(t),
                    c3 * np.sin(t) + c4 * t * t,
                    c5 * np.cos(t) + c6 * t,
                ],
                axis=-1,
            )

        return CurveSpec.analytic(SpaceForm.euclidean(3), evaluator, t_range)

    raise BadParams(f"unknown generator kind {kind!r}")


# ---------------------------------------------------------------------------
# Curve files
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    """Format a double with 17 significant digits (lossless round-trip)."""
    return format(float(x), ".17g")


def save_curve(path, spec: CurveSpec, param: str | None = None) -> None:
    """Write a sampled curve spec as a JSON curve file.

    ``param`` defaults to whatever the spec was loaded with ("generic" for
    fresh specs).  Floats carry 17 significant digits, so load followed by
    save reproduces a file byte for byte.
    """
    if spec.kind != "sampled":
        raise ValueError("only sampled specs can be saved; resample analytic ones first")
    _write_curve_file(path, spec.space, spec.points, spec.params, param or spec.file_param)


def save_unit_curve(path, space: SpaceForm, curve: UnitSpeedCurve) -> None:
    _write_curve_file(path, space, curve.points, curve.grid.nodes(), "arclength")


def _write_curve_file(path, space, points, params, param_kind) -> None:
    rows = ",\n    ".join(
        "[" + ", ".join(_fmt(x) for x in row) + "]" for row in np.asarray(points)
    )
    tvals = ", ".join(_fmt(t) for t in np.asarray(params))
    text = (
        "{\n"
        f'  "space": "{space.to_string()}",\n'
        f'  "param": "{param_kind}",\n'
        f'  "samples": [\n    {rows}\n  ],\n'
        f'  "params": [{tvals}]\n'
        "}\n"
    )
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def load_curve(path) -> CurveSpec:
    """Read a curve file; returns a sampled CurveSpec.

    The returned spec carries ``param`` through unchanged: files whose
    samples are already an arclength grid can be analyzed without a second
    resampling (see :func:`unit_curve_from_file_spec`).
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for fld in ("space", "param", "samples"):
        if fld not in doc:
            raise ValueError(f"curve file missing field {fld!r}")
    space = SpaceForm.from_string(doc["space"])
    if doc["param"] not in ("arclength", "generic"):
        raise ValueError(f'field "param" must be "arclength" or "generic", got {doc["param"]!r}')
    samples = np.asarray(doc["samples"], dtype=float)
    if samples.ndim != 2:
        raise ValueError('field "samples" must be a list of coordinate rows')
    if samples.shape[0] < 5:
        raise ValueError(
            f'field "samples" has {samples.shape[0]} rows; a curve file needs at least 5'
        )
    params = doc.get("params")
    if params is not None:
        params = np.asarray(params, dtype=float)
    spec = CurveSpec.sampled(space, samples, params)
    return replace(spec, file_param=doc["param"])


def unit_curve_from_file_spec(spec: CurveSpec) -> UnitSpeedCurve | None:
    """Rebuild a UnitSpeedCurve directly from an arclength-parametrized file.

    Returns None when the spec is not marked as an arclength file or its
    parameter grid is not uniform; callers then fall back to a full
    resample.  The direct path avoids interpolating through the samples a
    second time, which keeps analyze runs bit-stable for round trips.
    """
    if spec.file_param != "arclength":
        return None
    ts = spec.params
    if ts is None or len(ts) < 5:
        return None
    steps = np.diff(ts)
    step = steps[0]
    if step <= 0 or np.max(np.abs(steps - step)) > 1e-9 * max(abs(ts[-1]), 1.0):
        return None
    grid = Grid(float(ts[0]), float(ts[-1] - ts[0]) / (len(ts) - 1), len(ts))
    return UnitSpeedCurve(grid, spec.points.copy(), derivative_source="SampleStencil")
