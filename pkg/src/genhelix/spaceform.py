"""Ambient spaces of constant curvature and their connection.

Supported spaces are Euclidean n-space and round n-spheres embedded in
R^(n+1).  The Levi-Civita covariant derivative along a curve is realized
extrinsically: differentiate the ambient coordinates, then project onto the
tangent space.  For Euclidean space the projection is the identity and the
code path degenerates exactly to plain finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import GridMismatch, NonTangentSeed, OffManifold
from .numerics import MAX_DIM, Grid, diff_stencil, integrate_ode, rk4_step

if TYPE_CHECKING:  # pragma: no cover
    from .curves import UnitSpeedCurve

_REL_MANIFOLD_TOL = 1e-6
_REL_TANGENT_TOL = 1e-8


@dataclass(frozen=True)
class SpaceForm:
    """Euclidean n-space or a round n-sphere of given radius.

    ``dim`` is the intrinsic dimension; ambient coordinates have ``dim``
    components in the Euclidean case and ``dim + 1`` on the sphere.
    """

    kind: str
    dim: int
    radius: float | None = None

    def __post_init__(self):
        if self.kind not in ("euclidean", "sphere"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if not 2 <= self.dim <= MAX_DIM:
            raise ValueError(f"intrinsic dimension {self.dim} outside 2..{MAX_DIM}")
        if self.kind == "sphere":
            if self.radius is None or not np.isfinite(self.radius) or self.radius <= 0:
                raise ValueError(f"sphere radius must be positive, got {self.radius}")
        elif self.radius is not None:
            raise ValueError("euclidean space takes no radius")

    @classmethod
    def euclidean(cls, dim: int) -> "SpaceForm":
        return cls("euclidean", dim)

    @classmethod
    def sphere(cls, dim: int, radius: float = 1.0) -> "SpaceForm":
        return cls("sphere", dim, float(radius))

    @property
    def is_euclidean(self) -> bool:
        return self.kind == "euclidean"

    @property
    def ambient_dim(self) -> int:
        return self.dim if self.is_euclidean else self.dim + 1

    @property
    def sectional_curvature(self) -> float:
        return 0.0 if self.is_euclidean else 1.0 / (self.radius * self.radius)

    def to_string(self) -> str:
        if self.is_euclidean:
            return f"euclidean:{self.dim}"
        return f"sphere:{self.dim}:{self.radius:.17g}"

    @classmethod
    def from_string(cls, text: str) -> "SpaceForm":
        parts = text.strip().split(":")
        if parts[0] == "euclidean" and len(parts) == 2:
            return cls.euclidean(int(parts[1]))
        if parts[0] == "sphere" and len(parts) == 3:
            return cls.sphere(int(parts[1]), float(parts[2]))
        raise ValueError(f"unrecognized space form string {text!r}")

    def check_points(self, points: np.ndarray) -> None:
        """Raise OffManifold if any row strays from the manifold."""
        pts = np.atleast_2d(points)
        if pts.shape[-1] != self.ambient_dim:
            raise OffManifold(
                f"points have {pts.shape[-1]} components, expected {self.ambient_dim}"
            )
        if self.is_euclidean:
            return
        norms = np.linalg.norm(pts, axis=-1)
        worst = np.max(np.abs(norms - self.radius))
        if worst > _REL_MANIFOLD_TOL * self.radius:
            raise OffManifold(
                f"point deviates from sphere radius by {worst:.3e} "
                f"(tolerance {_REL_MANIFOLD_TOL * self.radius:.3e})"
            )


@dataclass(frozen=True)
class TangentField:
    """Vector field along a curve, stored in ambient coordinates per node.

    ``depth`` counts how many stencil differentiations produced the field;
    consumers use it to size the boundary margin excluded from statistics.
    """

    grid: Grid
    vectors: np.ndarray
    depth: int = 0

    @property
    def margin(self) -> int:
        return 2 * self.depth


def tangent_project(space: SpaceForm, point, vector) -> np.ndarray:
    """Project an ambient vector onto the tangent space at a point.

    Euclidean spaces return the input array unchanged (no copy), which makes
    the flat reduction exact down to the bit level.  On the sphere the radial
    component is removed.
    """
    if space.is_euclidean:
        return np.asarray(vector, dtype=float)
    p = np.asarray(point, dtype=float)
    v = np.asarray(vector, dtype=float)
    space.check_points(p)
    r2 = space.radius * space.radius
    return v - (np.dot(v, p) / r2) * p


def _project_rows(space: SpaceForm, points: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Row-wise tangent projection; identity (same array) for Euclidean."""
    if space.is_euclidean:
        return vectors
    r2 = space.radius * space.radius
    radial = np.einsum("nd,nd->n", vectors, points) / r2
    return vectors - radial[:, None] * points


def covariant_derivative(space: SpaceForm, curve: "UnitSpeedCurve", field: TangentField) -> TangentField:
    """Covariant derivative of a field along a unit-speed curve.

    Ambient 5-point differentiation followed by tangential projection at
    every node.  For Euclidean space no projection is applied, so the result
    is exactly the raw stencil derivative.
    """
    if field.grid != curve.grid:
        raise GridMismatch("field and curve are sampled on different grids")
    space.check_points(curve.points)
    deriv = diff_stencil(field.vectors, curve.grid.step)
    deriv = _project_rows(space, curve.points, deriv)
    return TangentField(curve.grid, deriv, depth=field.depth + 1)


def parallel_transport(
    space: SpaceForm,
    curve: "UnitSpeedCurve",
    x0,
    start_index: int = 0,
) -> TangentField:
    """Transport a tangent vector along the curve with zero covariant derivative.

    The transport equation is integrated with the shared fixed-step RK4
    kernel; after every step the state is re-projected onto the tangent
    space and renormalized to ``|x0|``, which pins the tangency and
    constant-norm invariants.  ``start_index`` selects the seed node (the
    classification pipeline seeds at the midpoint, where frame data is most
    accurate).
    """
    x0 = np.asarray(x0, dtype=float)
    grid = curve.grid
    if not 0 <= start_index < grid.count:
        raise ValueError(f"start_index {start_index} outside grid")
    space.check_points(curve.points)
    if x0.shape != (space.ambient_dim,):
        raise NonTangentSeed(
            f"seed has shape {x0.shape}, expected ({space.ambient_dim},)"
        )

    if space.is_euclidean:
        return TangentField(grid, np.tile(x0, (grid.count, 1)))

    radius = space.radius
    p0 = curve.points[start_index]
    norm0 = np.linalg.norm(x0)
    if abs(np.dot(x0, p0)) > _REL_TANGENT_TOL * radius * max(norm0, 1e-300):
        raise NonTangentSeed("seed vector is not tangent at the start point")

    # Curve position and tangent at half-grid resolution; the RK4 stages of
    # step i only ever query s_i, s_i + h/2 and s_{i+1}.
    s_nodes = grid.nodes()
    spline = CubicSpline(s_nodes, curve.points, axis=0)
    half_step = 0.5 * grid.step
    s_half = grid.start + half_step * np.arange(2 * grid.count - 1)
    pts_half = spline(s_half)
    tans_half = spline(s_half, 1)
    r2 = radius * radius

    def field(s, y):
        j = int(round((s - grid.start) / half_step))
        pt = pts_half[j]
        tan = tans_half[j]
        return (-(np.dot(y, tan)) / r2) * pt

    def renorm(s, y):
        j = int(round((s - grid.start) / half_step))
        pt = pts_half[j]
        y = y - (np.dot(y, pt) / r2) * pt
        n = np.linalg.norm(y)
        return y * (norm0 / n) if n > 0 else y

    def march(s0: float, n_steps: int, fld, post) -> np.ndarray:
        if n_steps + 1 >= 5:
            leg = Grid(s0, grid.step, n_steps + 1)
            return integrate_ode(fld, x0, leg, postprocess=post)
        # Legs too short for a Grid: take the same RK4 steps by hand.
        y = x0.copy()
        traj = [y]
        for i in range(n_steps):
            y = rk4_step(fld, s0 + i * grid.step, y, grid.step)
            y = post(s0 + (i + 1) * grid.step, y)
            traj.append(y)
        return np.array(traj)

    out = np.empty((grid.count, space.ambient_dim))
    out[start_index] = x0

    n_fwd = grid.count - 1 - start_index
    if n_fwd >= 1:
        traj = march(s_nodes[start_index], n_fwd, field, renorm)
        out[start_index:] = traj
    if start_index >= 1:
        # Integrate backwards in the reversed parameter u = -s.
        def field_rev(u, y):
            return -field(-u, y)

        def renorm_rev(u, y):
            return renorm(-u, y)

        traj = march(-s_nodes[start_index], start_index, field_rev, renorm_rev)
        out[:start_index] = traj[1:][::-1]
    return TangentField(grid, out)
