"""Shared numerical kernels.

Small dense vector helpers, modified Gram-Schmidt, fixed 5-point
finite-difference stencils, composite-Simpson cumulative quadrature and a
classical fixed-step 4th-order ODE integrator.  Everything operates on plain
numpy arrays, is pure, and never mutates its inputs, so all of it is safe to
call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    NonFiniteField,
    TooFewSamples,
)

MAX_DIM = 16

# 5-point first/second derivative weights on a uniform grid.  Rows 0..4 give
# the stencil for nodes 0, 1, interior, N-2, N-1; integer weights over the
# common denominators 12*h and 12*h**2 keep constants exactly differentiable
# to zero.
_D1_ROWS = np.array(
    [
        [-25.0, 48.0, -36.0, 16.0, -3.0],
        [-3.0, -10.0, 18.0, -6.0, 1.0],
        [1.0, -8.0, 0.0, 8.0, -1.0],
        [-1.0, 6.0, -18.0, 10.0, 3.0],
        [3.0, -16.0, 36.0, -48.0, 25.0],
    ]
)
_D2_ROWS = np.array(
    [
        [35.0, -104.0, 114.0, -56.0, 11.0],
        [11.0, -20.0, 6.0, 4.0, -1.0],
        [-1.0, 16.0, -30.0, 16.0, -1.0],
        [-1.0, 4.0, 6.0, -20.0, 11.0],
        [11.0, -56.0, 114.0, -104.0, 35.0],
    ]
)


@dataclass(frozen=True)
class Grid:
    """Uniform sampling grid ``start + i*step`` for ``i < count``.

    Node values are always recomputed from the triple, never accumulated,
    so there is no cumulative drift.
    """

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not (np.isfinite(self.start) and np.isfinite(self.step)):
            raise ValueError("grid start/step must be finite")
        if self.step <= 0.0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if self.count < 5:
            raise ValueError(f"grid needs at least 5 nodes, got {self.count}")

    def nodes(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def length(self) -> float:
        return self.step * (self.count - 1)


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Validate a small dense vector: 1-D, finite, dimension 2..17."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {v.shape}")
    if not 2 <= v.size <= MAX_DIM + 1:
        raise DimensionMismatch(f"vector dimension {v.size} outside 2..{MAX_DIM + 1}")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


def gram_schmidt(vectors, tol: float = 1e-10) -> tuple[np.ndarray, int]:
    """Orthonormalize an ordered set of vectors by modified Gram-Schmidt.

    One full re-orthogonalization pass is applied, which keeps pairwise
    inner products at the 1e-15 level even for poorly conditioned input.
    Vectors whose residual after projection has norm below ``tol`` are
    dropped rather than normalized.

    Parameters
    ----------
    vectors : sequence of array_like
        Input vectors, all of the same dimension.
    tol : float
        Positive residual-norm threshold deciding rank.

    Returns
    -------
    basis : ndarray, shape (rank, dim)
        Orthonormal vectors spanning the same space.
    rank : int
        Number of vectors that survived.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        raise DegenerateInput("no input vectors")
    dim = vecs[0].shape
    for v in vecs[1:]:
        if v.shape != dim:
            raise DimensionMismatch(f"mixed dimensions {dim} and {v.shape}")
    if np.linalg.norm(vecs[0]) < tol:
        raise DegenerateInput("first vector is numerically zero")

    basis: list[np.ndarray] = []
    for v in vecs:
        w = v.astype(float, copy=True)
        for _ in range(2):
            for e in basis:
                w = w - (w @ e) * e
        norm = np.linalg.norm(w)
        if norm > tol:
            basis.append(w / norm)
    return np.array(basis), len(basis)


def diff_stencil(samples, step: float, order: int = 1) -> np.ndarray:
    """Differentiate uniformly spaced samples with fixed 5-point stencils.

    Central stencils are used in the interior and one-sided 5-point stencils
    at the first and last two nodes, so the output has the same length as
    the input.  ``order`` 1 is exact on polynomials of degree <= 4, order 2
    on degree <= 3 (degree <= 5 in the interior).

    Parameters
    ----------
    samples : array_like
        Sample values; differentiation runs along axis 0, extra axes ride
        along (so fields of shape (N, d) work directly).
    step : float
        Grid spacing, > 0.
    order : int
        Derivative order, 1 or 2.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if step <= 0.0:
        raise ValueError("step must be positive")
    f = np.asarray(samples, dtype=float)
    n = f.shape[0]
    if n < 5:
        raise TooFewSamples(f"need at least 5 samples, got {n}")
    rows = _D1_ROWS if order == 1 else _D2_ROWS
    denom = 12.0 * step if order == 1 else 12.0 * step * step

    # Each stencil is applied to differences against its own node (the row
    # weights sum to zero), which makes constants differentiate to exact
    # zeros and sheds the common magnitude before the weighted sum.
    out = np.zeros_like(f)
    c = rows[2]
    mid = f[2:-2]
    for offset, weight in ((-2, c[0]), (-1, c[1]), (1, c[3]), (2, c[4])):
        out[2:-2] += weight * (f[2 + offset : f.shape[0] - 2 + offset] - mid)
    head, tail = f[:5], f[-5:]
    for row, target, window, anchor in (
        (rows[0], 0, head, 0),
        (rows[1], 1, head, 1),
        (rows[3], -2, tail, 3),
        (rows[4], -1, tail, 4),
    ):
        shifted = window - window[anchor]
        out[target] = np.tensordot(row, shifted, axes=(0, 0))
    return out / denom


def cumulative_quadrature(values, step: float) -> np.ndarray:
    """Cumulative antiderivative of uniformly spaced samples.

    Composite Simpson: each interior interval gets the average of the two
    quadratic interpolants covering it (exact through cubics there), the two
    boundary intervals use the single adjacent quadratic.  ``out[0]`` is 0.
    The result is monotone for non-negative, grid-resolved integrands.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    f = np.asarray(values, dtype=float)
    if f.ndim != 1:
        raise DimensionMismatch("cumulative_quadrature expects 1-D samples")
    n = f.size
    if n < 3:
        raise TooFewSamples(f"need at least 3 samples, got {n}")

    inc = np.empty(n - 1)
    inc[0] = (5.0 * f[0] + 8.0 * f[1] - f[2]) * (step / 12.0)
    inc[-1] = (-f[-3] + 8.0 * f[-2] + 5.0 * f[-1]) * (step / 12.0)
    if n > 3:
        inc[1:-1] = (-f[:-3] + 13.0 * f[1:-2] + 13.0 * f[2:-1] - f[3:]) * (step / 24.0)
    out = np.empty(n)
    out[0] = 0.0
    np.cumsum(inc, out=out[1:])
    return out


def rk4_step(field, s: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classical 4th-order step of ``y' = field(s, y)`` from s to s+h."""
    k1 = np.asarray(field(s, y), dtype=float)
    k2 = np.asarray(field(s + 0.5 * h, y + (0.5 * h) * k1), dtype=float)
    k3 = np.asarray(field(s + 0.5 * h, y + (0.5 * h) * k2), dtype=float)
    k4 = np.asarray(field(s + h, y + h * k3), dtype=float)
    stages = k1 + 2.0 * k2 + 2.0 * k3 + k4
    if not np.all(np.isfinite(stages)):
        raise NonFiniteField(f"field returned non-finite values near s={s}")
    return y + (h / 6.0) * stages


def integrate_ode(field, y0, grid: Grid, postprocess=None) -> np.ndarray:
    """Integrate ``y' = field(s, y)`` across a grid with fixed-step RK4.

    Parameters
    ----------
    field : callable (s, y) -> array_like
        Right-hand side; must stay finite along the trajectory.
    y0 : array_like
        State at ``grid.start``; the trajectory's first row is exactly y0.
    grid : Grid
        Output nodes; one RK4 step per interval (no adaptivity).
    postprocess : callable (s, y) -> ndarray, optional
        Constraint hook applied to the state after every step (projection,
        renormalization, ...).

    Returns
    -------
    ndarray, shape (grid.count, len(y0))
    """
    y = np.asarray(y0, dtype=float).copy()
    out = np.empty((grid.count,) + y.shape)
    out[0] = y
    h = grid.step
    for i in range(grid.count - 1):
        s = grid.start + i * h
        y = rk4_step(field, s, y, h)
        if postprocess is not None:
            y = np.asarray(postprocess(grid.start + (i + 1) * h, y), dtype=float)
        out[i + 1] = y
    return out
