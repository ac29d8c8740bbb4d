"""Harmonic curvatures, their constant-ratio closed forms, and the helix
criterion residuals.

The harmonic curvatures are built recursively from the curvature table:
H_1 = k_1/k_2 and, for 2 <= i <= n-2,

    H_i = (dH_{i-1}/ds + H_{i-2} * k_i) / k_{i+1}

with the conventions H_{-1} = 1 and H_0 = 0.  A non-degenerate curve is a
generalized helix exactly when the residual

    r = dH_{n-2}/ds + k_{n-1} * H_{n-3}

vanishes; in odd dimension the same residual expands into a telescoped sum of
odd-index derivative terms weighted by curvature-ratio products, which this
module also evaluates directly as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCurvature, DimensionMismatch, EvenDimension
from .frenet import FrenetApparatus
from .numerics import Grid, diff_stencil

_MASK_BUDGET = 0.5  # masked fraction of interior above which we give up


@dataclass(frozen=True)
class HarmonicProfile:
    """Per-node harmonic curvatures H_1..H_{n-2} plus the index conventions.

    ``values`` has shape (N, n-2) with column i-1 holding H_i.  ``mask``
    marks nodes where the top harmonic curvature could not be computed
    because |k_{n-1}| fell below threshold; masked values are interpolated
    from valid neighbors so the table stays finite.
    """

    grid: Grid
    values: np.ndarray
    mask: np.ndarray
    margin: int
    h_minus_one: float = 1.0
    h_zero: float = 0.0

    def __post_init__(self):
        self.values.setflags(write=False)
        self.mask.setflags(write=False)

    @property
    def order(self) -> int:
        return self.values.shape[1]

    def component(self, i: int) -> np.ndarray:
        """H_i as a per-node array; i = -1 and 0 map to the conventions."""
        count = self.grid.count
        if i == -1:
            return np.full(count, self.h_minus_one)
        if i == 0:
            return np.full(count, self.h_zero)
        if not 1 <= i <= self.order:
            raise DimensionMismatch(f"H_{i} not defined for this profile")
        return self.values[:, i - 1]

    def sum_of_squares(self) -> np.ndarray:
        if self.order == 0:
            return np.zeros(self.grid.count)
        return np.einsum("ni,ni->n", self.values, self.values)


@dataclass(frozen=True)
class CriterionResidual:
    """Node-wise residual of the helix criterion with its scale factor.

    ``normalization`` is max|k_{n-1}| * sqrt(1 + mean sum H_j^2) over the
    interior, which makes thresholds invariant under uniform rescaling of
    the curve.
    """

    grid: Grid
    residual: np.ndarray
    normalization: float
    margin: int
    mask: np.ndarray

    def __post_init__(self):
        self.residual.setflags(write=False)
        self.mask.setflags(write=False)

    def _valid(self) -> np.ndarray:
        keep = ~self.mask
        keep[: self.margin] = False
        keep[self.grid.count - self.margin :] = False
        if not keep.any():
            keep = ~self.mask
        if not keep.any():
            keep = np.ones(self.grid.count, dtype=bool)
        return keep

    def rms_normalized(self) -> float:
        r = self.residual[self._valid()]
        return float(np.sqrt(np.mean(r * r))) / self.normalization

    def max_normalized(self) -> float:
        return float(np.max(np.abs(self.residual[self._valid()]))) / self.normalization


def _dilate(mask: np.ndarray, width: int) -> np.ndarray:
    """Widen a boolean mask by ``width`` nodes on each side."""
    if not np.any(mask) or width <= 0:
        return mask.copy()
    out = mask.copy()
    for shift in range(1, width + 1):
        out[shift:] |= mask[:-shift]
        out[:-shift] |= mask[shift:]
    return out


def harmonic_curvatures(app: FrenetApparatus) -> HarmonicProfile:
    """Evaluate the harmonic-curvature recursion over the whole grid.

    The denominators k_2..k_{n-2} are already guaranteed positive by the
    apparatus' degeneracy policy; the final denominator k_{n-1} may
    legitimately vanish, so nodes where |k_{n-1}| < eps are masked (and the
    curve reported degenerate when that happens on most of the interior,
    e.g. for planar curves).
    """
    n = app.space.dim
    ks = app.curvatures
    count = app.grid.count
    eps = app.eps_degenerate
    order = max(n - 2, 0)
    mask = app.degeneracy_flags.copy()
    values = np.zeros((count, order))

    if order > 0:
        top = np.abs(ks[:, n - 2]) < eps
        mask |= top
        interior = slice(app.margin, count - app.margin)
        n_interior = max(count - 2 * app.margin, 1)
        if np.count_nonzero(mask[interior]) / n_interior > _MASK_BUDGET:
            raise DegenerateCurvature(
                f"|k_{n-1}| below {eps:g} on most of the curve; harmonic "
                "curvatures undefined (planar or otherwise degenerate curve)"
            )
        safe_top = np.where(top, 1.0, ks[:, n - 2])

        h_prev2 = np.zeros(count)  # H_{i-2}, starts at H_0 = 0
        denom = safe_top if n == 3 else ks[:, 1]
        h_prev = ks[:, 0] / denom  # H_1 = k_1/k_2
        values[:, 0] = h_prev
        for i in range(2, n - 1):
            deriv = diff_stencil(h_prev, app.grid.step)
            denom = safe_top if i == n - 2 else ks[:, i]
            h_new = (deriv + h_prev2 * ks[:, i - 1]) / denom
            values[:, i - 1] = h_new
            h_prev2, h_prev = h_prev, h_new

        if np.any(mask):
            good = ~mask
            idx = np.arange(count, dtype=float)
            for j in range(order):
                values[mask, j] = np.interp(idx[mask], idx[good], values[good, j])

    margin = app.margin + 2 * max(n - 3, 0)
    return HarmonicProfile(grid=app.grid, values=values, mask=mask, margin=margin)


def curvature_ratios(app: FrenetApparatus) -> np.ndarray:
    """Per-node odd/even curvature ratios k_1/k_2, k_3/k_4, ... (N, m)."""
    n = app.space.dim
    m = (n - 1) // 2
    ks = app.curvatures
    return np.stack([ks[:, 2 * j] / ks[:, 2 * j + 1] for j in range(m)], axis=1)


def closed_form_constant_ratios(ratios) -> list[tuple[float, float]]:
    """Closed-form harmonic curvatures for constant curvature ratios.

    Given m constant ratios r_j = k_{2j-1}/k_{2j}, the even harmonic
    curvatures vanish and the odd ones telescope into leading products:

        H_{2i} = 0,   H_{2i+1} = r_{i+1} * r_i * ... * r_1.

    Returns the list [(H_0, H_1), (H_2, H_3), ...] of m pairs.
    """
    rs = [float(r) for r in ratios]
    if not all(np.isfinite(rs)):
        raise ValueError("ratios must be finite")
    out = []
    prod = 1.0
    for r in rs:
        prod *= r
        out.append((0.0, prod))
    return out


def _normalization(app: FrenetApparatus, profile: HarmonicProfile) -> float:
    interior = slice(profile.margin, app.grid.count - profile.margin)
    k_top = float(np.max(np.abs(app.curvatures[interior, -1])))
    mean_sq = float(np.mean(profile.sum_of_squares()[interior]))
    return max(k_top, 1e-300) * np.sqrt(1.0 + mean_sq)


def criterion_residual(app: FrenetApparatus, profile: HarmonicProfile) -> CriterionResidual:
    """Residual of the helix criterion r = dH_{n-2}/ds + k_{n-1} H_{n-3}.

    Vanishes identically (to stencil accuracy) exactly on generalized
    helices; in dimension 3 it reduces to the derivative of k_1/k_2, i.e.
    the classical constant-ratio test.
    """
    n = app.space.dim
    if n < 3:
        raise DimensionMismatch("criterion residual needs intrinsic dimension >= 3")
    if profile.order != n - 2:
        raise DimensionMismatch("profile does not match the apparatus dimension")
    deriv = diff_stencil(profile.component(n - 2), app.grid.step)
    residual = deriv + app.curvatures[:, n - 2] * profile.component(n - 3)
    return CriterionResidual(
        grid=app.grid,
        residual=residual,
        normalization=_normalization(app, profile),
        margin=profile.margin + 2,
        mask=_dilate(profile.mask, 2),
    )


def expanded_residual_odd(app: FrenetApparatus, profile: HarmonicProfile) -> CriterionResidual:
    """Fully expanded helix criterion in odd dimension n = 2m+1 >= 5.

    Substituting the recursion into r = dH_{2m-1}/ds + k_{2m} H_{2m-2}
    telescopes the even-index harmonic curvatures away, leaving derivative
    terms of the odd-index ones weighted by alternating curvature-ratio
    products and a final product chain times (k_1/k_2)'.  Evaluating that
    sum term by term gives a value that must agree with
    :func:`criterion_residual` pointwise.
    """
    n = app.space.dim
    if n % 2 == 0:
        raise EvenDimension(f"expansion defined for odd dimension, got n={n}")
    if n < 5:
        raise DimensionMismatch("expansion needs intrinsic dimension >= 5")
    if profile.order != n - 2:
        raise DimensionMismatch("profile does not match the apparatus dimension")

    ks = app.curvatures
    h = app.grid.step
    residual = diff_stencil(profile.component(n - 2), h)
    carry = ks[:, n - 2].copy()  # coefficient of H_{l-2} while unrolling
    for level in range(2 * ((n - 1) // 2) - 2, 2, -2):
        residual = residual + (carry / ks[:, level]) * diff_stencil(
            profile.component(level - 1), h
        )
        carry = carry * ks[:, level - 1] / ks[:, level]
    residual = residual + (carry / ks[:, 2]) * diff_stencil(profile.component(1), h)

    return CriterionResidual(
        grid=app.grid,
        residual=residual,
        normalization=_normalization(app, profile),
        margin=profile.margin + 2,
        mask=_dilate(profile.mask, 2),
    )
