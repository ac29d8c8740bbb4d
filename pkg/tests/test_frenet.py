import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

import genhelix as gh
from genhelix import (
    DegenerateCurvature,
    SpaceForm,
    frenet_apparatus,
    frenet_residual,
)
from conftest import CLIFFORD, WCURVE
from oracle_helpers import clifford_curvatures, wcurve_curvatures


def test_helix_curvatures_match_closed_form(helix_bundle):
    # Hand oracle: k1 = a/(a^2+b^2), k2 = b/(a^2+b^2) for the (3,4) helix.
    space, curve, bundle = helix_bundle
    app = bundle.apparatus
    it = app.interior()
    ks = app.curvatures
    assert np.max(np.abs(ks[it, 0] - 0.12)) < 1e-8
    assert np.max(np.abs(ks[it, 1] - 0.16)) < 1e-8


def test_helix_second_frame_vector_points_inward(helix_bundle):
    space, curve, bundle = helix_bundle
    inward = -curve.points.copy()
    inward[:, 2] = 0.0
    inward /= np.linalg.norm(inward, axis=1)[:, None]
    v2 = bundle.apparatus.frames[:, 1, :]
    it = bundle.apparatus.interior()
    assert np.max(np.linalg.norm(v2[it] - inward[it], axis=1)) < 1e-6


def test_straight_line_is_degenerate():
    spec = gh.CurveSpec.analytic(
        SpaceForm.euclidean(3),
        lambda t: np.stack([2 * np.asarray(t, float), 0 * t, 0 * t], axis=-1),
        (0.0, 1.0),
    )
    curve = gh.resample_by_arclength(spec, 200)
    with pytest.raises(DegenerateCurvature):
        frenet_apparatus(spec.space, curve)


def test_great_circle_is_degenerate():
    # Geodesics have zero intrinsic curvature; in dimension 2 the single
    # signed curvature carries the degeneracy check.
    spec = gh.CurveSpec.analytic(
        SpaceForm.sphere(2, 1.0),
        lambda t: np.stack([np.cos(t), np.sin(t), 0 * np.asarray(t, float)], axis=-1),
        (0.0, 2 * np.pi),
    )
    curve = gh.resample_by_arclength(spec, 500)
    with pytest.raises(DegenerateCurvature):
        frenet_apparatus(spec.space, curve)


def test_frames_are_orthonormal_and_oriented(helix_bundle, wcurve_bundle, clifford_bundle):
    for space, curve, bundle in (helix_bundle, wcurve_bundle, clifford_bundle):
        frames = bundle.apparatus.frames
        gram = np.einsum("nid,njd->nij", frames, frames)
        eye = np.eye(space.dim)
        assert np.max(np.abs(gram - eye)) < 1e-9
        if space.is_euclidean:
            mats = frames
        else:
            normal = (curve.points / space.radius)[:, None, :]
            mats = np.concatenate([frames, normal], axis=1)
        dets = np.linalg.det(mats)
        assert np.max(np.abs(dets - 1.0)) < 1e-9


def test_frenet_residual_small_on_analytic_instances(helix_bundle, wcurve_bundle):
    space, curve, bundle = helix_bundle
    assert frenet_residual(space, curve, bundle.apparatus) < 1e-6
    space, curve, bundle = wcurve_bundle
    assert frenet_residual(space, curve, bundle.apparatus) < 1e-5


def test_negated_frame_vector_is_detected(helix_bundle):
    space, curve, bundle = helix_bundle
    app = bundle.apparatus
    frames = app.frames.copy()
    frames[:, 2, :] = -frames[:, 2, :]
    broken = replace(app, frames=frames)
    ks = app.curvatures[app.interior()]
    bound = 2.0 * np.min(np.abs(ks)) / (1.0 + np.max(np.abs(ks)))
    assert frenet_residual(space, curve, broken) >= bound


def test_residual_converges_at_fourth_order():
    # Non-homogeneous analytic curve: truncation dominates, so halving the
    # step must cut the residual by ~16x (>= 8x required).
    spec = gh.generate("generic_3d")
    res = []
    for nodes in (500, 1000, 2000):
        curve = gh.resample_by_arclength(spec, nodes)
        app = frenet_apparatus(spec.space, curve)
        res.append(frenet_residual(spec.space, curve, app))
    assert res[0] / res[1] >= 8.0
    assert res[1] / res[2] >= 8.0


def test_wcurve_curvatures_constant_and_match_exact_oracle():
    # Short range keeps stencil truncation at the 1e-7 level so the exact
    # rational Gram-matrix oracle is matched tightly.
    spec = gh.generate("w_curve_5", a=1.0, p=0.5, b=0.6, q=1.0,
                       c=math.sqrt(0.39), t1=160.0)
    curve = gh.resample_by_arclength(spec, 4000)
    app = frenet_apparatus(spec.space, curve)
    it = app.interior()
    ks = app.curvatures
    exact = wcurve_curvatures(1, Fraction(1, 2), Fraction(3, 5), 1)
    for i in range(4):
        col = np.abs(ks[it, i])
        assert col.std() / col.mean() < 1e-6
        assert abs(col.mean() / exact[i] - 1.0) < 1e-6


def test_clifford_curvatures_match_exact_oracle(clifford_bundle):
    space, curve, bundle = clifford_bundle
    app = bundle.apparatus
    it = app.interior()
    exact = clifford_curvatures(Fraction(1, 2), 1, 2)  # [0.6, 0.8]
    assert exact == [0.6, 0.8]
    assert np.max(np.abs(app.curvatures[it, 0] - 0.6)) < 1e-6
    assert np.max(np.abs(np.abs(app.curvatures[it, 1]) - 0.8)) < 1e-6


def test_isolated_curvature_dip_is_masked_not_fatal():
    # generic_3d's k1 bottoms out near 0.1307; an eps just above that value
    # flags a thin isolated band (<1% of interior), which must be masked
    # and interpolated rather than raised, while a higher eps that catches
    # several percent of the nodes must raise.
    spec = gh.generate("generic_3d")
    curve = gh.resample_by_arclength(spec, 2000)
    app = frenet_apparatus(spec.space, curve, eps_degenerate=0.131)
    assert 0 < np.count_nonzero(app.degeneracy_flags) < 0.01 * curve.grid.count
    assert np.all(np.isfinite(app.curvatures))
    assert np.all(app.curvatures[:, 0] >= 0.131 * 0.9)  # interpolated over the dip
    with pytest.raises(DegenerateCurvature):
        frenet_apparatus(spec.space, curve, eps_degenerate=0.14)


def test_dimension_cap_enforced():
    with pytest.raises(ValueError):
        SpaceForm.euclidean(17)
    with pytest.raises(ValueError):
        SpaceForm.sphere(17, 1.0)


def test_eps_degenerate_must_be_positive(helix_bundle):
    space, curve, _ = helix_bundle
    with pytest.raises(ValueError):
        frenet_apparatus(space, curve, eps_degenerate=0.0)
