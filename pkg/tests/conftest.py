import math

import numpy as np
import pytest

import genhelix as gh

# Tuned analysis instances shared across the suite.  The parameter ranges
# balance two error floors of the chained 5-point stencils: truncation falls
# like h^4 while float64 rounding noise grows like 1/h^k per derivative
# level, so the long ranges (large h at fixed node count) keep the deep
# chains (dimension 5) quiet.
HELIX_A, HELIX_B = 3.0, 4.0
HELIX_NODES = 2000

WCURVE = dict(a=1.0, p=0.5, b=0.6, q=1.0, c=math.sqrt(0.39), t1=1280.0)
WCURVE_NODES = 4000

CLIFFORD = dict(theta=math.pi / 4, p=1.0, q=2.0, t1=8 * math.pi)
CLIFFORD_NODES = 4000


@pytest.fixture(scope="session")
def helix_bundle():
    spec = gh.generate("circular_helix", a=HELIX_A, b=HELIX_B)
    curve = gh.resample_by_arclength(spec, HELIX_NODES)
    return spec.space, curve, gh.analyze(spec.space, curve)


@pytest.fixture(scope="session")
def wcurve_bundle():
    spec = gh.generate("w_curve_5", **WCURVE)
    curve = gh.resample_by_arclength(spec, WCURVE_NODES)
    return spec.space, curve, gh.analyze(spec.space, curve)


@pytest.fixture(scope="session")
def clifford_bundle():
    spec = gh.generate("clifford_s3", **CLIFFORD)
    curve = gh.resample_by_arclength(spec, CLIFFORD_NODES)
    return spec.space, curve, gh.analyze(spec.space, curve)


@pytest.fixture(scope="session")
def generic5_curve():
    """Smooth non-degenerate, non-helix curve in Euclidean 5-space."""

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        return np.stack(
            [
                np.cos(0.5 * t),
                np.sin(0.5 * t),
                0.6 * np.cos(t),
                0.6 * np.sin(t),
                math.sqrt(0.39) * t + 0.25 * np.sin(0.2 * t),
            ],
            axis=-1,
        )

    spec = gh.CurveSpec.analytic(gh.SpaceForm.euclidean(5), evaluator, (0.0, 320.0))
    return spec.space, gh.resample_by_arclength(spec, 4000)
