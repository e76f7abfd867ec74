import mpmath
import numpy as np
from hypothesis import given
from hypothesis import strategies as st
import pytest

from gring.errors import PreconditionError
from gring.hyperbolic.model import (
    HypIsometry, HypPoint, apply, boost, from_polar, geodesic_point, hyp_distance, hyp_midpoint,
    inverse, isometry_defect, minkowski, norm_residual, origin, rotation,
)

radii = st.floats(0.0, 30.0)
angles = st.floats(0.0, 2 * np.pi)


def polar2(r, th):
    return from_polar(r, np.array([np.cos(th), np.sin(th)]))


def _mp_distance(r1, t1, r2, t2):
    """Distance from exact polar data at 50 digits: cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 cos(dt)."""
    mpmath.mp.dps = 50
    r1, r2, t1, t2 = map(mpmath.mpf, (r1, r2, t1, t2))
    c = mpmath.cosh(r1) * mpmath.cosh(r2) - mpmath.sinh(r1) * mpmath.sinh(r2) * mpmath.cos(t1 - t2)
    return float(mpmath.acosh(max(c, 1)))


def test_unit_boost_distance():
    q = np.array([np.cosh(1.0), np.sinh(1.0), 0.0])
    assert hyp_distance(origin(2), q) == pytest.approx(1.0, abs=1e-15)


def test_degenerate_geodesics():
    p, q = polar2(3.0, 0.2), polar2(5.0, 2.0)
    assert np.allclose(geodesic_point(p, q, 0.0), p)
    assert np.allclose(hyp_midpoint(p, p), p)
    with pytest.raises(PreconditionError):
        geodesic_point(p, q, hyp_distance(p, q) + 1.0)


@given(radii, angles, radii, angles)
def test_distance_matches_high_precision(r1, t1, r2, t2):
    d = hyp_distance(polar2(r1, t1), polar2(r2, t2))
    assert abs(d - _mp_distance(r1, t1, r2, t2)) <= 1e-9 * (1 + d)


@given(radii, angles, radii, angles, st.floats(0, 1))
def test_geodesic_point_splits_the_distance(r1, t1, r2, t2, frac):
    p, q = polar2(r1, t1), polar2(r2, t2)
    d = hyp_distance(p, q)
    x = geodesic_point(p, q, frac * d)
    tol = 1e-9 * (1 + d)
    assert abs(hyp_distance(p, x) - frac * d) <= tol
    assert abs(hyp_distance(x, q) - (1 - frac) * d) <= tol
    assert norm_residual(x) < 1e-12


@given(radii, angles, radii, angles, st.floats(0, 3), angles, angles)
def test_isometries_preserve_distance(r1, t1, r2, t2, s, phi, psi):
    p, q = polar2(r1, t1), polar2(r2, t2)
    Q = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
    M = boost(s, np.array([np.cos(psi), np.sin(psi)])) @ rotation(Q)
    assert isometry_defect(M) < 1e-12
    d = hyp_distance(p, q)
    assert abs(hyp_distance(apply(M, p), apply(M, q)) - d) <= 1e-9 * (1 + d) * np.cosh(s)
    assert np.allclose(apply(inverse(M), apply(M, p)), p, rtol=1e-9, atol=1e-9 * np.cosh(r1 + s))


def test_extended_geodesic():
    p = polar2(2.0, 0.0)
    x = geodesic_point(p, origin(2), 5.0, extend=True)
    assert hyp_distance(origin(2), x) == pytest.approx(3.0, abs=1e-12)


def test_point_and_isometry_classes():
    p = HypPoint.polar(2.0, [3.0, 4.0])
    assert p.dim == 2 and abs(minkowski(p.coords, p.coords) + 1) < 1e-12
    with pytest.raises(PreconditionError):
        HypPoint([-1.0, 0.0, 0.0])
    g = HypIsometry(boost(1.0, np.array([1.0, 0.0])))
    assert hyp_distance(np.asarray(g(HypPoint(origin(2)))), origin(2)) == pytest.approx(1.0)
    assert np.allclose((g @ g.inverse()).matrix, np.eye(3), atol=1e-12)
    with pytest.raises(PreconditionError):
        HypIsometry(2 * np.eye(3))
