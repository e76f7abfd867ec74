import numpy as np
from hypothesis import given
from hypothesis import strategies as st
import pytest

from gring.errors import PreconditionError
from gring.hyperbolic import checks as C
from gring.hyperbolic.model import (
    apply, boost, from_polar, hyp_distance, hyp_midpoint, origin, rotation,
)

DELTA, MU = 5.0, 185.0
O2, O3 = origin(2), origin(3)


def pol(r, th):
    return from_polar(r, np.array([np.cos(th), np.sin(th)]))


def rot2(th):
    return rotation(np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]]))


# -- closed-form and degenerate configurations --------------------------------

def test_delta_degenerate_triangle():
    out = C.check_delta_inequality(O2, O2, pol(7.0, 1.0), DELTA)
    assert out.slack == pytest.approx(DELTA, abs=1e-9)


def test_delta_collinear_beyond():
    # p -- q -- o on one geodesic
    out = C.check_delta_inequality(O2, pol(9.0, 0.3), pol(4.0, 0.3), DELTA)
    assert out.slack == pytest.approx(DELTA, abs=1e-9)


def test_annulus_radial_segment():
    out = C.check_annulus(O2, pol(3.0, 0.5), pol(8.0, 0.5), DELTA)
    assert out.slacks["upper"] == pytest.approx(DELTA, abs=1e-9)
    assert out.slacks["lower"] == pytest.approx(0.0, abs=1e-9)
    out = C.check_annulus(O2, pol(3.0, 0.5), pol(3.0, 0.5), DELTA)
    assert out.passed()
    with pytest.raises(PreconditionError):
        C.check_annulus(O2, pol(5.0, 0.5), pol(3.0, 0.5), DELTA)


def test_annulus_sampler_hits_the_outer_sphere():
    for i in range(200):
        rng = np.random.default_rng([7, i])
        cfg = C.sample_annulus(rng, 3, DELTA, MU)
        R, Rp = hyp_distance(O3, cfg["m"]), hyp_distance(O3, cfg["q"])
        assert Rp >= R - 1e-9
        # the angle at m between the directions to o and to q is obtuse
        d_oq, d_om, d_mq = Rp, R, hyp_distance(cfg["m"], cfg["q"])
        cos_angle = (np.cosh(d_om) * np.cosh(d_mq) - np.cosh(d_oq)) / (np.sinh(d_om) * np.sinh(d_mq) + 1e-300)
        assert d_mq < 1e-9 or cos_angle <= 1e-6


def test_midpoint_in_ball_diameter_through_centre():
    R = 6.0
    out = C.check_midpoint_in_ball(O2, R, pol(R, 0.0), pol(R, np.pi), DELTA)
    assert out.slack == pytest.approx(DELTA, abs=1e-9)


def test_barycenter_two_points():
    out = C.check_barycenter_vs_midpoint([pol(3.0, 0.1), pol(5.0, 2.0)], DELTA)
    assert out.slack == pytest.approx(2 * DELTA, abs=1e-9)


def test_barycenter_bounds_single_point():
    out = C.check_barycenter_distance_bounds(O2, [pol(4.0, 1.0)], DELTA)
    assert out.slacks["lower"] == pytest.approx(DELTA, abs=1e-9)
    assert out.slacks["upper"] == pytest.approx(3 * DELTA, abs=1e-9)


def test_barycenter_bounds_symmetric_pair():
    # o on the bisector: the barycentre is the midpoint, at distance asinh-type closed form
    R, th = 8.0, 0.4
    X = [pol(R, th), pol(R, -th)]
    D = hyp_distance(*X)
    out = C.check_barycenter_distance_bounds(O2, X, DELTA)
    expect = np.arccosh(np.cosh(R) / np.cosh(D / 2))
    assert out.slacks["lower"] == pytest.approx(expect - (R - D / 2 - DELTA), abs=1e-9)


def test_extremal_single_sphere_is_vacuous():
    X = [pol(6.0, t) for t in (0.0, 1.0, 2.5)]
    out = C.check_extremal_cancellation(O2, X, DELTA)
    assert out.vacuous and out.passed()


def test_extremal_pair_plus_centre():
    X = [pol(30.0, 0.0), pol(30.0, np.pi), O2]
    out = C.check_extremal_cancellation(O2, X, DELTA)
    assert not out.vacuous and out.slack == pytest.approx(60.0, abs=1e-9)


def test_fellow_traveling_equal_points():
    p = pol(9.0, 1.0)
    out = C.check_fellow_traveling(O2, 9.0, p, p, DELTA)
    assert out.slack == pytest.approx(4 * DELTA, abs=1e-12)


def test_fellow_traveling_nearly_antipodal():
    # the segment pq nearly passes through o, so it tracks po closely
    out = C.check_fellow_traveling(O2, 10.0, pol(10.0, 0.0), pol(10.0, np.pi - 1e-6), DELTA)
    assert 4 * DELTA - out.slack < 1e-3


def test_delzant_identity():
    out = C.check_delzant(O2, 10.0, np.eye(3), pol(10.0, 0.3), MU, DELTA)
    assert out.slack == pytest.approx(MU + 9 * DELTA, abs=1e-9)


@pytest.mark.parametrize("R,theta", [(5.0, 0.01), (12.0, 0.001), (25.0, 1e-5)])
def test_delzant_small_rotation_closed_form(R, theta):
    p = pol(R, 0.2)
    out = C.check_delzant(O2, R, rot2(theta), p, MU, DELTA)
    # right triangles at the midpoint: sinh(L/2) = sinh R sin(theta/2), cosh R = cosh r_m cosh(L/2)
    half = np.arcsinh(np.sinh(R) * np.sin(theta / 2))
    r_m = np.arccosh(np.cosh(R) / np.cosh(half))
    disp = 2 * np.arcsinh(np.sinh(r_m) * np.sin(theta / 2))
    assert MU + 9 * DELTA - out.slack == pytest.approx(disp, rel=1e-6, abs=1e-9)


def test_delzant_hypotheses_enforced():
    with pytest.raises(PreconditionError):
        C.check_delzant(O2, 5.0, boost(3.0, np.array([1.0, 0.0])), pol(5.0, 0.0), MU, DELTA)


def test_bary_approx_singleton():
    q = pol(7.0, 2.0)
    out = C.check_bary_approx(O2, 7.0, [q], q, MU, DELTA)
    assert out.slack == pytest.approx(9 * DELTA + 1.5 * MU, abs=1e-9)


def test_jump_identity():
    X = [pol(5.0, 0.0), pol(4.0, 2.0)]
    out = C.check_jump(O2, 5.0, X, X, np.eye(3), X[0], X[0], MU, DELTA)
    assert out.slack == pytest.approx(36 * DELTA + 6 * MU, abs=1e-9)


def test_bary_pair_equal_sets():
    X = [pol(6.0, 0.0), pol(3.0, 1.0), pol(2.0, 2.5)]
    out = C.check_bary_distance_pair(O2, 6.0, X, X, X[0], MU, DELTA)
    assert out.slacks["upper"] == pytest.approx(18 * DELTA + 3 * MU, abs=1e-9)


# -- properties ---------------------------------------------------------------

radii = st.floats(0.0, 30.0)
angles = st.floats(0.0, 2 * np.pi)


@given(radii, angles, radii, angles)
def test_delta_inequality_property(r1, t1, r2, t2):
    assert C.check_delta_inequality(O2, pol(r1, t1), pol(r2, t2), DELTA).passed()


@given(st.floats(1.0, 30.0), st.floats(0, 1), angles, st.floats(0, 1), angles)
def test_midpoint_in_ball_property(R, f1, t1, f2, t2):
    assert C.check_midpoint_in_ball(O2, R, pol(f1 * R, t1), pol(f2 * R, t2), DELTA).passed()


@given(st.lists(st.tuples(radii, angles), min_size=1, max_size=8))
def test_set_containment_property(pts):
    assert C.check_set_containment([pol(r, t) for r, t in pts], DELTA).passed()


@given(st.lists(st.tuples(radii, angles), min_size=1, max_size=5))
def test_barycenter_property(pts):
    X = [pol(r, t) for r, t in pts]
    assert C.check_barycenter_vs_midpoint(X, DELTA).passed()
    assert C.check_barycenter_distance_bounds(O2, X, DELTA).passed()


# -- sweeps -------------------------------------------------------------------

@pytest.mark.parametrize("lemma", C.LEMMA_IDS)
@pytest.mark.parametrize("dim", [2, 3])
def test_small_sweeps_pass(lemma, dim):
    res = C.run_sweep(lemma, dim, 300, seed=11, delta=DELTA, mu=MU)
    assert res.passed, res.failures[:3]


@pytest.mark.parametrize("lemma", C.LEMMA_IDS)
def test_sweep_matches_single_checks(lemma):
    res = C.run_sweep(lemma, 2, 12, seed=3, delta=DELTA, mu=MU, chunk=5)
    singles = []
    for i in range(12):
        cfg, _ = C.sample_config(lemma, 2, 3, i, DELTA, MU)
        singles.append(C._outcome(lemma, cfg, DELTA, MU).slack)
    assert res.min_slack == pytest.approx(min(singles), abs=1e-12)


def test_sweep_reproducible_and_parallel():
    a = C.run_sweep("jump", 3, 40, seed=5, chunk=10)
    b = C.run_sweep("jump", 3, 40, seed=5, chunk=10, jobs=2)
    assert a.to_json() == b.to_json()


def test_tree_constant_fails_in_the_plane():
    res = C.run_sweep("delta", 2, 500, seed=0, delta=0.0)
    assert res.failures and res.min_slack < 0


def test_unknown_lemma():
    with pytest.raises(PreconditionError):
        C.run_sweep("nope", 2, 1)
