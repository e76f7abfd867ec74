"""Numerical verification in the hyperboloid model of H^n."""
from .checks import (
    LEMMA_IDS,
    LEMMAS,
    CheckOutcome,
    SweepResult,
    check_annulus,
    check_bary_approx,
    check_bary_distance_pair,
    check_barycenter_distance_bounds,
    check_barycenter_vs_midpoint,
    check_delta_inequality,
    check_delzant,
    check_extremal_cancellation,
    check_fellow_traveling,
    check_jump,
    check_midpoint_in_ball,
    check_set_containment,
    run_sweep,
    sample_config,
)
from .constants import ConstantLedger, audit_constants
from .meb import min_enclosing_ball, verify_meb
from .model import (
    HypIsometry,
    HypPoint,
    boost,
    geodesic_point,
    hyp_distance,
    hyp_midpoint,
    origin,
    rotation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
