from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st
import pytest

from gring.errors import ClaimViolation, PreconditionError
from gring.hyperbolic.constants import (
    audit_constants, displacement_for_log_genus, symbolic_chain,
)


def test_delta_five():
    led = audit_constants(5)
    assert led.mu == 185
    assert led.threshold == 1475
    assert led.satisfied and led.displacement == 2000
    assert led.log_genus_bound == 10**6
    assert (led.warmup, led.midpoint, led.extremality) == (170, 175, 185)
    assert led.case2_mu_min == Fraction(265, 2)


def test_delta_zero_is_degenerate():
    led = audit_constants(0)
    assert led.mu == 0 and led.threshold == 0
    assert all(v == 0 for v in led.conditions.values())


def test_symbolic_ratios():
    led = audit_constants(1)
    assert led.mu == 37 and led.threshold == 295
    assert led.case1_radius == Fraction(37, 2) + 129


def test_log_genus_round_trip():
    assert displacement_for_log_genus(10**6) == 2000
    assert displacement_for_log_genus(10**6 - 1) < 2000


def test_negative_delta():
    with pytest.raises(PreconditionError):
        audit_constants(-1)


def test_too_small_mu_is_caught():
    with pytest.raises(ClaimViolation):
        audit_constants(5, mu_over_delta=20)


def test_chain_forms():
    sym = symbolic_chain()
    assert sym["warmup"].coef == {"delta": 34}
    assert sym["case1_threshold"].coef == {"mu": 1, "delta": 258}


@given(st.fractions(min_value=Fraction(1, 100), max_value=100))
def test_scaling(delta):
    led = audit_constants(delta)
    assert led.threshold == 295 * delta and led.mu == 37 * delta
    assert max(led.conditions.values()) == led.threshold
    assert led.satisfied == (295 * delta <= 2000)
