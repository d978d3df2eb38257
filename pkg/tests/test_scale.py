import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gfakit.basealg.expr import ExprSyntaxError
from gfakit.scale import (
    DECREASING, INCREASING, EgorovScale, LogScale, PowerScale, ScaleDomainError, ScaleError, ScaleFamily,
    check_asymptotic_family, check_scale_valid, custom_scale, egorov_family, exponential_asymptotic_family,
    family_direction, geometric_schedule, log_family, power_asymptotic_family, power_family,
)


def test_values_match_definitions():
    assert LogScale()(100) == pytest.approx(1 / math.log(100))
    assert PowerScale(2)(49) == pytest.approx(1 / 7)
    e = EgorovScale(3)
    assert [e(n) for n in range(1, 6)] == [1, 1, 1, 0, 0]
    assert custom_scale("1/log(log(n))", start=16)(10**4) == pytest.approx(1 / math.log(math.log(1e4)))


def test_domain_and_parameter_errors():
    with pytest.raises(ScaleDomainError):
        LogScale()(1)
    with pytest.raises(ScaleError, match="power scale parameter must be positive"):
        PowerScale(0)
    with pytest.raises(ScaleError):
        EgorovScale(1.5)
    with pytest.raises((ScaleError, ExprSyntaxError)):
        custom_scale("x/n")


@pytest.mark.parametrize("s", [LogScale(), PowerScale(1), PowerScale(3.5), custom_scale("1/log(log(n))", 16)])
def test_valid_scales_pass(s):
    assert check_scale_valid(s, 10**6).ok


def test_invalid_scales_are_caught():
    rep = check_scale_valid(custom_scale("1 + sin(n)^2"), 1024)
    assert not rep.ok and rep.violations
    assert not check_scale_valid(custom_scale("1/2"), 1024).tends_to_zero
    # Egorov scales are not positive from m on
    assert not check_scale_valid(EgorovScale(4), 1024).positive


def test_inverse_orders():
    assert LogScale().inverse_order() == (1.0, (0.0, 1.0, 0.0))
    K, order = PowerScale(4).inverse_order()
    assert K == 1.0 and order == (0.25, 0.0, 0.0)
    assert custom_scale("1/n").inverse_order() is None


@given(st.integers(2, 10**9), st.integers(2, 60))
def test_geometric_schedule_shape(nmax, points):
    ns = geometric_schedule(2, nmax, points)
    assert ns[0] >= 2 and ns[-1] == nmax
    assert np.all(np.diff(ns) > 0)


def test_family_directions():
    assert family_direction(power_family()) == INCREASING
    assert family_direction(egorov_family()) == INCREASING
    assert family_direction(log_family()) == DECREASING
    fam = ScaleFamily(lambda m: PowerScale(7 - m if m % 2 else m), tuple(range(1, 6)))
    assert family_direction(fam) not in (INCREASING, DECREASING)


def test_asymptotic_family_axioms():
    rep = check_asymptotic_family(power_asymptotic_family(), range(1, 5))
    assert rep.ok
    assert rep.witnesses[1] is not None
    assert check_asymptotic_family(exponential_asymptotic_family(), range(1, 4)).ok


def test_log_family_member_values():
    r2 = log_family()(2)
    assert r2(1000) == pytest.approx(1 / (2 * math.log(1000)))
