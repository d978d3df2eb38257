import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gfakit.basealg.expr import parse_expr
from gfakit.basealg.seminorm import (
    AbsoluteValue, ExprFunction, SobolevSupDerivatives, SupDerivatives, check_seminorm_monotone, seminorm_eval,
)


def test_absolute_value():
    p = AbsoluteValue()
    assert seminorm_eval(p, 3, 2, -2.5) == 2.5
    assert seminorm_eval(p, 1, 0, 3 + 4j) == 5.0
    with pytest.raises(TypeError):
        seminorm_eval(p, 1, 0, parse_expr("x"))


def test_sup_of_gaussian_derivatives():
    p = SupDerivatives()
    g = parse_expr("exp(-x^2)")
    assert seminorm_eval(p, 1, 0, g) == pytest.approx(1.0)
    # max over alpha <= nu: the value itself dominates the first derivative sqrt(2/e)
    assert seminorm_eval(p, 1, 1, g) == pytest.approx(1.0)
    # 3x e^{-x^2} peaks at 1/sqrt 2; its derivative is largest at 0 with value 3
    h = parse_expr("3*exp(-x^2)*x")
    assert seminorm_eval(p, 1, 0, h) == pytest.approx(3 * math.exp(-0.5) / math.sqrt(2), rel=1e-9)
    assert seminorm_eval(p, 1, 1, h) == pytest.approx(3.0, rel=1e-9)
    assert seminorm_eval(p, 1, 0, parse_expr("x^3")) == pytest.approx(1.0)


def test_narrow_features_need_focus_windows():
    narrow = ExprFunction(parse_expr("exp(-(1000*x)^2)"), (), None, ((0.0, 0.01),))
    assert seminorm_eval(SupDerivatives(), 1, 0, narrow) == pytest.approx(1.0)


def test_sobolev_ignores_indices():
    p = SobolevSupDerivatives(2, interval=(-1.0, 1.0))
    f = parse_expr("x^3")
    assert seminorm_eval(p, 1, 0, f) == seminorm_eval(p, 5, 7, f) == pytest.approx(6.0)


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))
def test_monotone_in_both_indices(mu, nu, dmu, dnu):
    f = parse_expr("sin(3*x)*exp(x/2)")
    assert check_seminorm_monotone(SupDerivatives(), f, [((mu, nu), (mu + dmu, nu + dnu))])


def test_grid_maximum_is_attained_lower_bound():
    f = parse_expr("cos(7*x) + x")
    v = seminorm_eval(SupDerivatives(density=64), 2, 0, f)
    xs = np.linspace(-2, 2, 200001)
    grid = np.max(np.abs(np.cos(7 * xs) + xs))
    # the dense grid is itself a lower bound; the polish may only beat it slightly
    assert grid - 1e-12 <= v <= grid + 1e-8
    x_star = xs[np.argmax(np.abs(np.cos(7 * xs) + xs))]
    assert v <= abs(math.cos(7 * x_star) + x_star) + 1e-8
