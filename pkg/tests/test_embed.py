import math

import numpy as np
import pytest
from scipy.integrate import quad

from gfakit.basealg.seminorm import SupDerivatives
from gfakit.scale import LogScale, custom_scale
from gfakit.seqspace import NOT_EQUAL, Seq, equal_in_quotient, seq_derivative, tail_fit, zero_seq
from gfakit.embed import (
    Mollifier, adaptive_simpson, bump, check_scale_admissible, check_unbounded, embed_by_convolution,
    embed_constant, gaussian, make_delta, mollifier, replay_unboundedness, weak_convergence_errors,
)
from gfakit.basealg.expr import parse_expr

SUP = SupDerivatives()
LOG = LogScale()


@pytest.mark.parametrize("m", [gaussian(), bump()])
def test_mollifiers_are_normalised(m):
    assert m.normalization_error() < 1e-10


def test_unnormalised_mollifier_is_rejected():
    with pytest.raises(ValueError, match="not normalised"):
        make_delta(Mollifier("half", parse_expr("exp(-x^2)/2/sqrt(pi)"), 12.0))
    with pytest.raises(ValueError):
        mollifier("boxcar")


@pytest.mark.parametrize("m", [gaussian(), bump()])
@pytest.mark.parametrize("nu, expected", [(0, 1.0), (1, 2.0), (2, 3.0)])
def test_delta_exponents(m, nu, expected):
    d = make_delta(m)
    est = tail_fit(d, SUP, 1, nu, LOG, nmax=10**5)
    assert est.confident
    assert est.exponent == pytest.approx(expected, abs=1e-2)


def test_delta_sup_matches_profile_peak():
    d = make_delta()
    assert SUP(d.element(100), 1, 0) == pytest.approx(100 / math.sqrt(math.pi), rel=1e-9)


def test_delta_is_unbounded_and_replay_contradicts():
    rep = check_unbounded(make_delta(), budget=10**5)
    assert rep and rep.strict_everywhere
    replay = replay_unboundedness(make_delta())
    assert replay.bounded_on_samples and replay.contradiction
    assert replay.mass == pytest.approx(0.5)


def test_weak_limit_is_point_evaluation():
    errs = weak_convergence_errors(make_delta(), "cos(x) + x^2")
    vals = list(errs.values())
    assert vals[-1] < 1e-5 and vals[0] > vals[-1]


def test_admissibility_log_versus_double_log():
    d = make_delta()
    rep = check_scale_admissible(d, SUP, LOG, mu_max=1, nu_max=1, nmax=10**5)
    assert rep.admissible and rep.nonzero_witness == (1, 0)
    assert rep.witness_value == pytest.approx(math.e, rel=1e-2)
    slow = custom_scale("1/log(log(n))", start=16)
    assert not check_scale_admissible(d, SUP, slow, mu_max=1, nu_max=1, nmax=10**5).admissible


def test_delta_square_and_nonzero_class():
    d = make_delta()
    est = tail_fit(d * d, SUP, 1, 0, LOG, nmax=10**5)
    assert est.exponent == pytest.approx(2.0, abs=1e-2)
    verdict = equal_in_quotient(d * d, zero_seq("function"), SUP, LOG, mu_max=1, nu_max=0, nmax=10**5)
    assert verdict == NOT_EQUAL


def test_derivative_shifts_order():
    dd = seq_derivative(make_delta())
    assert tail_fit(dd, SUP, 1, 0, LOG, nmax=10**5).exponent == pytest.approx(2.0, abs=1e-2)


def test_constant_embedding():
    s = embed_constant("sin(x)")
    assert tail_fit(s, SUP, 1, 1, LOG, nmax=10**4).exponent == pytest.approx(0.0, abs=1e-6)
    assert embed_constant(2.5).element(7) == 2.5
    with pytest.raises(ValueError):
        embed_constant(parse_expr("x*n", ("x", "n")))


def test_convolution_of_smooth_function_converges():
    s = embed_by_convolution("sin(x)")
    f = s.element(1000)
    xs = np.array([0.0, 0.3, 1.0])
    # sin * gaussian_n = exp(-1/(4 n^2)) sin
    expected = np.exp(-1 / (4e6)) * np.sin(xs)
    assert np.allclose(f.jets(xs, 0)[0], expected, atol=1e-9)


def test_heaviside_convolution():
    h = embed_by_convolution("heaviside").element(10)
    assert float(h.jets(np.array([0.0]), 0)[0][0]) == pytest.approx(0.5, abs=1e-9)
    ref = 0.5 * math.erfc(-10 * 0.05)
    assert float(h.jets(np.array([0.05]), 0)[0][0]) == pytest.approx(ref, abs=1e-9)


def test_adaptive_simpson_against_quad():
    g = lambda t: math.exp(-t * t) * math.cos(3 * t)  # noqa: E731
    got = adaptive_simpson(g, -2.0, 1.5)
    got = got[0] if isinstance(got, tuple) else got
    assert got == pytest.approx(quad(g, -2.0, 1.5, epsabs=1e-13)[0], abs=1e-9)


def test_unbounded_rejects_scalars():
    with pytest.raises(TypeError):
        check_unbounded(Seq.constant(1))
