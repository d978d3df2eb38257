import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfakit.basealg.expr import parse_expr
from gfakit.basealg.seminorm import AbsoluteValue, SupDerivatives
from gfakit.scale import EgorovScale, LogScale, PowerScale, custom_scale
from gfakit.seqspace import (
    CLOSED_FORM, CSV_HEADER, DIVERGENT, EQUAL, INCONCLUSIVE, INDUCTIVE, MODERATE, NEGLIGIBLE,
    NOT_EQUAL, TAIL_FIT, MonoSum, Seq, SeqError, check_certificate, classify, closed_form_exponent,
    distance, equal_in_quotient, piecewise, tail_fit, ultranorm,
)
from gfakit.seqspace.certificate import GrowthCertificate

ABS = AbsoluteValue()
LOG = LogScale()


@pytest.mark.parametrize("k", range(0, 6))
def test_power_sequences_closed_form(k):
    est = ultranorm(Seq.monomial(1.0, a=k), ABS, 1, 0, LOG)
    assert est.method == CLOSED_FORM
    assert est.value == pytest.approx(math.e**k, rel=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.5, -1.0])
def test_tail_fit_recovers_power_exponent(a):
    est = tail_fit(Seq.monomial(2.0, a=a), ABS, 1, 0, LOG)
    assert est.confident and est.method == TAIL_FIT
    assert est.exponent == pytest.approx(a, abs=1e-2)


def test_closed_form_rules():
    c = GrowthCertificate.of(C=2, a=3)
    assert closed_form_exponent(c, LOG) == pytest.approx(3.0)
    # under r_n = 1/n the polynomial part is invisible
    assert closed_form_exponent(c, PowerScale(1)) == 0.0
    assert closed_form_exponent(GrowthCertificate.of(s=2, t=1), PowerScale(1)) == pytest.approx(2.0)
    assert closed_form_exponent(GrowthCertificate.of(s=1, t=2), PowerScale(1)) == math.inf
    assert closed_form_exponent(GrowthCertificate.zero_sequence(), LOG) == -math.inf
    assert closed_form_exponent(None, LOG) is None


def test_ultranorm_of_zero_is_zero_only():
    assert ultranorm(Seq.constant(0), ABS, 1, 0, LOG).value == 0.0
    tiny = Seq.monomial(1e-300, a=-40)
    v = ultranorm(tiny, ABS, 1, 0, LOG).value
    assert 0 < v < 1e-17


def test_tail_fit_detects_divergence_and_decay():
    assert tail_fit(Seq.monomial(1.0, s=1, t=0.5), ABS, 1, 0, LOG).value == math.inf
    assert tail_fit(Seq.monomial(1.0, s=-1, t=0.5), ABS, 1, 0, LOG).value == 0.0
    assert tail_fit(Seq.scalar("exp(log(n)^2)"), ABS, 1, 0, LOG).value == math.inf


def test_unsettled_tail_is_not_confident():
    est = tail_fit(Seq.scalar("n^(2 + sin(log(log(n))*40))"), ABS, 1, 0, LOG)
    assert not est.confident or est.residual > 0


def test_egorov_scale_detects_eventual_zeros():
    r = EgorovScale(5)
    assert ultranorm(Seq.from_values([1, 2, 3]), ABS, 1, 0, r, method="tail", nmax=1000).value == 0.0
    assert ultranorm(Seq.monomial(1e-9, a=-3), ABS, 1, 0, r, method="tail", nmax=1000).value == 1.0


def test_classification_verdicts():
    assert classify(Seq.monomial(1, a=4), ABS, LOG).verdict == MODERATE
    assert classify(Seq.monomial(1, s=1, t=1), ABS, LOG).verdict == DIVERGENT
    assert classify(Seq.monomial(1, s=-1, t=1), ABS, LOG).verdict == NEGLIGIBLE
    assert classify(Seq.scalar("n^(2 + sin(log(log(n))*40))"), ABS, LOG, nmax=10**4).verdict in (
        MODERATE, INCONCLUSIVE)
    with pytest.raises(ValueError):
        classify(Seq.monomial(1), ABS, LOG, mode="sideways")


def test_classify_function_sequence_grid():
    f = Seq.function("exp(-x^2) * n")
    cls = classify(f, SupDerivatives(), LOG, mu_max=2, nu_max=1, nmax=10**4)
    assert cls.verdict == MODERATE
    assert {(w.mu, w.nu) for w in cls.witnesses} == {(1, 0), (1, 1), (2, 0), (2, 1)}
    assert cls.estimate(1, 0).value == pytest.approx(math.e, rel=1e-2)
    with pytest.raises(TypeError):
        classify(f, ABS, LOG)


def test_inductive_mode_picks_witnesses():
    f = Seq.function("exp(-x^2) * n")
    cls = classify(f, SupDerivatives(), LOG, mode=INDUCTIVE, mu_max=2, nu_max=1, nmax=10**4)
    assert cls.verdict == MODERATE and set(cls.chosen) == {1, 2}


def test_quotient_equality():
    f = Seq.monomial(1, a=2)
    k = Seq.monomial(1, s=-1, t=0.5)
    assert equal_in_quotient(f + k, f, ABS, LOG) == EQUAL
    assert equal_in_quotient(f, Seq.monomial(1, a=1), ABS, LOG) == NOT_EQUAL
    assert equal_in_quotient(Seq.monomial(1, s=1, t=1), f, ABS, LOG) == INCONCLUSIVE


@given(st.integers(-5, 5), st.integers(-5, 5))
@settings(max_examples=40)
def test_discrete_metric_on_constants(a, b):
    d = distance(Seq.constant(a), Seq.constant(b), ABS, 1, 0, LOG)
    assert d.value == (0.0 if a == b else 1.0)


def test_csv_rows():
    text = classify(Seq.monomial(1, a=1), ABS, LOG).to_csv()
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1].startswith("label,mode,mu,nu")
    assert lines[2].endswith("Moderate")


def test_seq_arithmetic_and_errors():
    f = Seq.monomial(2, a=1) + 3
    assert f.element(10) == pytest.approx(23)
    assert (f * f).element(2) == pytest.approx(49)
    assert (2 * f - f).element(4) == pytest.approx(11)
    with pytest.raises(SeqError):
        Seq.scalar(parse_expr("x + n", ("x", "n")))
    with pytest.raises(SeqError):
        f + "x"


def test_piecewise_and_values():
    s = piecewise([(1, Seq.constant(1)), (5, Seq.constant(7))])
    assert [s.element(n) for n in (1, 4, 5, 100)] == [1, 1, 7, 7]
    v = Seq.from_values([4, 5])
    assert [v.element(n) for n in (1, 2, 3)] == [4, 5, 0]


def test_certificate_spot_check():
    ok = Seq.certified("n^2 + n", C=1, a=2)
    assert check_certificate(ok, ABS)
    lie = Seq.certified("n^3", C=1, a=2)
    assert not check_certificate(lie, ABS)


def test_stable_log_through_cancellation():
    # (n+1)^2 - n^2 - 2n = 1 cancels catastrophically in floats at large n
    s = Seq.scalar("(n + 1)^2 - n^2 - 2*n")
    assert s.log_abs(10**12) == pytest.approx(0.0, abs=1e-9)


def test_monosum_sequence_certificate_matches_mono():
    m = MonoSum.monomial(3, a=2) + MonoSum.monomial(-1, a=1)
    s = Seq.from_mono(m)
    assert s.certificate.a == 2
    ns = np.array([10, 100, 1000])
    assert np.allclose([s.log_abs(int(n)) for n in ns], np.log(3 * ns**2 - ns))


def test_bounded_scale_loses_discreteness():
    # r_n = 1/2 does not tend to zero: constants keep their size and the
    # metric on them is no longer discrete
    half = custom_scale("1/2")
    assert ultranorm(Seq.constant(4), ABS, 1, 0, half).value == pytest.approx(2.0, rel=1e-12)
    d = distance(Seq.constant(1), Seq.constant(1.25), ABS, 1, 0, half)
    assert d.confident and d.value == pytest.approx(0.5)
    assert ultranorm(Seq.scalar("1 + 1/n"), ABS, 1, 0, half).value == pytest.approx(1.0, abs=1e-5)
    assert not ultranorm(Seq.scalar("n"), ABS, 1, 0, half).confident
