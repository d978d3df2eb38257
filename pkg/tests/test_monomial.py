import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gfakit.basealg.expr import parse_expr
from gfakit.seqspace import GrowthCertificate, MonoSum, add_certificates, mono_from_expr

halves = st.integers(-6, 6).map(lambda k: k / 2)
coefs = st.floats(0.25, 4.0).flatmap(lambda c: st.sampled_from([c, -c]))


@st.composite
def monosums(draw, max_terms=3):
    out = MonoSum()
    for _ in range(draw(st.integers(1, max_terms))):
        out = out + MonoSum.monomial(draw(coefs), a=draw(halves), b=float(draw(st.integers(0, 2))))
    return out


def test_certificate_of_and_views():
    c = GrowthCertificate.of(C=3.0, a=2.0, b=1.0)
    assert c.C == pytest.approx(3.0) and c.a == 2.0 and c.b == 1.0
    assert c.log_value(100) == pytest.approx(math.log(3 * 100**2 * math.log(100)))
    assert GrowthCertificate.of(C=0).zero
    with pytest.raises(ValueError):
        GrowthCertificate.of(C=-1)


def test_certificate_compare_and_product():
    n2 = GrowthCertificate.of(a=2)
    n3 = GrowthCertificate.of(a=3)
    e = GrowthCertificate.of(s=1, t=0.5)
    assert n3.compare(n2) == 1 and n2.compare(n3) == -1
    assert e.compare(n3) == 1
    assert GrowthCertificate.of(C=5, a=2).compare(n2) == 0
    assert (n2 * n3).compare(GrowthCertificate.of(a=5)) == 0
    assert GrowthCertificate.zero_sequence().compare(n2) == -1


def test_add_certificates_cancellation_is_refused():
    c = GrowthCertificate.of(C=2, a=1)
    assert add_certificates(c, c, 1, -1) == (None, None)
    s, sign = add_certificates(c, GrowthCertificate.of(C=1, a=1), 1, -1)
    assert sign == 1 and s.C == pytest.approx(1.0)
    s, sign = add_certificates(c, c, 1, 1)
    assert s.C == pytest.approx(4.0)


@given(monosums(), monosums(), st.integers(3, 10**6))
def test_monosum_ring_ops_match_numeric(f, g, n):
    mpmath.mp.dps = 40
    for combo, ref in ((f + g, f.mp_value(n) + g.mp_value(n)), (f * g, f.mp_value(n) * g.mp_value(n))):
        got = combo.mp_value(n)
        scale = abs(f.mp_value(n)) + abs(g.mp_value(n)) + abs(f.mp_value(n) * g.mp_value(n)) + 1
        assert abs(got - ref) <= 1e-12 * scale


@given(monosums())
def test_exact_cancellation(f):
    assert (f - f).is_zero
    assert (f + (-f)).is_zero


@given(monosums(), monosums(), monosums())
def test_product_associates_exactly(f, g, h):
    assert ((f * g) * h - f * (g * h)).is_zero


def test_leading_term_certificate():
    m = MonoSum.monomial(-3.0, a=2) + MonoSum.monomial(5.0, a=1)
    cert = m.certificate()
    assert cert.a == 2 and cert.C == pytest.approx(3.0)
    assert m.sign() == -1
    assert MonoSum().certificate().zero


@pytest.mark.parametrize("src, n", [
    ("n^2 + 3*n", 50), ("exp(-n)*n^3", 7), ("log(n)^2/n", 1000), ("sqrt(n)*exp(sqrt(n))", 30),
    ("exp(2*log(n))", 11), ("(n+1)^2", 9), ("1/n^2 - 2", 4),
])
def test_mono_from_expr_values(src, n):
    m = mono_from_expr(parse_expr(src, ("n",)))
    assert m is not None
    ref = float(mpmath.mpf(eval(src.replace("^", "**"), {"n": mpmath.mpf(n), "exp": mpmath.exp,
                                                          "log": mpmath.log, "sqrt": mpmath.sqrt})))
    assert m.value(n) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("src", ["sin(n)", "log(n + 1)", "1/(n + 1)", "exp(n^2)^0.5 + cos(1/n)", "2^n"])
def test_mono_from_expr_rejects(src):
    assert mono_from_expr(parse_expr(src, ("n",))) is None
