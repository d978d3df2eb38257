import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from gfakit.basealg.expr import (
    DomainError, ExprSyntaxError, diff, evaluate, evaluate_mp, free_symbols, parse_expr, substitute, to_source,
)

from _trees import trees

XS = np.linspace(-1.5, 1.5, 7)


def sympy_of(e):
    return sp.sympify(to_source(e).replace("^", "**"), locals={"x": sp.Symbol("x"), "n": sp.Symbol("n")})


@given(trees(with_n=True))
def test_print_parse_roundtrip(e):
    assert parse_expr(to_source(e)) == e


@given(trees())
def test_evaluate_matches_sympy(e):
    f = sp.lambdify(sp.Symbol("x"), sympy_of(e), "mpmath")
    for x in XS:
        want = float(f(x))
        got = float(evaluate(e, x=x))
        assert got == pytest.approx(want, rel=1e-9, abs=1e-11)


@given(trees())
def test_symbolic_diff_matches_sympy(e):
    xs = sp.Symbol("x")
    want = sp.lambdify(xs, sp.diff(sympy_of(e), xs), "mpmath")
    d = diff(e, "x")
    for x in XS:
        assert float(evaluate(d, x=x)) == pytest.approx(float(want(x)), rel=1e-8, abs=1e-10)


def test_precedence_and_power_associativity():
    assert evaluate(parse_expr("2^3^2")) == 2.0 ** 9
    assert evaluate(parse_expr("-2^2")) == -4.0
    assert evaluate(parse_expr("1 - 2 - 3")) == -4.0
    assert evaluate(parse_expr("2**3")) == 8.0


def test_constants_and_functions():
    assert evaluate(parse_expr("exp(1) - e")) == pytest.approx(0.0, abs=1e-15)
    assert evaluate(parse_expr("cos(pi)")) == pytest.approx(-1.0)
    assert float(evaluate(parse_expr("n*exp(-(n*x)^2)/sqrt(pi)"), x=0.0, n=3.0)) == pytest.approx(3 / math.sqrt(math.pi))


@pytest.mark.parametrize("text,pos", [("1 + * 2", 4), ("sin(x", 5), ("x $ 2", 2), ("foo(x)", 0)])
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(text)
    assert info.value.pos == pos


def test_unknown_symbol_is_rejected():
    with pytest.raises(ExprSyntaxError):
        parse_expr("x + y", ("x",))


def test_domain_errors():
    with pytest.raises(DomainError):
        evaluate_mp(parse_expr("log(x)"), x=-1)
    with pytest.raises(DomainError):
        evaluate_mp(parse_expr("1/x"), x=0)


def test_substitute_and_free_symbols():
    e = parse_expr("n*exp(-(n*x)^2)")
    assert free_symbols(e) == {"n", "x"}
    e2 = substitute(e, {"n": 2.0})
    assert free_symbols(e2) == {"x"}
    assert float(evaluate(e2, x=0.5)) == pytest.approx(2 * math.exp(-1))


@given(st.floats(-3, 3), st.floats(0.1, 5))
def test_mp_and_float_evaluation_agree(x, n):
    e = parse_expr("n*exp(-(n*x)^2) + log(1 + x^2)*sin(n)")
    assert float(evaluate_mp(e, x=x, n=n)) == pytest.approx(float(evaluate(e, x=x, n=n)), rel=1e-12, abs=1e-300)
