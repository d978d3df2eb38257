"""Seminorm families ``p^mu_nu`` on the base algebra.

Three kinds are provided:

* ``AbsoluteValue``: ``|z|`` on real or complex scalars (indices ignored).
* ``SupDerivatives``: ``max_{alpha <= nu} sup_{|x| <= mu} |f^(alpha)(x)|``
  on smooth functions of one variable.
* ``SobolevSupDerivatives``: the same with ``nu = s`` fixed and the sup
  taken over a fixed bounded interval (indices ignored).

Suprema are maxima over a uniform grid of ``ceil(2*mu*G) + 1`` points,
optionally augmented by the element's focus windows and polished by a
bounded Brent search around the best grid point.  Every value reported is
attained at some evaluated point, so the result is a lower bound of the
true supremum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Number

import numpy as np
from scipy.optimize import minimize_scalar

from .expr import Expr, free_symbols
from .jet import MAX_ORDER, CapabilityError, jet_eval

ABSOLUTE = "abs"
SUP = "sup"
SOBOLEV = "sobolev"

FOCUS_POINTS = 1024


class FunctionElement:
    """A smooth function of ``x`` that can report its derivatives on a grid."""

    focus: tuple = ()
    support: tuple | None = None
    max_order: int = MAX_ORDER
    polish: bool = True  # whether a Brent search may refine the grid maximum

    def jets(self, xs: np.ndarray, order: int) -> np.ndarray:
        """Array of shape ``(order + 1, len(xs))`` holding ``f^(k)(xs)``."""
        raise NotImplementedError

    def __call__(self, x):
        return self.jets(np.atleast_1d(np.asarray(x, float)), 0)[0]


@dataclass(frozen=True)
class ExprFunction(FunctionElement):
    """An expression in ``x`` with every other symbol bound through ``env``.

    ``support`` (``(lo, hi)``) makes the function vanish outside the interval.
    ``focus`` lists ``(center, halfwidth)`` windows containing features narrower
    than the uniform grid spacing.
    """

    expr: Expr
    env: tuple = ()
    support: tuple | None = None
    focus: tuple = ()

    def jets(self, xs, order):
        xs = np.asarray(xs, dtype=float)
        if order > self.max_order:
            raise CapabilityError(f"jet order {order} exceeds the maximum {self.max_order}")
        env = dict(self.env)
        if self.support is None:
            return jet_eval(self.expr, xs, order=order, **env).values
        lo, hi = self.support
        out = np.zeros((order + 1,) + xs.shape)
        inside = (xs >= lo) & (xs <= hi)
        if np.any(inside):
            out[:, inside] = jet_eval(self.expr, xs[inside], order=order, **env).values
        return out


def as_function(f) -> FunctionElement:
    if isinstance(f, FunctionElement):
        return f
    if isinstance(f, Expr):
        extra = free_symbols(f) - {"x"}
        if extra:
            raise ValueError(f"unbound symbols {sorted(extra)} in function element")
        return ExprFunction(f)
    if isinstance(f, Number):
        from .expr import Const

        if isinstance(f, complex):
            raise TypeError("smooth functions are real-valued")
        return ExprFunction(Const(float(f)))
    raise TypeError(f"not a function element: {type(f).__name__}")


@dataclass(frozen=True)
class SeminormFamily:
    kind: str = SUP
    density: int = 256
    order: int = 0
    interval: tuple = (-1.0, 1.0)
    refine: bool = True

    @property
    def indexed(self) -> bool:
        """Whether ``(mu, nu)`` matter for this family."""
        return self.kind == SUP

    def __call__(self, f, mu: int = 1, nu: int = 0) -> float:
        return seminorm_eval(self, mu, nu, f)

    def to_source(self) -> str:
        if self.kind == ABSOLUTE:
            return "abs"
        if self.kind == SUP:
            return f"sup density {self.density}"
        lo, hi = self.interval
        return f"sobolev {self.order} on {lo!r} {hi!r} density {self.density}"


def AbsoluteValue() -> SeminormFamily:
    return SeminormFamily(ABSOLUTE)


def SupDerivatives(density: int = 256, refine: bool = True) -> SeminormFamily:
    return SeminormFamily(SUP, density=density, refine=refine)


def SobolevSupDerivatives(s: int, interval=(-1.0, 1.0), density: int = 256) -> SeminormFamily:
    return SeminormFamily(SOBOLEV, density=density, order=s, interval=tuple(interval))


def _grid(lo: float, hi: float, density: int, focus) -> np.ndarray:
    count = math.ceil((hi - lo) * density) + 1
    pts = [np.linspace(lo, hi, count)]
    for center, half in focus:
        a, b = max(lo, center - half), min(hi, center + half)
        if a < b:
            pts.append(np.linspace(a, b, FOCUS_POINTS + 1))
    return np.unique(np.concatenate(pts)) if len(pts) > 1 else pts[0]


def _polish(f: FunctionElement, xs, vals, alpha) -> float:
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    if hi <= lo:
        return best

    def neg(x):
        return -abs(float(f.jets(np.array([x]), alpha)[alpha][0]))

    res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                          options={"xatol": max(1e-14, 1e-10 * (hi - lo))})
    return max(best, -float(res.fun))


def sup_derivatives(f, lo: float, hi: float, nu: int, density: int, refine: bool = True) -> float:
    f = as_function(f)
    xs = _grid(lo, hi, density, f.focus)
    vals = np.abs(f.jets(xs, nu))
    if not np.all(np.isfinite(vals)):
        return math.inf
    per_alpha = vals.max(axis=1)
    if refine and f.polish:
        per_alpha = [max(per_alpha[a], _polish(f, xs, vals[a], a)) for a in range(nu + 1)]
    return float(max(per_alpha))


def seminorm_eval(p: SeminormFamily, mu: int, nu: int, f) -> float:
    """``p^mu_nu(f)``.

    For ``AbsoluteValue`` ``f`` is a scalar; for the sup kinds it is a
    function element, an expression in ``x`` alone, or a real constant.
    """
    if p.kind == ABSOLUTE:
        if isinstance(f, (FunctionElement, Expr)):
            raise TypeError("absolute value seminorm applies to scalars")
        return float(abs(f))
    if p.kind == SUP:
        if mu < 0 or nu < 0:
            raise ValueError("seminorm indices must be non-negative")
        return sup_derivatives(f, -float(mu), float(mu), nu, p.density, p.refine)
    if p.kind == SOBOLEV:
        lo, hi = p.interval
        return sup_derivatives(f, lo, hi, p.order, p.density, p.refine)
    raise ValueError(f"unknown seminorm kind {p.kind!r}")


def check_seminorm_monotone(p: SeminormFamily, f, pairs, rtol: float = 1e-9) -> bool:
    """True iff ``p^mu_nu(f) <= p^mu'_nu'(f)`` for every supplied ``((mu, nu), (mu', nu'))``."""
    for (mu, nu), (mu2, nu2) in pairs:
        if mu > mu2 or nu > nu2:
            raise ValueError(f"pair {(mu, nu)} <= {(mu2, nu2)} is not ordered componentwise")
        small = seminorm_eval(p, mu, nu, f)
        big = seminorm_eval(p, mu2, nu2, f)
        if small > big * (1 + rtol) + 1e-300:
            return False
    return True
