"""Truncated Taylor arithmetic.

A :class:`Jet` of order ``nu`` stores the normalised Taylor coefficients
``c_k = f^(k)(x) / k!`` for ``k = 0..nu``.  Coefficient arrays have shape
``(nu + 1, *points)`` so a single jet carries one expansion per evaluation
point.  Arithmetic follows the standard recurrences (Cauchy product,
division by back substitution, the ODE recurrences for exp/log/sin/cos and
the power rule).
"""
from __future__ import annotations

import math

import numpy as np

from .expr import DomainError, EvaluationError, Expr, walk

MAX_ORDER = 16


class CapabilityError(EvaluationError):
    """Requested derivative order exceeds the configured maximum."""


class Jet:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, x, order: int) -> "Jet":
        x = np.asarray(x, dtype=float)
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order: int, shape=()) -> "Jet":
        c = np.zeros((order + 1,) + tuple(shape))
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def values(self) -> np.ndarray:
        """Derivatives ``(f, f', ..., f^(nu))`` along the first axis."""
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.coeffs * fact.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order, self.coeffs.shape[1:])

    def __repr__(self):
        return f"Jet(order={self.order}, values={self.values.tolist()})"

    def __add__(self, other):
        return Jet(self.coeffs + self._lift(other).coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.coeffs - self._lift(other).coeffs)

    def __rsub__(self, other):
        return Jet(self._lift(other).coeffs - self.coeffs)

    def __neg__(self):
        return Jet(-self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * other)
        a, b = np.broadcast_arrays(self.coeffs, other.coeffs)
        out = np.zeros_like(a)
        for k in range(a.shape[0]):
            out[k] = np.sum(a[: k + 1] * b[k::-1], axis=0)
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, self._lift(other))

    def __rtruediv__(self, other):
        return div(self._lift(other), self)

    def __pow__(self, k):
        return ipow(self, k)


def div(a: Jet, b: Jet) -> Jet:
    if np.any(b.coeffs[0] == 0):
        raise DomainError("division by zero")
    a_c, b_c = np.broadcast_arrays(a.coeffs, b.coeffs)
    q = np.zeros_like(a_c)
    for k in range(a_c.shape[0]):
        acc = a_c[k] - np.sum(b_c[1 : k + 1] * q[k - 1 :: -1][:k], axis=0) if k else a_c[0]
        q[k] = acc / b_c[0]
    return Jet(q)


def ipow(a: Jet, k: int) -> Jet:
    if k < 0:
        return div(Jet.constant(1.0, a.order, a.coeffs.shape[1:]), ipow(a, -k))
    result = Jet.constant(1.0, a.order, a.coeffs.shape[1:])
    base = a
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def rpow(a: Jet, p: float) -> Jet:
    """``a**p`` for a real constant ``p``; requires ``a > 0``."""
    c = a.coeffs
    if np.any(c[0] <= 0):
        raise DomainError("non-positive base with non-integer exponent")
    y = np.zeros_like(c)
    y[0] = c[0] ** p
    for k in range(1, c.shape[0]):
        i = np.arange(1, k + 1).reshape((-1,) + (1,) * (c.ndim - 1))
        y[k] = np.sum((p * i - (k - i)) * c[1 : k + 1] * y[k - 1 :: -1][:k], axis=0) / (k * c[0])
    return Jet(y)


def jexp(a: Jet) -> Jet:
    c = a.coeffs
    e = np.zeros_like(c)
    with np.errstate(over="ignore"):
        e[0] = np.exp(c[0])
    for k in range(1, c.shape[0]):
        i = np.arange(1, k + 1).reshape((-1,) + (1,) * (c.ndim - 1))
        e[k] = np.sum(i * c[1 : k + 1] * e[k - 1 :: -1][:k], axis=0) / k
    return Jet(e)


def jlog(a: Jet) -> Jet:
    c = a.coeffs
    if np.any(c[0] <= 0):
        raise DomainError("logarithm of a non-positive value")
    out = np.zeros_like(c)
    out[0] = np.log(c[0])
    for k in range(1, c.shape[0]):
        acc = c[k].copy()
        for i in range(1, k):
            acc = acc - i * out[i] * c[k - i] / k
        out[k] = acc / c[0]
    return Jet(out)


def jsincos(a: Jet):
    c = a.coeffs
    s = np.zeros_like(c)
    co = np.zeros_like(c)
    s[0] = np.sin(c[0])
    co[0] = np.cos(c[0])
    for k in range(1, c.shape[0]):
        i = np.arange(1, k + 1).reshape((-1,) + (1,) * (c.ndim - 1))
        w = i * c[1 : k + 1]
        s[k] = np.sum(w * co[k - 1 :: -1][:k], axis=0) / k
        co[k] = -np.sum(w * s[k - 1 :: -1][:k], axis=0) / k
    return Jet(s), Jet(co)


class JetOps:
    def __init__(self, order: int, shape):
        self.order = order
        self.shape = shape

    def const(self, v):
        return Jet.constant(float(v), self.order, self.shape)

    def div(self, a, b):
        return div(a, b)

    def ipow(self, a, k):
        if k < 0 and np.any(a.coeffs[0] == 0):
            raise DomainError("zero raised to a negative power")
        return ipow(a, k)

    def pow(self, a, b):
        if np.all(b.coeffs[1:] == 0) and np.all(b.coeffs[0] == b.coeffs[0].flat[0]):
            return rpow(a, float(b.coeffs[0].flat[0]))
        return jexp(b * jlog(a))

    def exp(self, a):
        return jexp(a)

    def log(self, a):
        return jlog(a)

    def sin(self, a):
        return jsincos(a)[0]

    def cos(self, a):
        return jsincos(a)[1]

    def sqrt(self, a):
        return rpow(a, 0.5)


def jet_eval(f: Expr, x, n=None, order: int = 1, max_order: int = MAX_ORDER, **env) -> Jet:
    """Derivatives of ``f`` at ``x`` up to ``order``.

    ``x`` may be a scalar or an array of points.  ``n`` binds the sequence
    index symbol; other symbols may be passed as keywords.

    >>> from gfakit.basealg.expr import parse_expr
    >>> jet_eval(parse_expr("x^2"), 2.0, order=2).values.tolist()
    [4.0, 4.0, 2.0]
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > max_order:
        raise CapabilityError(f"jet order {order} exceeds the maximum {max_order}")
    x = np.asarray(x, dtype=float)
    if n is not None:
        env["n"] = n
    env["x"] = Jet.variable(x, order)
    out = walk(f, env, JetOps(order, x.shape))
    if not isinstance(out, Jet):
        out = Jet.constant(out, order, x.shape)
    return out
