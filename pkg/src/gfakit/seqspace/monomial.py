"""Exact sums of growth monomials ``c * exp(L(n))``.

``L`` is a finite combination of the basis terms used by growth
certificates (``n^tau (ln n)^beta (ln ln n)^gamma``) without a constant
part.  Sums and products of such sums stay in the class, like terms merge
exactly, so ring identities hold symbolically and the certificate of a
sum is read off its dominant monomial.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import mpmath

from .certificate import CONST, GrowthCertificate, _canon, _order


CANCEL_EPS = 16 * 2.0 ** -52


def _key_cert(key) -> GrowthCertificate:
    return GrowthCertificate(key)


def _cmp_keys(k1, k2) -> int:
    return _key_cert(k1).compare(_key_cert(k2))


def make_key(a=0.0, b=0.0, s=0.0, t=0.0, u=0.0) -> tuple:
    terms = {}
    if a:
        terms[_order(0, 1)] = float(a)
    if b:
        terms[_order(0, 0, 1)] = float(b)
    if s:
        o = _order(t, u)
        if o == CONST:
            raise ValueError("constant exponential factors belong in the coefficient")
        terms[o] = terms.get(o, 0.0) + float(s)
    return _canon(terms)


def _add_keys(k1, k2) -> tuple:
    terms = dict(k1)
    for o, c in k2:
        terms[o] = terms.get(o, 0.0) + c
    return _canon(terms)


@dataclass(frozen=True)
class MonoSum:
    """``sum_k coef_k * exp(L_k(n))`` with keys sorted from dominant to smallest."""

    items: tuple = ()

    @classmethod
    def build(cls, pairs) -> "MonoSum":
        acc: dict = {}
        mass: dict = {}
        for key, coef in pairs:
            acc[key] = acc.get(key, 0.0) + coef
            mass[key] = mass.get(key, 0.0) + abs(coef)
        # merged coefficients at rounding level of their inputs are exact cancellations
        kept = [(k, c) for k, c in acc.items() if abs(c) > CANCEL_EPS * mass[k]]
        kept.sort(key=functools.cmp_to_key(lambda x, y: -_cmp_keys(x[0], y[0])))
        return cls(tuple(kept))

    @classmethod
    def monomial(cls, coef=1.0, a=0.0, b=0.0, s=0.0, t=0.0, u=0.0) -> "MonoSum":
        return cls.build([(make_key(a, b, s, t, u), coef)])

    @property
    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: "MonoSum") -> "MonoSum":
        return MonoSum.build(list(self.items) + list(other.items))

    def __neg__(self) -> "MonoSum":
        return MonoSum(tuple((k, -c) for k, c in self.items))

    def __sub__(self, other: "MonoSum") -> "MonoSum":
        return self + (-other)

    def __mul__(self, other: "MonoSum") -> "MonoSum":
        return MonoSum.build([(_add_keys(k1, k2), c1 * c2)
                              for k1, c1 in self.items for k2, c2 in other.items])

    def scale(self, lam) -> "MonoSum":
        if lam == 0:
            return MonoSum()
        return MonoSum(tuple((k, c * lam) for k, c in self.items))

    # -- asymptotics -------------------------------------------------------

    def certificate(self) -> GrowthCertificate:
        if self.is_zero:
            return GrowthCertificate.zero_sequence()
        key, coef = self.items[0]
        return GrowthCertificate(key).scaled(abs(coef))

    def sign(self):
        """Eventual sign, or None for a complex leading coefficient."""
        if self.is_zero:
            return 0
        c = self.items[0][1]
        if isinstance(c, complex) and c.imag != 0:
            return None
        c = c.real if isinstance(c, complex) else c
        return 1 if c > 0 else -1

    # -- evaluation --------------------------------------------------------

    def mp_value(self, n):
        """The value at ``n`` in the ambient mpmath precision."""
        mp = mpmath.mp
        nn = mp.mpf(n)
        ln = mp.log(nn)
        lln = mp.log(ln) if ln > 0 else None
        total = mp.mpf(0)
        for key, coef in self.items:
            L = mp.mpf(0)
            for (tau, beta, gamma), c in key:
                v = mp.mpf(c)
                if tau:
                    v *= nn ** mp.mpf(tau)
                if beta:
                    v *= ln ** mp.mpf(beta)
                if gamma:
                    if lln is None:
                        raise ValueError("ln ln n undefined below n = 3")
                    v *= lln ** mp.mpf(gamma)
                L += v
            total += (mp.mpc(coef) if isinstance(coef, complex) else mp.mpf(coef)) * mp.exp(L)
        return total

    def value(self, n) -> complex | float:
        v = self.mp_value(n)
        if isinstance(v, mpmath.mpc):
            return complex(v)
        return float(v)

    def to_source(self) -> str:
        from ..basealg.expr import to_source

        if self.is_zero:
            return "0"
        parts = []
        for key, coef in self.items:
            body = GrowthCertificate(key)
            e = body.to_expr()
            parts.append(f"{coef!r}*({to_source(e)})")
        return " + ".join(parts)


def mono_from_number(c) -> MonoSum:
    if isinstance(c, complex) and c.imag == 0:
        c = c.real
    return MonoSum.build([((), c)]) if c != 0 else MonoSum()


def _as_exponent(m: MonoSum):
    """Key of ``exp(m)`` for ``m`` a sum of ``c n^a (ln n)^b`` terms, plus the constant part."""
    terms, const = {}, 0.0
    for key, coef in m.items:
        if isinstance(coef, complex):
            return None
        k = dict(key)
        if set(k) - {_order(0, 1), _order(0, 0, 1)}:
            return None
        if not k:
            const += coef
            continue
        o = _order(k.get(_order(0, 1), 0.0), k.get(_order(0, 0, 1), 0.0))
        terms[o] = terms.get(o, 0.0) + coef
    return _canon(terms), const


def _power(m: MonoSum, q: float):
    if q == int(q) and q >= 0:
        out = mono_from_number(1.0)
        for _ in range(int(q)):
            out = out * m
        return out
    if len(m.items) != 1:
        return None
    key, coef = m.items[0]
    if isinstance(coef, complex) or coef <= 0:
        return None
    return MonoSum.build([(tuple((o, c * q) for o, c in key), coef ** q)])


def _log(m: MonoSum):
    if len(m.items) != 1:
        return None
    key, coef = m.items[0]
    if isinstance(coef, complex) or coef <= 0:
        return None
    out = mono_from_number(math.log(coef))
    for (tau, beta, gamma), c in key:
        if gamma:
            return None
        # c n^tau (ln n)^beta = c exp(tau ln n + beta ln ln n)
        out = out + MonoSum.build([(make_key(a=tau, b=beta), c)])
    return out


def mono_from_expr(e) -> MonoSum | None:
    """Exact :class:`MonoSum` for an expression in ``n`` built from powers, ``exp`` and ``log``.

    Returns None when the expression leaves the class (``sin``, ``x``, sums
    inside a logarithm, ...).
    """
    from ..basealg.expr import BinOp, Call, Const, Neg, Sym

    if isinstance(e, Const):
        return mono_from_number(e.value)
    if isinstance(e, Sym):
        return MonoSum.monomial(1.0, a=1.0) if e.name == "n" else None
    if isinstance(e, Neg):
        inner = mono_from_expr(e.arg)
        return None if inner is None else -inner
    if isinstance(e, BinOp):
        left = mono_from_expr(e.left)
        right = mono_from_expr(e.right)
        if left is None or right is None:
            return None
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            inv = _power(right, -1.0) if not right.is_zero else None
            return None if inv is None else left * inv
        if e.op == "^":
            if len(right.items) != 1 or right.items[0][0] != ():
                return None
            q = right.items[0][1]
            return None if isinstance(q, complex) else _power(left, float(q))
        return None
    if isinstance(e, Call):
        inner = mono_from_expr(e.arg)
        if inner is None:
            return None
        if e.fn == "exp":
            got = _as_exponent(inner)
            if got is None:
                return None
            key, const = got
            if key and _order(0) in dict(key):
                return None
            return MonoSum.build([(key, math.exp(const))])
        if e.fn == "log":
            return _log(inner)
        if e.fn == "sqrt":
            return _power(inner, 0.5)
    return None


__all__ = ["MonoSum", "make_key", "mono_from_expr", "mono_from_number"]
