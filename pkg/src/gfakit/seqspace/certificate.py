"""Closed-form growth certificates.

A certificate records the asymptotics of ``ln p(f_n)`` as a finite sum of
basis terms ``coef * n^tau * (ln n)^beta * (ln ln n)^gamma``.  The usual
parametrisation

    p(f_n) ~ C * n^a * (ln n)^b * exp(s * n^t * (ln n)^u)

maps ``ln C`` to order ``(0,0,0)``, ``a`` to ``(0,1,0)``, ``b`` to
``(0,0,1)`` and the exponential term to ``(t,u,0)``.  Orders compare
lexicographically, which is the asymptotic order of the basis functions.
The exponent ``u`` and multiple exponential terms extend the
``C n^a (ln n)^b exp(s n^t)`` form so that products such as
``e^{-n} * e^{sqrt n}`` and growths such as ``e^{(ln n)^2}`` keep a closed
form.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from ..basealg.expr import Const, Expr, N, as_expr, exp, log

CONST = (0.0, 0.0, 0.0)
LOG = (0.0, 1.0, 0.0)
LOGLOG = (0.0, 0.0, 1.0)


def _order(tau, beta=0.0, gamma=0.0) -> tuple:
    return (round(float(tau), 12) + 0.0, round(float(beta), 12) + 0.0, round(float(gamma), 12) + 0.0)


def _canon(terms: dict) -> tuple:
    return tuple(sorted(((o, c) for o, c in terms.items() if c != 0.0), reverse=True))


@dataclass(frozen=True)
class GrowthCertificate:
    """Asymptotic form of ``ln p(f_n)``; ``zero=True`` certifies ``p(f_n) = 0``."""

    terms: tuple = ()
    zero: bool = False

    @classmethod
    def of(cls, C=1.0, a=0.0, b=0.0, s=0.0, t=0.0, u=0.0) -> "GrowthCertificate":
        if C == 0:
            return cls.zero_sequence()
        if C < 0:
            raise ValueError("certificate constant C must be positive")
        if not all(math.isfinite(v) for v in (C, a, b, s, t, u)):
            raise ValueError("certificate parameters must be finite")
        if t < 0:
            raise ValueError("certificate exponent t must be non-negative")
        terms: dict = {}

        def put(order, coef):
            terms[order] = terms.get(order, 0.0) + coef

        put(CONST, math.log(C))
        put(LOG, float(a))
        put(LOGLOG, float(b))
        if s:
            put(_order(t, u), float(s))
        return cls(_canon(terms))

    @classmethod
    def zero_sequence(cls) -> "GrowthCertificate":
        return cls((), True)

    @classmethod
    def from_terms(cls, terms: dict) -> "GrowthCertificate":
        return cls(_canon({_order(*o): float(c) for o, c in terms.items()}))

    # -- views -------------------------------------------------------------

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def C(self) -> float:
        return math.exp(self.as_dict().get(CONST, 0.0))

    @property
    def a(self) -> float:
        return self.as_dict().get(LOG, 0.0)

    @property
    def b(self) -> float:
        return self.as_dict().get(LOGLOG, 0.0)

    @property
    def exp_terms(self) -> list:
        """``(s, t, u)`` triples of the exponential part."""
        return [(c, o[0], o[1]) for o, c in self.terms if o not in (CONST, LOG, LOGLOG) and o[2] == 0.0]

    def dominant(self):
        """``(order, coef)`` of the leading non-zero term, or None."""
        return self.terms[0] if self.terms else None

    def log_value(self, n) -> float:
        """``ln p(f_n)`` predicted by the certificate."""
        if self.zero:
            return -math.inf
        ln = math.log(n)
        total = 0.0
        for (tau, beta, gamma), c in self.terms:
            v = c
            if tau:
                v *= float(n) ** tau
            if beta:
                v *= ln**beta
            if gamma:
                v *= math.log(ln) ** gamma
            total += v
        return total

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "GrowthCertificate") -> "GrowthCertificate":
        if self.zero or other.zero:
            return GrowthCertificate.zero_sequence()
        terms = self.as_dict()
        for o, c in other.terms:
            terms[o] = terms.get(o, 0.0) + c
        return GrowthCertificate(_canon(terms))

    def scaled(self, factor: float) -> "GrowthCertificate":
        """Certificate of ``lambda * f`` given ``|lambda| = factor``."""
        if self.zero or factor == 0:
            return GrowthCertificate.zero_sequence()
        terms = self.as_dict()
        terms[CONST] = terms.get(CONST, 0.0) + math.log(factor)
        return GrowthCertificate(_canon(terms))

    def compare(self, other: "GrowthCertificate") -> int:
        """``+1`` if ``p(f)/p(g) -> inf``, ``-1`` if ``-> 0``, ``0`` if bounded above and below."""
        if self.zero and other.zero:
            return 0
        if self.zero:
            return -1
        if other.zero:
            return 1
        diff = self.as_dict()
        for o, c in other.terms:
            diff[o] = diff.get(o, 0.0) - c
        for o, c in _canon(diff):
            if o == CONST:
                return 0
            return 1 if c > 0 else -1
        return 0

    def ratio_constant(self, other: "GrowthCertificate") -> float:
        """``lim p(f)/p(g)`` when :meth:`compare` is 0."""
        return math.exp(self.as_dict().get(CONST, 0.0) - other.as_dict().get(CONST, 0.0))

    # -- realisation -------------------------------------------------------

    def to_expr(self) -> Expr:
        """A positive scalar sequence expression in ``n`` realising the certificate."""
        if self.zero:
            return Const(0.0)
        factors = []
        exponent = None
        for (tau, beta, gamma), c in self.terms:
            if (tau, beta, gamma) == CONST:
                factors.append(as_expr(math.exp(c)))
            elif (tau, beta, gamma) == LOG:
                factors.append(N ** as_expr(c))
            elif (tau, beta, gamma) == LOGLOG:
                factors.append(log(N) ** as_expr(c))
            else:
                term = as_expr(c)
                if tau:
                    term = term * N ** as_expr(tau)
                if beta:
                    term = term * log(N) ** as_expr(beta)
                if gamma:
                    term = term * log(log(N)) ** as_expr(gamma)
                exponent = term if exponent is None else exponent + term
        if exponent is not None:
            factors.append(exp(exponent))
        if not factors:
            return Const(1.0)
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out

    def describe(self) -> str:
        if self.zero:
            return "0"
        parts = [f"C={self.C:.6g}", f"a={self.a:.6g}", f"b={self.b:.6g}"]
        for s, t, u in self.exp_terms:
            parts.append(f"exp({s:.6g}*n^{t:.6g}*log(n)^{u:.6g})" if u else f"exp({s:.6g}*n^{t:.6g})")
        return " ".join(parts)


def add_certificates(cf, cg, sign_f, sign_g):
    """Certificate of ``f + g`` or None when cancellation cannot be ruled out.

    ``sign_f``/``sign_g`` are the eventual signs of real scalar sequences
    (``None`` when unknown).  Returns ``(certificate, sign)``.
    """
    if cf is None or cg is None:
        return None, None
    if cf.zero:
        return cg, sign_g
    if cg.zero:
        return cf, sign_f
    order = cf.compare(cg)
    if order > 0:
        return cf, sign_f
    if order < 0:
        return cg, sign_g
    if sign_f is None or sign_g is None:
        return None, None
    ratio = cf.ratio_constant(cg)  # p(f)/p(g) -> ratio
    if sign_f == sign_g:
        return cf.scaled(1.0 + 1.0 / ratio), sign_f
    if abs(ratio - 1.0) < 1e-12:
        return None, None
    if ratio > 1:
        return cf.scaled(1.0 - 1.0 / ratio), sign_f
    return cg.scaled(1.0 - ratio), sign_g


class CertificateMap:
    """Per-``nu`` certificates: ``nu -> GrowthCertificate``.

    Used for sequences whose seminorms are dominated by the top derivative
    order (mollifier sequences), so differentiation shifts ``nu`` by one.
    """

    def __init__(self, by_nu, shift: int = 0):
        self._by_nu = by_nu
        self.shift = shift

    def __call__(self, mu: int, nu: int):
        return self._by_nu(nu + self.shift)

    def shifted(self, k: int = 1) -> "CertificateMap":
        return CertificateMap(self._by_nu, self.shift + k)


@functools.lru_cache(maxsize=256)
def profile_sup(profile: Expr, nu: int, extent: tuple, density: int = 2048) -> float:
    """``sup |psi^(nu)|`` over ``extent`` (dense grid plus polish)."""
    import numpy as np

    from ..basealg.seminorm import ExprFunction, _polish

    f = ExprFunction(profile)
    lo, hi = extent
    xs = np.linspace(lo, hi, int((hi - lo) * density) + 1)
    vals = np.abs(f.jets(xs, nu)[nu])
    return max(float(vals.max()), _polish(f, xs, vals, nu))


@dataclass(frozen=True)
class DilationCertificate:
    """Certificates of ``f_n(x) = n^k psi(n x)``.

    ``p^mu_nu(f_n) = max_{alpha <= nu} n^(k+alpha) sup|psi^(alpha)|``, which
    behaves like ``n^(k+nu) sup|psi^(nu)|``.  Products, sums, derivatives and
    scalar multiples of dilated profiles are again dilated profiles, so the
    structure is closed under the sequence operations.
    """

    k: float
    profile: Expr
    extent: tuple = (-12.0, 12.0)

    def __call__(self, mu: int, nu: int) -> GrowthCertificate:
        sup = profile_sup(self.profile, nu, self.extent)
        if sup == 0:
            return GrowthCertificate.zero_sequence()
        return GrowthCertificate.of(C=sup, a=self.k + nu)

    def derivative(self) -> "DilationCertificate":
        from ..basealg.expr import diff

        return DilationCertificate(self.k + 1, diff(self.profile), self.extent)

    def __mul__(self, other: "DilationCertificate") -> "DilationCertificate":
        lo = max(self.extent[0], other.extent[0])
        hi = min(self.extent[1], other.extent[1])
        return DilationCertificate(self.k + other.k, self.profile * other.profile, (lo, hi))

    def scaled(self, lam: float) -> "DilationCertificate":
        return DilationCertificate(self.k, self.profile * as_expr(lam), self.extent)

    def add(self, other: "DilationCertificate", sign: int = 1) -> "DilationCertificate":
        if self.k > other.k:
            return self
        if other.k > self.k:
            return other if sign > 0 else other.scaled(-1.0)
        lo = min(self.extent[0], other.extent[0])
        hi = max(self.extent[1], other.extent[1])
        prof = self.profile + other.profile if sign > 0 else self.profile - other.profile
        return DilationCertificate(self.k, prof, (lo, hi))
