"""Sequences ``f = (f_n)_n`` over the base algebra.

A :class:`Seq` is lazy: elements are produced on demand for the ``n`` a
caller asks for.  Scalar sequences come in four flavours, tried in this
order when combining:

* exact monomial sums (:class:`~.monomial.MonoSum`), closed under ``+ - *``;
* expressions in ``n``, evaluated with mpmath under escalating precision;
* piecewise sequences made of other sequences on index brackets;
* plain callables (float arithmetic).

Function-valued sequences are expressions in ``x`` and ``n`` or callables
returning :class:`~gfakit.basealg.seminorm.FunctionElement` objects.

Certificates ride along and are combined where a rule exists.  A dropped
certificate is never an error, it only sends the ultranorm to tail fitting.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from numbers import Number
from typing import Callable

import mpmath
import numpy as np

from ..basealg.expr import (
    BinOp, Const, Expr, Neg, as_expr, diff, evaluate_mp, free_symbols, parse_expr, to_source,
)
from ..basealg.seminorm import ABSOLUTE, SOBOLEV, ExprFunction, FunctionElement, seminorm_eval
from .certificate import DilationCertificate, GrowthCertificate, add_certificates
from .monomial import MonoSum, mono_from_number

SCALAR = "scalar"
FUNCTION = "function"

DPS_LADDER = (30, 60, 120, 240)
STABLE_RTOL = mpmath.mpf("1e-15")
ROUNDING_FLOOR = 64 * np.finfo(float).eps


class SeqError(TypeError):
    """Incompatible sequence operands."""


# ---------------------------------------------------------------------------
# certificates for function sequences

@dataclass(frozen=True)
class FixedCertificate:
    """``f_n = a_n * g`` with ``g`` fixed: ``p(f_n) = |a_n| p(g)``."""

    scalar: GrowthCertificate
    func: FunctionElement

    def at(self, p, mu, nu):
        c = seminorm_eval(p, mu, nu, self.func)
        if c == 0:
            return GrowthCertificate.zero_sequence()
        return self.scalar * GrowthCertificate.of(C=c)


@dataclass(frozen=True)
class IndexedCertificate:
    """Certificate computed per ``(p, mu, nu)`` by a callable."""

    fn: Callable

    def at(self, p, mu, nu):
        return self.fn(p, mu, nu)


def cert_at(cert, p, mu, nu):
    """The :class:`GrowthCertificate` for ``p^mu_nu``, or None."""
    if cert is None or isinstance(cert, GrowthCertificate):
        return cert
    if isinstance(cert, DilationCertificate):
        if p.kind == ABSOLUTE:
            return None
        if p.kind == SOBOLEV:
            lo, hi = p.interval
            if not lo < 0 < hi:
                return None
            return cert(mu, p.order)
        return cert(mu, nu)
    return cert.at(p, mu, nu)


# ---------------------------------------------------------------------------
# composite function elements

def _merge_focus(*elems) -> tuple:
    out = []
    for e in elems:
        for w in e.focus:
            if w not in out:
                out.append(w)
    return tuple(out)


def _hull(*elems):
    sups = [e.support for e in elems]
    if any(s is None for s in sups):
        return None
    return (min(s[0] for s in sups), max(s[1] for s in sups))


class ConstFunction(FunctionElement):
    def __init__(self, value: float):
        self.value = float(value)

    def jets(self, xs, order):
        out = np.zeros((order + 1,) + np.shape(xs))
        out[0] = self.value
        return out


class SumFunction(FunctionElement):
    """Signed sum; results below the rounding floor of the operands are set to 0."""

    def __init__(self, terms):
        flat = []
        for s, e in terms:
            if isinstance(e, SumFunction):
                flat.extend((s * s2, e2) for s2, e2 in e.terms)
            else:
                flat.append((s, e))
        self.terms = tuple(flat)
        self.focus = _merge_focus(*(e for _, e in flat))
        self.support = _hull(*(e for _, e in flat))
        self.max_order = min(e.max_order for _, e in flat)

    def jets(self, xs, order):
        total = None
        mag = None
        for s, e in self.terms:
            v = e.jets(xs, order)
            total = s * v if total is None else total + s * v
            mag = np.abs(v) if mag is None else mag + np.abs(v)
        with np.errstate(invalid="ignore"):
            total = np.where(np.abs(total) <= ROUNDING_FLOOR * mag, 0.0, total)
        return total


class ProductFunction(FunctionElement):
    """Leibniz product of two elements."""

    def __init__(self, a, b):
        self.a, self.b = a, b
        self.focus = _merge_focus(a, b)
        sa, sb = a.support, b.support
        if sa is None:
            self.support = sb
        elif sb is None:
            self.support = sa
        else:
            self.support = (max(sa[0], sb[0]), min(sa[1], sb[1]))
        self.max_order = min(a.max_order, b.max_order)

    def jets(self, xs, order):
        fa = self.a.jets(xs, order)
        fb = self.b.jets(xs, order)
        out = np.zeros_like(fa)
        for k in range(order + 1):
            for j in range(k + 1):
                out[k] += math.comb(k, j) * fa[j] * fb[k - j]
        return out


class DerivativeFunction(FunctionElement):
    def __init__(self, base):
        self.base = base
        self.focus = base.focus
        self.support = base.support
        self.max_order = base.max_order - 1

    def jets(self, xs, order):
        return self.base.jets(xs, order + 1)[1:]


# ---------------------------------------------------------------------------
# scalar evaluation

def stable_log_abs(compute) -> float:
    """``ln |v|`` for ``v = compute()`` evaluated under escalating mpmath precision.

    Values that stay exactly zero, or never settle as the precision grows,
    are zero (the latter are rounding residues of exact cancellations).
    """
    prev = None
    for dps in DPS_LADDER:
        with mpmath.workdps(dps):
            v = compute()
            if prev is not None:
                if v == 0 and prev == 0:
                    return -math.inf
                if v != 0 and abs(v - prev) <= STABLE_RTOL * abs(v):
                    return float(mpmath.log(abs(v)))
            prev = v
    return -math.inf


def _flatten(e: Expr, sign: int, out: list):
    if isinstance(e, BinOp) and e.op in "+-":
        _flatten(e.left, sign, out)
        _flatten(e.right, sign if e.op == "+" else -sign, out)
    elif isinstance(e, Neg):
        _flatten(e.arg, -sign, out)
    else:
        out.append((sign, e))


def cancel_terms(e: Expr) -> Expr:
    """Rebuild ``e`` with identical opposite summands removed and constants folded."""
    terms: list = []
    _flatten(e, 1, terms)
    counts: dict = {}
    order: list = []
    const = 0.0
    for s, t in terms:
        if isinstance(t, Const) and t.name is None:
            const += s * t.value
            continue
        if t not in counts:
            order.append(t)
            counts[t] = 0
        counts[t] += s
    out = None
    for t in order:
        c = counts[t]
        if c == 0:
            continue
        for _ in range(abs(c)):
            if out is None:
                out = t if c > 0 else -t
            else:
                out = out + t if c > 0 else out - t
    if const != 0 or out is None:
        k = Const(abs(const))
        if out is None:
            return Const(const)
        out = out + k if const > 0 else out - k
    return out


def mono_to_expr(m: MonoSum) -> Expr:
    out = None
    for key, coef in m.items:
        if isinstance(coef, complex):
            raise SeqError("complex coefficients have no expression form")
        body = GrowthCertificate(key).to_expr()
        term = as_expr(coef) if not key else (body if coef == 1 else as_expr(coef) * body)
        out = term if out is None else out + term
    return out if out is not None else Const(0.0)


# ---------------------------------------------------------------------------
# the sequence type

@dataclass(frozen=True, eq=False)
class Seq:
    """A lazily evaluated sequence over the base algebra."""

    kind: str
    label: str = "f"
    start: int = 1
    mono: MonoSum | None = None
    expr: Expr | None = None
    gen: Callable | None = None
    pieces: tuple = ()
    cert: object = None
    sign: int | None = None
    support: tuple | None = None
    focus: tuple = ()

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c, label=None) -> "Seq":
        if isinstance(c, Expr) or isinstance(c, str):
            raise SeqError("use embed_constant for function constants")
        m = mono_from_number(complex(c) if isinstance(c, complex) else float(c))
        return cls.from_mono(m, label or _num_label(c))

    @classmethod
    def monomial(cls, coef=1.0, a=0.0, b=0.0, s=0.0, t=0.0, u=0.0, label=None) -> "Seq":
        m = MonoSum.monomial(coef, a, b, s, t, u)
        return cls.from_mono(m, label or m.to_source())

    @classmethod
    def from_mono(cls, m: MonoSum, label=None) -> "Seq":
        needs_lnln = any(o[2] for key, _ in m.items for o, _c in key)
        needs_ln = any(o[1] or o[2] for key, _ in m.items for o, _c in key)
        start = 3 if needs_lnln else (2 if needs_ln else 1)
        return cls(SCALAR, label or m.to_source(), start, mono=m, cert=m.certificate(), sign=m.sign())

    @classmethod
    def scalar(cls, expr, certificate=None, sign=None, start=1, label=None) -> "Seq":
        e = parse_expr(expr, ("n",)) if isinstance(expr, str) else expr
        extra = free_symbols(e) - {"n"}
        if extra:
            raise SeqError(f"scalar sequence mentions {sorted(extra)}")
        return cls(SCALAR, label or to_source(e), start, expr=e, cert=certificate, sign=sign)

    @classmethod
    def function(cls, expr, certificate=None, support=None, focus=(), start=1, label=None) -> "Seq":
        e = parse_expr(expr, ("x", "n")) if isinstance(expr, str) else expr
        extra = free_symbols(e) - {"x", "n"}
        if extra:
            raise SeqError(f"function sequence mentions {sorted(extra)}")
        return cls(FUNCTION, label or to_source(e), start, expr=e, cert=certificate,
                   support=support, focus=tuple(focus))

    @classmethod
    def certified(cls, expr, C=1.0, a=0.0, b=0.0, s=0.0, t=0.0, u=0.0, **kw) -> "Seq":
        """Sequence from an expression plus its declared growth ``C n^a (ln n)^b exp(s n^t (ln n)^u)``."""
        cert = GrowthCertificate.of(C, a, b, s, t, u)
        e = parse_expr(expr, ("x", "n")) if isinstance(expr, str) else expr
        if "x" in free_symbols(e):
            return cls.function(e, certificate=cert, **kw)
        return cls.scalar(e, certificate=cert, **kw)

    @classmethod
    def from_callable(cls, fn: Callable, kind: str = SCALAR, certificate=None, start=1, label="gen") -> "Seq":
        return cls(kind, label, start, gen=fn, cert=certificate)

    @classmethod
    def from_values(cls, head, tail: "Seq | None" = None, label=None) -> "Seq":
        """``(head[0], head[1], ..., tail_{k+1}, tail_{k+2}, ...)``; tail defaults to zeros."""
        head = list(head)
        tail = tail if tail is not None else zero_seq()
        if not head:
            return tail
        first = cls.from_callable(lambda n, h=head: h[n - 1], label="head")
        return piecewise([(1, first), (len(head) + 1, tail)], label=label or f"values{head}")

    # -- basic protocol ----------------------------------------------------

    @property
    def is_scalar(self) -> bool:
        return self.kind == SCALAR

    @property
    def certificate(self):
        return self.cert

    def _piece(self, n):
        los = [lo for lo, _ in self.pieces]
        i = bisect.bisect_right(los, n) - 1
        if i < 0:
            raise ValueError(f"n={n} precedes the first bracket")
        return self.pieces[i][1]

    def element(self, n):
        """``f_n``: a number for scalar sequences, a FunctionElement otherwise."""
        if self.pieces:
            return self._piece(n).element(n)
        if self.gen is not None:
            v = self.gen(n)
            if self.kind == SCALAR:
                return complex(v) if isinstance(v, complex) else float(v)
            return v
        if self.kind == SCALAR:
            if self.mono is not None:
                return self.mono.value(n)
            with mpmath.workdps(30):
                v = evaluate_mp(self.expr, n=n)
                return complex(v) if isinstance(v, mpmath.mpc) else float(v)
        focus = tuple((c, L / n) for c, L in self.focus)
        return ExprFunction(self.expr, (("n", float(n)),), self.support, focus)

    def log_abs(self, n) -> float:
        """``ln |f_n|`` for scalar sequences (``-inf`` at exact zeros)."""
        if self.kind != SCALAR:
            raise SeqError("log_abs applies to scalar sequences")
        if self.pieces:
            return self._piece(n).log_abs(n)
        if self.mono is not None:
            if self.mono.is_zero:
                return -math.inf
            return stable_log_abs(lambda: self.mono.mp_value(n))
        if self.expr is not None:
            return stable_log_abs(lambda: evaluate_mp(self.expr, n=n))
        v = self.gen(n)
        if isinstance(v, (mpmath.mpf, mpmath.mpc)):
            return float(mpmath.log(abs(v))) if v != 0 else -math.inf
        v = abs(v)
        if v == 0:
            return -math.inf
        return math.log(v) if math.isfinite(v) else math.inf

    def log_seminorm(self, p, mu: int, nu: int, n) -> float:
        """``ln p^mu_nu(f_n)``."""
        if self.kind == SCALAR:
            # constants have vanishing derivatives, so every index gives |c|
            return self.log_abs(n)
        if p.kind == ABSOLUTE:
            raise SeqError("absolute value seminorm applies to scalar sequences")
        v = seminorm_eval(p, mu, nu, self.element(n))
        if v == 0:
            return -math.inf
        return math.log(v) if math.isfinite(v) else math.inf

    def certificate_for(self, p, mu: int, nu: int):
        if self.pieces:
            return cert_at(self.pieces[-1][1].cert, p, mu, nu)
        return cert_at(self.cert, p, mu, nu)

    def with_label(self, label: str) -> "Seq":
        return replace(self, label=label)

    # -- operators -----------------------------------------------------------

    def __add__(self, other):
        return seq_add(self, _coerce(other))

    def __radd__(self, other):
        return seq_add(_coerce(other), self)

    def __sub__(self, other):
        return seq_sub(self, _coerce(other))

    def __rsub__(self, other):
        return seq_sub(_coerce(other), self)

    def __mul__(self, other):
        if isinstance(other, Number):
            return seq_scalar_mul(self, other)
        return seq_mul(self, _coerce(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return seq_scalar_mul(self, -1.0)

    def __repr__(self):
        return f"Seq({self.kind}, {self.label!r})"


def _num_label(c) -> str:
    if isinstance(c, complex):
        return repr(c)
    c = float(c)
    return str(int(c)) if c == int(c) else repr(c)


def _coerce(v) -> Seq:
    if isinstance(v, Seq):
        return v
    if isinstance(v, Number):
        return Seq.constant(v)
    raise SeqError(f"cannot combine a sequence with {type(v).__name__}")


def zero_seq(kind: str = SCALAR) -> Seq:
    if kind == SCALAR:
        return Seq.from_mono(MonoSum(), "0")
    return Seq(FUNCTION, "0", 1, expr=Const(0.0), cert=GrowthCertificate.zero_sequence())


def piecewise(brackets, label="piecewise") -> Seq:
    """Sequence equal to ``brackets[i][1]`` for ``brackets[i][0] <= n < brackets[i+1][0]``."""
    brackets = sorted(((int(lo), s) for lo, s in brackets), key=lambda b: b[0])
    kinds = {s.kind for _, s in brackets}
    if len(kinds) != 1:
        raise SeqError("piecewise sequence mixes scalar and function pieces")
    last = brackets[-1][1]
    return Seq(kinds.pop(), label, brackets[0][0], pieces=tuple(brackets), sign=last.sign)


# ---------------------------------------------------------------------------
# arithmetic

def _promote(s: Seq) -> Seq:
    """Scalar sequence viewed as a sequence of constant functions."""
    if s.kind == FUNCTION:
        return s
    cert = s.cert if isinstance(s.cert, GrowthCertificate) else None
    if s.pieces:
        return Seq(FUNCTION, s.label, s.start, pieces=tuple((lo, _promote(q)) for lo, q in s.pieces))
    if s.mono is not None and s.mono.items and all(not k for k, _ in s.mono.items) \
            and not isinstance(s.mono.items[0][1], complex):
        return Seq(FUNCTION, s.label, s.start, expr=Const(float(s.mono.items[0][1])), cert=cert)
    if s.mono is not None and s.mono.is_zero:
        return zero_seq(FUNCTION)
    return Seq(FUNCTION, s.label, s.start, gen=lambda n, s=s: ConstFunction(s.element(n)), cert=cert)


def _scalar_expr(s: Seq):
    if s.expr is not None:
        return s.expr
    if s.mono is not None:
        try:
            return mono_to_expr(s.mono)
        except SeqError:
            return None
    return None


def _split_pieces(f: Seq, g: Seq, op) -> Seq:
    """Apply ``op`` bracket by bracket."""
    def brackets(s):
        return list(s.pieces) if s.pieces else [(s.start, s)]

    bf, bg = brackets(f), brackets(g)
    cuts = sorted({lo for lo, _ in bf} | {lo for lo, _ in bg})
    start = max(f.start, g.start)
    cuts = [c for c in cuts if c > start]
    cuts = [start] + cuts

    def at(br, n):
        los = [lo for lo, _ in br]
        return br[max(bisect.bisect_right(los, n) - 1, 0)][1]

    return piecewise([(c, op(at(bf, c), at(bg, c))) for c in cuts], label=f"({f.label} ~ {g.label})")


def _function_sum_cert(cf, cg, sign):
    if cf is None or cg is None:
        return None
    if isinstance(cf, DilationCertificate) and isinstance(cg, DilationCertificate):
        return cf.add(cg, sign)

    def fn(p, mu, nu):
        a, b = cert_at(cf, p, mu, nu), cert_at(cg, p, mu, nu)
        return add_certificates(a, b, None, None)[0]

    return IndexedCertificate(fn)


def _combine_scalar(f: Seq, g: Seq, op: str, label: str) -> Seq:
    start = max(f.start, g.start)
    if f.mono is not None and g.mono is not None:
        m = {"+": f.mono + g.mono, "-": f.mono - g.mono, "*": f.mono * g.mono}[op]
        return replace(Seq.from_mono(m, label), start=max(start, Seq.from_mono(m).start))
    if op == "*":
        cert = f.cert * g.cert if isinstance(f.cert, GrowthCertificate) and isinstance(g.cert, GrowthCertificate) else None
        sign = f.sign * g.sign if f.sign is not None and g.sign is not None else None
    else:
        sg = g.sign if op == "+" or g.sign is None else -g.sign
        cf = f.cert if isinstance(f.cert, GrowthCertificate) else None
        cg = g.cert if isinstance(g.cert, GrowthCertificate) else None
        cert, sign = add_certificates(cf, cg, f.sign, sg)
    ef, eg = _scalar_expr(f), _scalar_expr(g)
    if ef is not None and eg is not None:
        e = BinOp(op, ef, eg)
        if op != "*":
            e = cancel_terms(e)
        if isinstance(e, Const) and e.value == 0:
            return replace(zero_seq(), label=label, start=start)
        return Seq(SCALAR, label, start, expr=e, cert=cert, sign=sign)
    fns = {"+": lambda a, b: a + b, "-": lambda a, b: a - b, "*": lambda a, b: a * b}
    fn = fns[op]
    return Seq(SCALAR, label, start, gen=lambda n: fn(f.element(n), g.element(n)), cert=cert, sign=sign)


def _combine_function(f: Seq, g: Seq, op: str, label: str) -> Seq:
    start = max(f.start, g.start)
    if op == "*":
        if isinstance(f.cert, DilationCertificate) and isinstance(g.cert, DilationCertificate):
            cert = f.cert * g.cert
        else:
            cert = None
        gen = lambda n: ProductFunction(f.element(n), g.element(n))  # noqa: E731
    else:
        sign = 1 if op == "+" else -1
        cert = _function_sum_cert(f.cert, g.cert, sign)
        gen = lambda n: SumFunction(((1, f.element(n)), (sign, g.element(n))))  # noqa: E731
    return Seq(FUNCTION, label, start, gen=gen, cert=cert)


def _binary(f: Seq, g: Seq, op: str) -> Seq:
    if not isinstance(f, Seq) or not isinstance(g, Seq):
        raise SeqError("operands must be sequences")
    label = f"({f.label} {op} {g.label})"
    if f.pieces or g.pieces:
        if f.kind != g.kind:
            f, g = _promote(f), _promote(g)
        return replace(_split_pieces(f, g, lambda a, b: _binary(a, b, op)), label=label)
    if f.kind == SCALAR and g.kind == SCALAR:
        return _combine_scalar(f, g, op, label)
    if op == "*" and (f.kind == SCALAR or g.kind == SCALAR):
        s, h = (f, g) if f.kind == SCALAR else (g, f)
        return _scalar_times_function(s, h, label)
    return _combine_function(_promote(f), _promote(g), op, label)


def _scalar_times_function(s: Seq, h: Seq, label: str) -> Seq:
    const = None
    if s.mono is not None and len(s.mono.items) == 1 and not s.mono.items[0][0]:
        const = s.mono.items[0][1]
    if s.mono is not None and s.mono.is_zero:
        return zero_seq(FUNCTION)
    if const is not None and not isinstance(const, complex):
        return replace(seq_scalar_mul(h, const), label=label)
    sc = s.cert if isinstance(s.cert, GrowthCertificate) else None
    hc = h.cert
    cert = None
    if sc is not None and hc is not None:
        cert = IndexedCertificate(lambda p, mu, nu: _mul_or_none(sc, cert_at(hc, p, mu, nu)))
    start = max(s.start, h.start)
    return Seq(FUNCTION, label, start, cert=cert,
               gen=lambda n: _scaled_element(s.element(n), h.element(n)))


def _mul_or_none(a, b):
    return None if a is None or b is None else a * b


def _scaled_element(c, elem):
    if isinstance(c, complex):
        raise SeqError("smooth functions are real-valued")
    return ProductFunction(ConstFunction(c), elem)


def seq_add(f: Seq, g: Seq) -> Seq:
    """Pointwise sum."""
    return _binary(f, g, "+")


def seq_sub(f: Seq, g: Seq) -> Seq:
    return _binary(f, g, "-")


def seq_mul(f: Seq, g: Seq) -> Seq:
    """Pointwise product; scalar factors act on function sequences by multiplication."""
    return _binary(f, g, "*")


def seq_scalar_mul(f: Seq, lam) -> Seq:
    """``lam * f`` for a real or complex number ``lam``; ``lam = 0`` gives the zero sequence."""
    if not isinstance(lam, Number):
        raise SeqError("scalar multiple needs a number")
    label = f"{_num_label(lam)}*{f.label}"
    if lam == 0:
        return replace(zero_seq(f.kind), label=label)
    if f.pieces:
        return piecewise([(lo, seq_scalar_mul(q, lam)) for lo, q in f.pieces], label=label)
    if f.kind == SCALAR:
        return _combine_scalar(Seq.constant(lam), f, "*", label)
    if isinstance(lam, complex):
        raise SeqError("smooth functions are real-valued")
    lam = float(lam)
    cert = f.cert
    if isinstance(cert, GrowthCertificate):
        cert = cert.scaled(abs(lam))
    elif isinstance(cert, DilationCertificate):
        cert = cert.scaled(lam)
    elif isinstance(cert, FixedCertificate):
        cert = FixedCertificate(cert.scalar.scaled(abs(lam)), cert.func)
    elif cert is not None:
        inner = cert
        cert = IndexedCertificate(lambda p, mu, nu: _scaled_or_none(cert_at(inner, p, mu, nu), abs(lam)))
    if f.expr is not None:
        return replace(f, label=label, expr=as_expr(lam) * f.expr, cert=cert)
    return Seq(FUNCTION, label, f.start, cert=cert, support=f.support,
               gen=lambda n: _scaled_element(lam, f.element(n)))


def _scaled_or_none(c, lam):
    return None if c is None else c.scaled(lam)


def seq_derivative(f: Seq) -> Seq:
    """``(f_n')_n`` for function sequences."""
    if f.kind != FUNCTION:
        raise SeqError("derivative applies to function sequences")
    label = f"deriv({f.label})"
    if f.pieces:
        return piecewise([(lo, seq_derivative(q)) for lo, q in f.pieces], label=label)
    cert = f.cert
    if isinstance(cert, DilationCertificate):
        cert = cert.derivative()
    elif isinstance(cert, FixedCertificate):
        cert = FixedCertificate(cert.scalar, DerivativeFunction(cert.func))
    else:
        cert = None
    if f.expr is not None:
        return replace(f, label=label, expr=diff(f.expr, "x"), cert=cert)
    return Seq(FUNCTION, label, f.start, cert=cert, gen=lambda n: DerivativeFunction(f.element(n)))


# ---------------------------------------------------------------------------
# certificate honesty

@dataclass
class CertificateCheck:
    ok: bool
    samples: list = field(default_factory=list)  # (n, actual log, certified log)

    def __bool__(self):
        return self.ok


def check_certificate(f: Seq, p, mu: int = 1, nu: int = 0, ns=None, factor: float = 2.0) -> CertificateCheck:
    """Spot-check that ``p(f_n)`` lies within ``factor`` of the certified value."""
    cert = f.certificate_for(p, mu, nu)
    if cert is None:
        raise ValueError("sequence carries no certificate for this seminorm")
    if ns is None:
        ns = np.unique(np.rint(np.geomspace(max(f.start, 64), 10**4, 5)).astype(int))
    out = CertificateCheck(True)
    tol = math.log(factor)
    for n in ns:
        n = int(n)
        actual = f.log_seminorm(p, mu, nu, n)
        claimed = cert.log_value(n)
        out.samples.append((n, actual, claimed))
        if cert.zero or actual == -math.inf:
            good = cert.zero and actual == -math.inf
        else:
            good = abs(actual - claimed) <= tol
        out.ok &= bool(good)
    return out


__all__ = [
    "FUNCTION", "SCALAR", "CertificateCheck", "FixedCertificate", "IndexedCertificate", "Seq",
    "SeqError", "cancel_terms", "cert_at", "check_certificate", "piecewise", "seq_add",
    "seq_derivative", "seq_mul", "seq_scalar_mul", "seq_sub", "stable_log_abs", "zero_seq",
]
