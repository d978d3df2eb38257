"""Embeddings into the sequence algebra.

* constants ``e -> (e, e, e, ...)``;
* delta sequences ``delta_n(x) = n * phi(n x)`` for a normalised mollifier;
* convolution ``f -> (f * delta_n)_n`` for smooth expressions and for
  piecewise tables such as the Heaviside step.

Plus the checks that go with them: unboundedness of delta sequences in the
base algebra, admissibility of a scale for an embedded sequence, weak
convergence to the point evaluation, and a replay of the argument that a
delta sequence cannot stay bounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .basealg.expr import (
    Const, EvaluationError, Expr, N, X, diff, evaluate, parse_expr, substitute, to_source,
)
from .basealg.jet import CapabilityError
from .basealg.seminorm import ExprFunction, FunctionElement, SupDerivatives, seminorm_eval
from .scale import Scale, geometric_schedule
from .seqspace.certificate import DilationCertificate, GrowthCertificate
from .seqspace.seq import FUNCTION, FixedCertificate, Seq, zero_seq
from .seqspace.ultranorm import MODERATE, PROJECTIVE, classify

NORMALIZATION_TOL = 1e-8
QUAD_TOL = 1e-10
QUAD_DEPTH = 40


# ---------------------------------------------------------------------------
# mollifiers

@dataclass(frozen=True)
class Mollifier:
    """A profile ``phi`` with ``int phi = 1``; ``reach`` bounds its effective support."""

    name: str
    profile: Expr
    reach: float
    support: tuple | None = None

    def normalization_error(self) -> float:
        lo, hi = self.support or (-12.0, 12.0)
        val, _ = quad(lambda t: float(evaluate(self.profile, x=t)), lo, hi,
                      epsabs=1e-13, epsrel=1e-13, limit=200)
        return abs(val - 1.0)

    @property
    def normalized(self) -> bool:
        return self.normalization_error() <= NORMALIZATION_TOL

    def values(self, t):
        t = np.asarray(t, dtype=float)
        v = evaluate(self.profile, x=t)
        if self.support is not None:
            v = np.where((t >= self.support[0]) & (t <= self.support[1]), v, 0.0)
        return v


def gaussian() -> Mollifier:
    """``pi^(-1/2) exp(-x^2)``; the tails beyond ``|x| = 12`` are below ``1e-63``."""
    return Mollifier("gaussian", parse_expr("exp(-x^2)/sqrt(pi)"), 12.0)


def bump() -> Mollifier:
    """``(315/256) (1 - x^2)^4`` on ``[-1, 1]``: compactly supported, ``C^3`` at the ends."""
    return Mollifier("bump", parse_expr("315/256*(1-x^2)^4"), 1.0, (-1.0, 1.0))


MOLLIFIERS = {"gaussian": gaussian, "bump": bump}


def mollifier(name: str) -> Mollifier:
    try:
        return MOLLIFIERS[name]()
    except KeyError:
        raise ValueError(f"unknown mollifier {name!r}; expected one of {sorted(MOLLIFIERS)}") from None


# ---------------------------------------------------------------------------
# constants and deltas

def embed_constant(e, label: str | None = None) -> Seq:
    """The constant sequence ``(e)_n``; ``e`` is a number or an expression in ``x``."""
    if isinstance(e, str):
        e = parse_expr(e, ("x",))
    if not isinstance(e, Expr):
        return Seq.constant(e, label=label)
    if isinstance(e, Const):
        if e.value == 0:
            return zero_seq(FUNCTION)
    extra = {"n", "m"} & _symbols(e)
    if extra:
        raise ValueError("constant embedding takes an expression in x only")
    cert = FixedCertificate(GrowthCertificate.of(C=1.0), ExprFunction(e))
    return Seq(FUNCTION, label or to_source(e), 1, expr=e, cert=cert)


def _symbols(e):
    from .basealg.expr import free_symbols

    return set(free_symbols(e))


def make_delta(m: Mollifier | None = None, label: str | None = None) -> Seq:
    """``delta_n(x) = n phi(n x)`` with its dilation certificate."""
    m = m or gaussian()
    if not m.normalized:
        raise ValueError(f"mollifier {m.name} is not normalised")
    cert = DilationCertificate(1.0, m.profile, m.support or (-m.reach, m.reach))
    label = label or f"delta[{m.name}]"
    expr = N * substitute(m.profile, {"x": N * X})
    if m.support is None:
        return Seq(FUNCTION, label, 1, expr=expr, cert=cert, focus=((0.0, m.reach),))
    lo, hi = m.support

    def element(n, expr=expr):
        return ExprFunction(expr, (("n", float(n)),), (lo / n, hi / n), ((0.0, m.reach / n),))

    return Seq(FUNCTION, label, 1, gen=element, cert=cert)


# ---------------------------------------------------------------------------
# convolution

@dataclass(frozen=True)
class PiecewiseTable:
    """``f(x) = expr_i`` on ``[lo_i, hi_i)``; pieces may use infinite ends."""

    pieces: tuple  # ((lo, hi, Expr), ...)
    name: str = "table"

    @property
    def breakpoints(self) -> list:
        pts = set()
        for lo, hi, _ in self.pieces:
            pts.update(v for v in (lo, hi) if math.isfinite(v))
        return sorted(pts)


def heaviside() -> PiecewiseTable:
    return PiecewiseTable(((0.0, math.inf, Const(1.0)),), "heaviside")


def _simpson(g, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = g(lm), g(rm)
    h = (b - a) / 12.0
    left = h * (fa + 4 * flm + fm)
    right = h * (fm + 4 * frm + fb)
    err = np.max(np.abs(left + right - whole))
    if err <= 15 * tol:
        return left + right + (left + right - whole) / 15.0
    if depth <= 0:
        raise EvaluationError("adaptive quadrature did not converge")
    return (_simpson(g, a, m, fa, flm, fm, left, tol / 2, depth - 1)
            + _simpson(g, m, b, fm, frm, fb, right, tol / 2, depth - 1))


def adaptive_simpson(g, a: float, b: float, tol: float = QUAD_TOL, depth: int = QUAD_DEPTH):
    """Vector-valued adaptive Simpson on ``[a, b]`` with a shared subdivision.

    ``g(s)`` returns an array; refinement stops when every component meets
    the absolute tolerance.
    """
    fa, fb = g(a), g(b)
    fm = g(0.5 * (a + b))
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    return _simpson(g, a, b, fa, fm, fb, whole, tol, depth)


class ConvolutionFunction(FunctionElement):
    """``(f * delta_n)(x) = int f(x - t/n) phi(t) dt`` by adaptive quadrature.

    Each piece of ``f`` is integrated over the ``t``-range where it is active,
    mapped to ``[0, 1]`` so that one subdivision serves every ``x``.
    Derivatives come from convolving derivatives of ``f``; table-backed
    functions only provide order 0.
    """

    def __init__(self, pieces, smooth: bool, moll: Mollifier, n: int, tol: float = QUAD_TOL):
        self.pieces = pieces
        self.smooth = smooth
        self.moll = moll
        self.n = float(n)
        self.tol = tol
        self.max_order = 16 if smooth else 0
        reach = moll.reach / self.n
        cuts = {b for lo, hi, _ in pieces for b in (lo, hi) if math.isfinite(b)}
        self.focus = tuple((b, reach) for b in sorted(cuts))
        self.support = None
        self.polish = False  # every evaluation is a quadrature; the focus windows carry the detail

    def jets(self, xs, order):
        if order > self.max_order:
            raise CapabilityError("derivatives of a table-backed convolution are not available")
        xs = np.asarray(xs, dtype=float)
        out = np.zeros((order + 1,) + xs.shape)
        for k in range(order + 1):
            for lo, hi, expr in self.pieces:
                dk = expr
                for _ in range(k):
                    dk = diff(dk, "x")
                if isinstance(dk, Const) and dk.value == 0:
                    continue
                out[k] += self._piece(xs, lo, hi, dk)
        return out

    def _piece(self, xs, lo, hi, expr):
        n, L = self.n, self.moll.reach
        a = np.maximum(-L, n * (xs - hi)) if math.isfinite(hi) else np.full_like(xs, -L)
        b = np.minimum(L, n * (xs - lo)) if math.isfinite(lo) else np.full_like(xs, L)
        width = np.maximum(b - a, 0.0)
        active = width > 0
        if not np.any(active):
            return np.zeros_like(xs)
        xa, aa, wa = xs[active], a[active], width[active]

        def g(s):
            t = aa + s * wa
            fx = evaluate(expr, x=xa - t / n)
            return np.broadcast_to(fx, xa.shape) * self.moll.values(t) * wa

        out = np.zeros_like(xs)
        out[active] = adaptive_simpson(g, 0.0, 1.0, self.tol)
        return out


def embed_by_convolution(f, m: Mollifier | None = None, label: str | None = None) -> Seq:
    """``(f * delta_n)_n`` for an expression in ``x`` or a :class:`PiecewiseTable`."""
    m = m or gaussian()
    if isinstance(f, str):
        f = heaviside() if f == "heaviside" else parse_expr(f, ("x",))
    if isinstance(f, PiecewiseTable):
        pieces, smooth, name = f.pieces, False, f.name
    elif isinstance(f, Expr):
        pieces, smooth, name = ((-math.inf, math.inf, f),), True, to_source(f)
    else:
        raise TypeError("convolution embedding takes an expression or a piecewise table")
    label = label or f"conv({name}, {m.name})"
    return Seq(FUNCTION, label, 1, gen=lambda n: ConvolutionFunction(pieces, smooth, m, n))


# ---------------------------------------------------------------------------
# checks

@dataclass
class UnboundedReport:
    sup_values: list  # (n, p(f_n))
    monotone_growth: bool
    strict_everywhere: bool
    exceeds: float

    def __bool__(self):
        return self.monotone_growth


def check_unbounded(f: Seq, p=None, budget: int = 10**5, mu: int = 1, nu: int = 0,
                    points: int = 24) -> UnboundedReport:
    """Sample ``p^mu_nu(f_n)`` on a geometric schedule and look for unbounded growth.

    ``monotone_growth`` is strict increase over the last third of the
    schedule; ``strict_everywhere`` over all of it.
    """
    if f.kind != FUNCTION:
        raise TypeError("check_unbounded expects a function sequence")
    p = p or SupDerivatives()
    ns = geometric_schedule(max(f.start, 1), budget, points)
    vals = [seminorm_eval(p, mu, nu, f.element(int(n))) for n in ns]
    d = np.diff(vals)
    tail = d[-max(1, len(d) // 3):]
    return UnboundedReport(list(zip(ns.tolist(), vals)), bool(np.all(tail > 0)), bool(np.all(d > 0)),
                           float(max(vals)))


@dataclass
class AdmissibilityReport:
    A_table: dict  # (mu, nu) -> UltranormEstimate
    admissible: bool
    nonzero_witness: tuple | None
    witness_value: float | None
    verdict: str

    def rows(self, label=""):
        out = []
        for (mu, nu), est in sorted(self.A_table.items()):
            out.append({"label": label, "mu": mu, "nu": nu, "method": est.method, "value": est.value,
                        "exponent": est.exponent, "confident": est.confident})
        return out


def check_scale_admissible(f: Seq, p, r: Scale, mode: str = PROJECTIVE, mu_max: int = 2,
                           nu_max: int = 2, method: str = "auto", nmax: int | None = None) -> AdmissibilityReport:
    """All sampled ``A^mu_nu = limsup p^mu_nu(f_n)^{r_n}`` finite and one of them non-zero."""
    cls = classify(f, p, r, mode=mode, mu_max=mu_max, nu_max=nu_max, method=method, nmax=nmax)
    table = {(w.mu, w.nu): w.estimate for w in cls.witnesses}
    witness, value = None, None
    for key in sorted(table):
        est = table[key]
        if est.confident and est.is_finite and est.value > 0:
            witness, value = key, est.value
            break
    admissible = cls.verdict == MODERATE and witness is not None
    return AdmissibilityReport(table, admissible, witness, value, cls.verdict)


def weak_pairing(delta: Seq, psi, n: int) -> float:
    """``int delta_n(x) psi(x) dx`` for a callable or an expression ``psi`` in ``x``."""
    if isinstance(psi, (str, Expr)):
        e = parse_expr(psi, ("x",)) if isinstance(psi, str) else psi
        psi = lambda x, e=e: float(evaluate(e, x=x))  # noqa: E731
    elem = delta.element(n)
    reach = _reach(delta) / n

    def integrand(x):
        return float(elem.jets(np.array([x]), 0)[0][0]) * psi(x)

    val, _ = quad(integrand, -reach, reach, points=[0.0], epsabs=1e-13, epsrel=1e-12, limit=400)
    return val


def _reach(delta: Seq) -> float:
    cert = delta.cert
    if isinstance(cert, DilationCertificate):
        return max(abs(cert.extent[0]), abs(cert.extent[1]))
    return 12.0


def weak_convergence_errors(delta: Seq, psi, ns=(10, 100, 1000)) -> dict:
    """``n -> |int delta_n psi - psi(0)|``."""
    if isinstance(psi, str):
        psi = parse_expr(psi, ("x",))
    at0 = float(evaluate(psi, x=0.0)) if isinstance(psi, Expr) else float(psi(0.0))
    return {int(n): abs(weak_pairing(delta, psi, int(n)) - at0) for n in ns}


@dataclass
class BoundednessReplay:
    bound: float  # C: the largest sampled sup of delta_n
    peak: float  # psi(0) = C + 1
    mass: float  # int psi < 1
    small_pairings: dict = field(default_factory=dict)  # n -> |int delta_n psi|, n in the sampled range
    large_pairings: dict = field(default_factory=dict)

    @property
    def bounded_on_samples(self) -> bool:
        return all(v <= self.bound for v in self.small_pairings.values())

    @property
    def contradiction(self) -> bool:
        """Large ``n`` push the pairing past ``C`` towards ``psi(0) = C + 1``."""
        return self.bounded_on_samples and all(v > self.bound for v in self.large_pairings.values())


def replay_unboundedness(delta: Seq, sample_ns=(1, 2, 4, 8, 16), large_ns=(10**4, 10**5), mu: int = 1) -> BoundednessReplay:
    """Replay the argument that a delta sequence is not bounded.

    With ``C`` the largest sup seen on ``sample_ns``, take the triangle
    ``psi`` of height ``C + 1`` and half-width ``1 / (2(C + 1))`` (mass 1/2).
    A bound ``sup |delta_n| <= C`` forces ``|int delta_n psi| <= C``, but
    the pairings tend to ``psi(0) = C + 1``.
    """
    p = SupDerivatives()
    C = max(seminorm_eval(p, mu, 0, delta.element(int(n))) for n in sample_ns)
    h = C + 1.0
    w = 1.0 / (2.0 * h)

    def psi(x):
        return max(0.0, h * (1.0 - abs(x) / w))

    out = BoundednessReplay(C, h, h * w)
    for n in sample_ns:
        out.small_pairings[int(n)] = abs(_pair_compact(delta, psi, int(n), w))
    for n in large_ns:
        out.large_pairings[int(n)] = abs(_pair_compact(delta, psi, int(n), w))
    return out


def _pair_compact(delta, psi, n, w):
    elem = delta.element(n)
    reach = min(w, _reach(delta) / n)

    def integrand(x):
        return float(elem.jets(np.array([x]), 0)[0][0]) * psi(x)

    val, _ = quad(integrand, -reach, reach, points=[0.0], epsabs=1e-12, epsrel=1e-12, limit=400)
    return val


__all__ = [
    "AdmissibilityReport", "BoundednessReplay", "ConvolutionFunction", "Mollifier", "PiecewiseTable",
    "UnboundedReport", "adaptive_simpson", "bump", "check_scale_admissible", "check_unbounded",
    "embed_by_convolution", "embed_constant", "gaussian", "heaviside", "make_delta", "mollifier",
    "replay_unboundedness", "weak_convergence_errors", "weak_pairing",
]

