"""The ultranorm ``limsup p(f_n)^{r_n}`` and what is built on it.

Everything is computed in the log domain, ``e_n = r_n ln p(f_n)``, and the
reported value is ``exp(e_inf)``.

Two strategies:

``ClosedForm``
    The sequence carries a growth certificate and the scale knows the order
    of ``1 / r_n``.  The limit is read off by comparing the leading
    certificate term with that order.

``TailFit``
    ``e_n`` is sampled on a geometric schedule.  A growth test on the last
    window (do the slopes ``dL/d(1/r)`` of ``L = ln p(f_n)`` keep growing?)
    decides divergence to ``+-inf``; otherwise ``e_n`` is fitted by
    least squares on ``{1, r_n, r_n ln(1/r_n)}`` and the constant term is the
    estimate.  The extra column absorbs ``(ln n)^b`` factors under the
    logarithmic scale, where ``r ln(1/r) = ln ln n / ln n``.

Verdicts drawn from finite samples are conservative: anything the fit is
unsure about becomes ``Inconclusive`` rather than a guess.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .. import config
from ..basealg.seminorm import ABSOLUTE
from ..scale import Scale, geometric_schedule
from .seq import Seq, seq_sub

CLOSED_FORM = "ClosedForm"
TAIL_FIT = "TailFit"

PROJECTIVE = "projective"
INDUCTIVE = "inductive"

MODERATE = "Moderate"
NEGLIGIBLE = "Negligible"
DIVERGENT = "Divergent"
INCONCLUSIVE = "Inconclusive"

EQUAL = "Equal"
NOT_EQUAL = "NotEqual"

CSV_HEADER = "# gfa-kit v1"
CSV_COLUMNS = ["label", "mode", "mu", "nu", "method", "exponent", "value", "residual", "verdict"]


@dataclass(frozen=True)
class UltranormEstimate:
    value: float
    method: str
    exponent: float
    residual: float = 0.0
    confident: bool = True
    note: str = ""

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    @classmethod
    def from_exponent(cls, e: float, method: str, **kw) -> "UltranormEstimate":
        if e == -math.inf:
            v = 0.0
        elif e > 709.0:
            v = math.inf
        else:
            v = math.exp(e)
        return cls(v, method, e, **kw)

    def __str__(self):
        tag = "" if self.confident else " (low confidence)"
        return f"{self.value:.6g} [{self.method}, exponent {self.exponent:.6g}]{tag}"


# ---------------------------------------------------------------------------
# closed form

def closed_form_exponent(cert, r: Scale):
    """``lim r_n ln p(f_n)`` from a certificate, or None when no rule applies."""
    if cert is None:
        return None
    if r.eventually_zero:
        # c^0 = 1 for c != 0; a zero certificate does not say where the zeros start
        return None if cert.zero else 0.0
    if cert.zero:
        return -math.inf
    inv = r.inverse_order()
    if inv is None:
        return None
    K, order = inv
    dom = cert.dominant()
    if dom is None:
        return 0.0
    o, c = dom
    if o > tuple(order):
        return math.inf if c > 0 else -math.inf
    if o == tuple(order):
        return c / K
    return 0.0


# ---------------------------------------------------------------------------
# tail fitting

def _samples(f: Seq, p, mu, nu, ns):
    return np.array([f.log_seminorm(p, mu, nu, int(n)) for n in ns], dtype=float)


def _egorov_fit(f, p, mu, nu, r, nmax) -> UltranormEstimate:
    ns = r.tail_schedule(nmax, config.TAIL_POINTS)
    ns = ns[ns >= f.start]
    L = _samples(f, p, mu, nu, ns)
    if np.all(L == -np.inf):
        return UltranormEstimate(0.0, TAIL_FIT, -math.inf, note=f"zero on all {len(ns)} samples beyond m")
    first = int(ns[np.argmax(L > -np.inf)])
    return UltranormEstimate(1.0, TAIL_FIT, 0.0, note=f"non-zero at n={first}")


def tail_fit(f: Seq, p, mu: int, nu: int, r: Scale, nmax: int | None = None) -> UltranormEstimate:
    """Estimate the ultranorm from samples of ``e_n = r_n ln p(f_n)``."""
    nmax = int(nmax or config.default_nmax())
    if r.eventually_zero:
        return _egorov_fit(f, p, mu, nu, r, nmax)
    start = max(f.start, r.domain_start, 2)
    ns = geometric_schedule(start, nmax, config.TAIL_POINTS)
    L = _samples(f, p, mu, nu, ns)
    w = slice(-config.TAIL_WINDOW, None)
    Lw = L[w]
    if np.all(L == -np.inf):
        return UltranormEstimate(0.0, TAIL_FIT, -math.inf, note="zero on every sample")
    if np.all(Lw == -np.inf):
        return UltranormEstimate(0.0, TAIL_FIT, -math.inf, note="eventually zero")
    if np.all(Lw == np.inf):
        return UltranormEstimate(math.inf, TAIL_FIT, math.inf, note="seminorm overflows")
    if not np.all(np.isfinite(Lw)):
        return UltranormEstimate(math.nan, TAIL_FIT, math.nan, confident=False,
                                 note="zeros or overflow interleaved in the tail")
    rr = np.array([r(int(n)) for n in ns[w]], dtype=float)
    e = rr * Lw
    if not np.all(np.diff(rr) < 0):
        return _settled_tail(e)
    d = np.diff(e)
    increasing, decreasing = bool(np.all(d > 0)), bool(np.all(d < 0))

    # growth test: local slopes dL / d(1/r) settle to the exponent when it is
    # finite and keep growing like a power of 1/r when it is not
    u = 1.0 / rr
    slopes = np.diff(Lw) / np.diff(u)
    kappa = -math.inf
    if np.all(slopes > 0) or np.all(slopes < 0):
        mid = np.log(0.5 * (u[1:] + u[:-1]))
        kappa = float(np.polyfit(mid, np.log(np.abs(slopes)), 1)[0])
    if kappa >= config.DIVERGENT_SLOPE and (increasing or decreasing):
        if increasing and e[-1] > 0:
            return UltranormEstimate(math.inf, TAIL_FIT, math.inf, note=f"growth slope {kappa:.3g}")
        if decreasing and e[-1] < config.NEGLIGIBLE_EXPONENT:
            return UltranormEstimate(0.0, TAIL_FIT, -math.inf, note=f"decay slope {kappa:.3g}")
        return UltranormEstimate(math.nan, TAIL_FIT, math.nan, confident=False,
                                 note=f"diverging exponents not yet decisive (slope {kappa:.3g})")
    alpha, resid = _fit(rr, e)
    scale = max(1.0, abs(alpha))
    confident = resid <= config.RESIDUAL_TOL * scale
    note = "" if confident else "tail does not settle"
    if confident and config.CONVERGENT_SLOPE < abs(kappa) < config.DIVERGENT_SLOPE:
        # slopes still moving: either a sub-leading ln term (fits the model,
        # same limit one window earlier) or a slow drift such as exp((ln n)^1.1)
        drift = _window_drift(ns, L, r, alpha)
        if not drift <= config.DRIFT_TOL * scale:
            confident = False
            note = f"growth slope {kappa:.3g}, limit drifts by {drift:.3g} between windows"
    return UltranormEstimate.from_exponent(alpha, TAIL_FIT, residual=resid, confident=confident, note=note)


def _settled_tail(e) -> UltranormEstimate:
    """Scales that do not tend to zero (e.g. constant ``r``): the fit basis is
    degenerate, so only a tail that has already settled is trusted."""
    spread = float(np.max(e) - np.min(e))
    alpha = float(e[-1])
    confident = spread <= config.RESIDUAL_TOL * max(1.0, abs(alpha))
    note = "" if confident else f"scale does not tend to zero; tail spread {spread:.3g}"
    return UltranormEstimate.from_exponent(alpha, TAIL_FIT, residual=spread, confident=confident, note=note)


def _window_drift(ns, L, r, alpha) -> float:
    prev = slice(-2 * config.TAIL_WINDOW, -config.TAIL_WINDOW)
    if len(ns) < 2 * config.TAIL_WINDOW or not np.all(np.isfinite(L[prev])):
        return math.nan
    rp = np.array([r(int(n)) for n in ns[prev]], dtype=float)
    return abs(alpha - _fit(rp, rp * L[prev])[0])


def _fit(rr, e):
    """Least squares on ``e = alpha + c r + b r ln(1/r)``; returns ``(alpha, rms residual)``."""
    A = np.column_stack([np.ones_like(rr), rr, rr * np.log(1.0 / rr)])
    coef, *_ = np.linalg.lstsq(A, e, rcond=None)
    return float(coef[0]), float(np.sqrt(np.mean((A @ coef - e) ** 2)))


# ---------------------------------------------------------------------------
# the ultranorm

def ultranorm(f: Seq, p, mu: int, nu: int, r: Scale, method: str = "auto",
              nmax: int | None = None) -> UltranormEstimate:
    """``limsup_n p^mu_nu(f_n)^{r_n}``.

    ``method`` is ``"auto"`` (closed form when available), ``"closed"`` or
    ``"tail"``.
    """
    if method not in ("auto", "closed", "tail"):
        raise ValueError(f"unknown method {method!r}")
    if method != "tail":
        e = closed_form_exponent(f.certificate_for(p, mu, nu), r)
        if e is not None:
            return UltranormEstimate.from_exponent(e, CLOSED_FORM)
        if method == "closed":
            raise ValueError(f"no closed form for {f.label} under {r.label}")
    return tail_fit(f, p, mu, nu, r, nmax)


def distance(f: Seq, g: Seq, p, mu: int, nu: int, r: Scale, **kw) -> UltranormEstimate:
    """``d(f, g)``: the ultranorm of ``f - g``."""
    return ultranorm(seq_sub(f, g), p, mu, nu, r, **kw)


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class Witness:
    mu: int
    nu: int
    estimate: UltranormEstimate


@dataclass
class Classification:
    verdict: str
    mode: str
    witnesses: list = field(default_factory=list)
    label: str = ""
    chosen: dict = field(default_factory=dict)  # inductive mode: mu -> witnessing nu

    def estimate(self, mu: int, nu: int) -> UltranormEstimate:
        for w in self.witnesses:
            if (w.mu, w.nu) == (mu, nu):
                return w.estimate
        raise KeyError((mu, nu))

    def rows(self) -> list:
        out = []
        for w in self.witnesses:
            est = w.estimate
            out.append({
                "label": self.label, "mode": self.mode, "mu": w.mu, "nu": w.nu, "method": est.method,
                "exponent": _fmt(est.exponent), "value": _fmt(est.value), "residual": _fmt(est.residual),
                "verdict": self.verdict,
            })
        return out

    def to_csv(self) -> str:
        return rows_to_csv(self.rows(), CSV_COLUMNS)


def _fmt(v: float) -> str:
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return f"{v:.12g}"


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _index_grid(f: Seq, p, mu_max, nu_max):
    if f.is_scalar or not p.indexed:
        return [1], [0]
    return list(range(1, mu_max + 1)), list(range(0, nu_max + 1))


def classify(f: Seq, p, r: Scale, mode: str = PROJECTIVE, mu_max: int = 4, nu_max: int = 4,
             method: str = "auto", nmax: int | None = None) -> Classification:
    """Moderate / Negligible / Divergent / Inconclusive over the index budget.

    Scalar sequences and index-free seminorms use the single index ``(1, 0)``.
    """
    if mode not in (PROJECTIVE, INDUCTIVE):
        raise ValueError(f"unknown mode {mode!r}")
    if p.kind == ABSOLUTE and not f.is_scalar:
        raise TypeError("absolute value seminorm applies to scalar sequences")
    mus, nus = _index_grid(f, p, mu_max, nu_max)
    table = {}
    for mu in mus:
        for nu in nus:
            table[mu, nu] = ultranorm(f, p, mu, nu, r, method=method, nmax=nmax)
    witnesses = [Witness(mu, nu, est) for (mu, nu), est in table.items()]
    out = Classification(INCONCLUSIVE, mode, witnesses, f.label)
    if mode == PROJECTIVE:
        ests = list(table.values())
        if any(e.confident and e.value == math.inf for e in ests):
            out.verdict = DIVERGENT
        elif not all(e.confident for e in ests):
            out.verdict = INCONCLUSIVE
        elif all(e.is_zero for e in ests):
            out.verdict = NEGLIGIBLE
        else:
            out.verdict = MODERATE
        return out
    finite_all, zero_all, certainly_nonzero = True, True, False
    for mu in mus:
        row = [table[mu, nu] for nu in nus]
        if all(e.confident and e.value == math.inf for e in row):
            out.verdict = DIVERGENT
            out.chosen = {}
            return out
        fin = [nu for nu, e in zip(nus, row) if e.confident and e.is_finite]
        zer = [nu for nu, e in zip(nus, row) if e.confident and e.is_zero]
        if zer:
            out.chosen[mu] = zer[0]
        elif fin:
            out.chosen[mu] = fin[0]
        finite_all &= bool(fin)
        zero_all &= bool(zer)
        if all(e.confident and e.value > 0 for e in row):
            certainly_nonzero = True
    if zero_all:
        out.verdict = NEGLIGIBLE
    elif finite_all and certainly_nonzero:
        out.verdict = MODERATE
    return out


def equal_in_quotient(f: Seq, g: Seq, p, r: Scale, mode: str = PROJECTIVE, mu_max: int = 4,
                      nu_max: int = 4, method: str = "auto", nmax: int | None = None) -> str:
    """``Equal`` iff ``f - g`` is negligible; ``NotEqual`` on a confident non-zero witness."""
    kw = dict(mode=mode, mu_max=mu_max, nu_max=nu_max, method=method, nmax=nmax)
    for h in (f, g):
        if classify(h, p, r, **kw).verdict not in (MODERATE, NEGLIGIBLE):
            return INCONCLUSIVE
    diff = classify(seq_sub(f, g), p, r, **kw)
    if diff.verdict == NEGLIGIBLE:
        return EQUAL
    if mode == PROJECTIVE:
        if any(w.estimate.confident and w.estimate.value > 0 for w in diff.witnesses):
            return NOT_EQUAL
        return INCONCLUSIVE
    by_mu: dict = {}
    for w in diff.witnesses:
        by_mu.setdefault(w.mu, []).append(w.estimate)
    if any(all(e.confident and e.value > 0 for e in row) for row in by_mu.values()):
        return NOT_EQUAL
    return INCONCLUSIVE


__all__ = [
    "CLOSED_FORM", "CSV_COLUMNS", "CSV_HEADER", "DIVERGENT", "EQUAL", "INCONCLUSIVE", "INDUCTIVE",
    "MODERATE", "NEGLIGIBLE", "NOT_EQUAL", "PROJECTIVE", "TAIL_FIT", "Classification",
    "UltranormEstimate", "Witness", "classify", "closed_form_exponent", "distance",
    "equal_in_quotient", "rows_to_csv", "tail_fit", "ultranorm",
]
