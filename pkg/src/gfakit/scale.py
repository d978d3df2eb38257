"""Weight sequences ``r = (r_n)`` and families of them.

A scale exponentiates seminorm values: the ultranorm of a sequence is
``limsup p(f_n) ** r_n``.  Logarithms are natural logarithms throughout;
another base rescales every exponent by the same factor and leaves the
moderate/negligible split unchanged.

Besides pointwise evaluation each scale may report the growth order of
``1 / r_n`` as ``(K, (tau, beta, gamma))`` meaning
``1 / r_n ~ K * n**tau * (ln n)**beta * (ln ln n)**gamma``.  Closed-form
ultranorms use this; scales without it fall back to tail fitting.

All checks here sample a finite schedule.  They can find violations, they
cannot prove monotonicity: a clean report means "no violation found".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .basealg.expr import Expr, N, as_expr, evaluate, evaluate_mp, free_symbols, parse_expr, to_source

SINGULAR_LOG = 1e-12
DENSE_EGOROV_WINDOW = 64


class ScaleError(ValueError):
    pass


class ScaleDomainError(ScaleError):
    """``n`` lies below the scale's ``domain_start``."""


class SingularityError(ScaleError):
    """``ln a_m(n)`` vanishes, so ``1 / |ln a_m(n)|`` is undefined."""


def _round_order(order) -> tuple:
    return tuple(round(float(v), 12) + 0.0 for v in order)


def geometric_schedule(start: int, nmax: int, points: int = 24) -> np.ndarray:
    """``points`` integers spaced geometrically on ``[start, nmax]`` (duplicates dropped)."""
    start = max(int(start), 1)
    nmax = int(nmax)
    if nmax <= start:
        return np.array([start], dtype=np.int64)
    grid = np.unique(np.rint(np.geomspace(start, nmax, points)).astype(np.int64))
    return grid


def doubling_schedule(start: int, nmax: int) -> np.ndarray:
    """``{2^k >= start} ∪ {nmax}``; the sampling grid of the validity checks."""
    k = max(1, math.ceil(math.log2(max(start, 2))))
    vals = []
    while 2**k < nmax:
        vals.append(2**k)
        k += 1
    vals.append(int(nmax))
    if start < vals[0] and start >= 2:
        vals.insert(0, int(start))
    return np.array(sorted(set(v for v in vals if v >= start)), dtype=np.int64)


class Scale:
    """Base class.  Subclasses are frozen dataclasses."""

    domain_start: int = 1
    eventually_zero = False

    def __call__(self, n: int) -> float:
        return scale_eval(self, n)

    def _value(self, n: int) -> float:
        raise NotImplementedError

    def inverse_order(self):
        return None

    def tail_schedule(self, nmax: int, points: int = 24) -> np.ndarray:
        return geometric_schedule(max(self.domain_start, 2), nmax, points)

    @property
    def label(self) -> str:
        return self.to_source()

    def to_source(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class LogScale(Scale):
    """``r_n = 1 / ln n``: the Colombeau scale."""

    domain_start: int = 2

    def _value(self, n):
        return 1.0 / math.log(n)

    def inverse_order(self):
        return 1.0, (0.0, 1.0, 0.0)

    def to_source(self):
        return "log"


@dataclass(frozen=True)
class PowerScale(Scale):
    """``r_n = n^(-1/m)``: the ultracomplex scales."""

    m: float
    domain_start: int = 1

    def __post_init__(self):
        if not self.m > 0:
            raise ScaleError("power scale parameter must be positive")

    def _value(self, n):
        return float(n) ** (-1.0 / self.m)

    def inverse_order(self):
        return 1.0, _round_order((1.0 / self.m, 0.0, 0.0))

    def to_source(self):
        return f"power {_num(self.m)}"


@dataclass(frozen=True)
class EgorovScale(Scale):
    """``r_n = 1`` for ``n <= m`` and ``0`` afterwards."""

    m: int
    domain_start: int = 1
    eventually_zero = True

    def __post_init__(self):
        if self.m < 0 or int(self.m) != self.m:
            raise ScaleError("egorov scale parameter must be a natural number")

    def _value(self, n):
        return 1.0 if n <= self.m else 0.0

    def tail_schedule(self, nmax, points=24):
        # head terms n <= m never enter; the window starts right after m
        dense = np.arange(self.m + 1, self.m + 1 + DENSE_EGOROV_WINDOW, dtype=np.int64)
        sparse = geometric_schedule(self.m + 1, max(nmax, self.m + 2), points)
        return np.unique(np.concatenate([dense, sparse]))

    def to_source(self):
        return f"egorov {int(self.m)}"


@dataclass(frozen=True)
class AsymptoticFamily:
    """A family ``m -> (n -> a_m(n))`` indexed by integers.

    ``generator`` is an expression in ``n`` and ``m`` or a callable
    ``(m, n) -> value``.  Values are computed with mpmath so that
    ``a_m(n) = exp(-m n)`` stays representable in log form.  ``log_order``
    optionally maps ``m`` to the growth order of ``|ln a_m(n)|`` in the
    format of :meth:`Scale.inverse_order`.
    """

    generator: Expr | Callable
    log_order: Callable | None = None
    label: str = "a"

    def log_abs(self, m: int, n: int) -> float:
        import mpmath

        with mpmath.workdps(30):
            if isinstance(self.generator, Expr):
                v = evaluate_mp(self.generator, n=n, m=m)
            else:
                v = self.generator(m, n)
            if v == 0:
                return -math.inf
            return float(mpmath.log(abs(v)))

    def __call__(self, m: int, n: int) -> float:
        return math.exp(self.log_abs(m, n))

    def to_source(self) -> str:
        if isinstance(self.generator, Expr):
            return f'"{to_source(self.generator)}"'
        return self.label


def power_asymptotic_family() -> AsymptoticFamily:
    """``a_m(n) = n^(-m)``; ``|ln a_m(n)| = |m| ln n``."""
    return AsymptoticFamily(parse_expr("n^(-m)"), lambda m: (abs(m), (0.0, 1.0, 0.0)), "n^(-m)")


def exponential_asymptotic_family() -> AsymptoticFamily:
    """``a_m(n) = exp(-m n)``; ``|ln a_m(n)| = |m| n``."""
    return AsymptoticFamily(parse_expr("exp(-m*n)"), lambda m: (abs(m), (1.0, 0.0, 0.0)), "exp(-m*n)")


@dataclass(frozen=True)
class AsymptoticScale(Scale):
    """``r_n = 1 / |ln a_m(n)|`` for a member of an asymptotic family."""

    family: AsymptoticFamily
    m: int
    domain_start: int = 2

    def _value(self, n):
        la = self.family.log_abs(self.m, n)
        if abs(la) < SINGULAR_LOG:
            raise SingularityError(f"ln a_{self.m}({n}) vanishes")
        return 1.0 / abs(la)

    def inverse_order(self):
        if self.family.log_order is None:
            return None
        K, order = self.family.log_order(self.m)
        if K == 0:
            return None
        return float(K), _round_order(order)

    def to_source(self):
        return f"asymptotic {self.family.to_source()} m {int(self.m)}"


@dataclass(frozen=True)
class CustomScale(Scale):
    """``r_n`` given by an expression in ``n``.

    ``inverse`` optionally declares the growth order of ``1 / r_n``.
    """

    expr: Expr
    domain_start: int = 1
    inverse: tuple | None = None

    def __post_init__(self):
        extra = free_symbols(self.expr) - {"n"}
        if extra:
            raise ScaleError(f"custom scale may only mention n, found {sorted(extra)}")

    def _value(self, n):
        return float(evaluate(self.expr, n=float(n)))

    def inverse_order(self):
        if self.inverse is None:
            return None
        K, order = self.inverse
        return float(K), _round_order(order)

    def to_source(self):
        src = f'custom "{to_source(self.expr)}"'
        if self.domain_start != 1:
            src += f" from {self.domain_start}"
        return src


def custom_scale(text: str, start: int = 1, inverse=None) -> CustomScale:
    return CustomScale(parse_expr(text, symbols=("n",)), start, inverse)


def _num(v) -> str:
    v = float(v)
    return str(int(v)) if v == int(v) else repr(v)


def scale_eval(s: Scale, n: int) -> float:
    """``r_n`` for the given scale.

    Raises
    ------
    ScaleDomainError
        ``n`` is below ``s.domain_start``.
    SingularityError
        For asymptotic scales whose logarithm vanishes at ``n``.
    """
    if n < s.domain_start:
        raise ScaleDomainError(f"n={n} is below the domain start {s.domain_start} of {s.label}")
    return s._value(n)


# ---------------------------------------------------------------------------
# validity checks

@dataclass
class ScaleReport:
    positive: bool
    decreasing: bool
    tends_to_zero: bool
    samples: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.positive and self.decreasing and self.tends_to_zero

    def __str__(self):
        verdict = "no violation found" if self.ok else "; ".join(self.violations)
        return f"positive={self.positive} decreasing={self.decreasing} tends_to_zero={self.tends_to_zero} ({verdict})"


def check_scale_valid(s: Scale, sample_budget: int, tail_threshold: float = 0.75) -> ScaleReport:
    """Falsification check of "positive, decreasing to zero" on ``{2, 4, 8, ..., budget}``."""
    if sample_budget < 8:
        raise ValueError("sample_budget must be at least 8")
    ns = doubling_schedule(s.domain_start, sample_budget)
    vals = np.array([scale_eval(s, int(n)) for n in ns])
    report = ScaleReport(True, True, True, samples=list(zip(ns.tolist(), vals.tolist())))
    if np.any(vals <= 0):
        report.positive = False
        report.violations.append(f"non-positive value at n={int(ns[np.argmax(vals <= 0)])}")
    ups = np.nonzero(np.diff(vals) > 0)[0]
    if ups.size:
        report.decreasing = False
        report.violations.append(f"increase between n={int(ns[ups[0]])} and n={int(ns[ups[0] + 1])}")
    w = max(1, len(vals) // 3)
    first, last = vals[:w], vals[-w:]
    if not (last.max() < first.min() and last.max() < tail_threshold):
        report.tends_to_zero = False
        report.violations.append(
            f"tail max {last.max():.4g} not below head min {first.min():.4g} and threshold {tail_threshold}"
        )
    return report


# ---------------------------------------------------------------------------
# families

INCREASING = "IncreasingInM"
DECREASING = "DecreasingInM"
NEITHER = "Neither"


@dataclass(frozen=True)
class ScaleFamily:
    """An indexed family of scales ``m -> r^m``.

    ``direction`` is the declared monotonicity in ``m``; use
    :func:`family_direction` to check it on samples.
    """

    member: Callable[[int], Scale]
    levels: tuple = tuple(range(1, 7))
    direction: str | None = None
    label: str = "family"

    def __call__(self, m: int) -> Scale:
        return self.member(m)

    def members(self, m_budget: int | None = None) -> list:
        levels = self.levels if m_budget is None else [m for m in self.levels if m <= m_budget]
        return [(m, self.member(m)) for m in levels]


def power_family(levels: Iterable[int] = range(1, 7)) -> ScaleFamily:
    return ScaleFamily(PowerScale, tuple(levels), INCREASING, "power")


def egorov_family(levels: Iterable[int] = range(1, 7)) -> ScaleFamily:
    return ScaleFamily(EgorovScale, tuple(levels), INCREASING, "egorov")


def asymptotic_family(fam: AsymptoticFamily, levels: Iterable[int] = range(1, 7), direction=None) -> ScaleFamily:
    def member(m, fam=fam):
        return AsymptoticScale(fam, m)

    return ScaleFamily(member, tuple(levels), direction, f"asymptotic {fam.to_source()}")


def log_family(levels: Iterable[int] = range(1, 7)) -> ScaleFamily:
    """``r^m_n = 1 / (m ln n)``, generated from ``a_m(n) = n^(-m)``."""
    return asymptotic_family(power_asymptotic_family(), levels, DECREASING)


def family_direction(fam: ScaleFamily, sample_budget: int = 1024, tol: float = 0.0) -> str:
    """Classify pointwise monotonicity in ``m`` on a sampled ``(m, n)`` grid."""
    levels = sorted(fam.levels)
    if len(levels) < 2:
        raise ValueError("a family needs at least two members")
    ns = np.unique(np.concatenate([np.arange(1, 17), doubling_schedule(2, max(sample_budget, 32))]))
    inc_violation = dec_violation = False
    scales = {m: fam(m) for m in levels}
    for m0, m1 in zip(levels, levels[1:]):
        s0, s1 = scales[m0], scales[m1]
        for n in ns:
            n = int(n)
            if n < s0.domain_start or n < s1.domain_start:
                continue
            try:
                r0, r1 = s0(n), s1(n)
            except SingularityError:
                continue
            if r1 < r0 - tol:
                inc_violation = True
            if r1 > r0 + tol:
                dec_violation = True
    if not inc_violation:
        return INCREASING
    if not dec_violation:
        return DECREASING
    return NEITHER


@dataclass
class AsymptoticReport:
    little_o_chain: bool
    inverse_symmetry: bool
    square_domination: bool
    witnesses: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.little_o_chain and self.inverse_symmetry and self.square_domination


def _tends_to_minus_inf(logs: np.ndarray, threshold: float) -> bool:
    """Log-ratios on a tail: non-increasing and finally below ``threshold``."""
    return bool(np.all(np.diff(logs) <= 1e-12) and logs[-1] < threshold)


def check_asymptotic_family(
    fam: AsymptoticFamily,
    m_range: Sequence[int],
    sample_budget: int = 10**6,
    M_range: Sequence[int] | None = None,
    ratio_threshold: float = 1e-3,
) -> AsymptoticReport:
    """Sampled checks of ``a_{m+1} = o(a_m)``, ``a_{-m} = 1/a_m`` and ``∃M: a_M = o(a_m^2)``.

    The ``o(.)`` relations are checked on log-ratios over the tail of a
    geometric schedule: they must decrease and end below
    ``ln(ratio_threshold)``.  ``M`` is searched in ``M_range`` (default
    ``min(m_range) .. 2*max(m_range)+1``) separately for each ``m``.
    """
    m_range = sorted(m_range)
    if len(m_range) < 3:
        raise ValueError("m_range must span at least three indices")
    if M_range is None:
        M_range = range(min(m_range), 2 * max(m_range) + 2)
    ns = geometric_schedule(2, sample_budget, 24)[-8:]
    logs = {}

    def la(m):
        if m not in logs:
            logs[m] = np.array([fam.log_abs(m, int(n)) for n in ns])
        return logs[m]

    thr = math.log(ratio_threshold)
    report = AsymptoticReport(True, True, True)
    for m in m_range[:-1]:
        if not _tends_to_minus_inf(la(m + 1) - la(m), thr):
            report.little_o_chain = False
            report.violations.append(f"a_{m + 1} is not o(a_{m})")
            break
    for m in m_range:
        if not np.allclose(la(m), -la(-m), rtol=1e-9, atol=1e-9):
            report.inverse_symmetry = False
            report.violations.append(f"a_{-m} != 1/a_{m}")
            break
    for m in m_range:
        found = None
        for M in M_range:
            if _tends_to_minus_inf(la(M) - 2 * la(m), thr):
                found = M
                break
        report.witnesses[m] = found
        if found is None:
            report.square_domination = False
            report.violations.append(f"no M in range with a_M = o(a_{m}^2)")
    return report
