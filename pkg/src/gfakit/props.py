"""Seeded randomized property suites on certificate-backed sequences.

Each suite draws exact monomial sums (so every certificate is honest) and
checks one family of identities or inequalities in the exponent domain,
``ln <<f>>``.  A suite passes when it records zero violations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basealg.seminorm import AbsoluteValue
from .scale import LogScale, PowerScale
from .seqspace.monomial import MonoSum
from .seqspace.seq import Seq
from .seqspace.ultranorm import EQUAL, NEGLIGIBLE, classify, equal_in_quotient, ultranorm

DEFAULT_SEED = 42
EXP_TOL = 1e-12
TAILFIT_TOL = 1e-2
# sub-leading terms such as n^(a - 1/2) ln n still move r_n ln|f_n| by ~1e-2
# around n = 1e6; scalar monomial sums are cheap at any n, so sample further out
TAILFIT_NMAX = 10**10

DEFAULT_COUNTS = {
    "ultrametric": 1000,
    "submult": 1000,
    "scalar": 1000,
    "tailfit": 50,
    "ideal": 500,
    "ring": 100,
}
SUITE_NAMES = tuple(DEFAULT_COUNTS)


@dataclass
class PropertyRow:
    suite: str
    prop: str
    instances: int = 0
    violations: int = 0
    vacuous: int = 0
    worst: float = 0.0  # largest excess seen (exponent units)
    examples: list = field(default_factory=list)

    def record(self, ok: bool, excess: float = 0.0, example=None):
        self.instances += 1
        if excess > self.worst:
            self.worst = excess
        if not ok:
            self.violations += 1
            if example is not None and len(self.examples) < 3:
                self.examples.append(example)

    def as_dict(self):
        return {"suite": self.suite, "property": self.prop, "instances": self.instances,
                "violations": self.violations, "vacuous": self.vacuous, "worst": self.worst,
                "status": "pass" if self.violations == 0 else "FAIL"}


@dataclass
class SuiteResult:
    name: str
    seed: int
    rows: list

    @property
    def passed(self) -> bool:
        return all(r.violations == 0 for r in self.rows)


# ---------------------------------------------------------------------------
# generators

def _coef(rng) -> float:
    return float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 3.0))


def random_moderate(rng, terms: int | None = None, decay: bool = True) -> MonoSum:
    """Sum of ``c n^a (ln n)^b``; optionally a negligible ``exp(-s n^t)`` term."""
    k = terms or int(rng.integers(1, 4))
    out = MonoSum()
    for _ in range(k):
        a = float(rng.integers(-6, 7)) / 2
        b = float(rng.integers(0, 2))
        out = out + MonoSum.monomial(_coef(rng), a=a, b=b)
    if decay and rng.random() < 0.3:
        out = out + MonoSum.monomial(_coef(rng), a=float(rng.integers(0, 4)), s=-float(rng.uniform(0.5, 2)),
                                     t=float(rng.choice([0.5, 1.0])))
    if out.is_zero:
        out = MonoSum.monomial(1.0)
    return out


def random_growth(rng) -> MonoSum:
    """Moderate part plus, sometimes, a super-polynomial factor of either sign."""
    m = random_moderate(rng)
    if rng.random() < 0.2:
        s = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 1.5))
        m = m * MonoSum.monomial(1.0, s=s, t=float(rng.choice([0.5, 1.0])))
    return m


def random_negligible(rng) -> MonoSum:
    """``moderate * exp(-s n^t)``: negligible under the log scale."""
    decay = MonoSum.monomial(1.0, s=-float(rng.uniform(0.2, 2.0)), t=float(rng.choice([0.5, 1.0])))
    return random_moderate(rng, decay=False) * decay


def _scales(rng):
    return [LogScale(), PowerScale(1.0), PowerScale(2.0)][int(rng.integers(0, 3))]


def _exponent(m: MonoSum, r, method="closed") -> float:
    return ultranorm(Seq.from_mono(m), ABS, 1, 0, r, method=method).exponent


ABS = AbsoluteValue()


# ---------------------------------------------------------------------------
# suites

def suite_ultrametric(count: int, rng) -> list:
    row = PropertyRow("ultrametric", "<<f+g>> <= max(<<f>>, <<g>>)")
    neg = PropertyRow("ultrametric", "<<-f>> = <<f>>")
    for _ in range(count):
        f, g, r = random_growth(rng), random_growth(rng), _scales(rng)
        ef, eg, es = _exponent(f, r), _exponent(g, r), _exponent(f + g, r)
        bound = max(ef, eg)
        excess = 0.0 if es == -math.inf or bound == math.inf else es - bound
        row.record(excess <= EXP_TOL, excess, (f, g, r))
        en = _exponent(-f, r)
        neg.record(en == ef, 0.0 if en == ef else abs(en - ef))
    return [row, neg]


def suite_submult(count: int, rng) -> list:
    row = PropertyRow("submult", "<<fg>> <= <<f>><<g>>")
    for _ in range(count):
        f, g, r = random_growth(rng), random_growth(rng), _scales(rng)
        ef, eg, ep = _exponent(f, r), _exponent(g, r), _exponent(f * g, r)
        if {ef, eg} == {math.inf, -math.inf}:
            row.vacuous += 1
            continue
        bound = ef + eg
        excess = 0.0 if ep == -math.inf or bound == math.inf else ep - bound
        row.record(excess <= EXP_TOL, excess, (f, g, r))
    return [row]


def suite_scalar(count: int, rng) -> list:
    row = PropertyRow("scalar", "<<lambda f>> = <<f>> for lambda != 0")
    for _ in range(count):
        f, r = random_growth(rng), _scales(rng)
        lam = _coef(rng) * 10.0 ** float(rng.uniform(-6, 6))
        ef, el = _exponent(f, r), _exponent(f.scale(lam), r)
        same = ef == el or abs(ef - el) <= EXP_TOL
        row.record(same, 0.0 if ef == el else abs(ef - el), (f, lam, r))
    return [row]


def suite_tailfit(count: int, rng, nmax: int = TAILFIT_NMAX) -> list:
    row = PropertyRow("tailfit", "TailFit agrees with the closed form")
    r = LogScale()
    for _ in range(count):
        f = random_moderate(rng, decay=False)
        ec = _exponent(f, r)
        est = ultranorm(Seq.from_mono(f), ABS, 1, 0, r, method="tail", nmax=nmax)
        err = abs(est.exponent - ec) if math.isfinite(ec) and math.isfinite(est.exponent) else \
            (0.0 if est.exponent == ec else math.inf)
        row.record(est.confident and err <= TAILFIT_TOL, err, f)
    return [row]


def suite_ideal(count: int, rng) -> list:
    row = PropertyRow("ideal", "k negligible, f moderate => k f negligible")
    r = LogScale()
    for _ in range(count):
        k, f = random_negligible(rng), random_moderate(rng)
        verdict = classify(Seq.from_mono(k * f), ABS, r).verdict
        row.record(verdict == NEGLIGIBLE, 0.0, (k, f))
    return [row]


def suite_ring(count: int, rng) -> list:
    r = LogScale()
    rows = {name: PropertyRow("ring", name) for name in
            ("distributivity", "associativity (+)", "associativity (*)", "commutativity")}
    for _ in range(count):
        f, g, h = (Seq.from_mono(random_moderate(rng)) for _ in range(3))
        checks = {
            "distributivity": ((f + g) * h, f * h + g * h),
            "associativity (+)": ((f + g) + h, f + (g + h)),
            "associativity (*)": ((f * g) * h, f * (g * h)),
            "commutativity": (f * g, g * f),
        }
        for name, (lhs, rhs) in checks.items():
            rows[name].record(equal_in_quotient(lhs, rhs, ABS, r) == EQUAL, 0.0, (f, g, h))
    return list(rows.values())


SUITES = {
    "ultrametric": suite_ultrametric,
    "submult": suite_submult,
    "scalar": suite_scalar,
    "tailfit": suite_tailfit,
    "ideal": suite_ideal,
    "ring": suite_ring,
}


def run_suite(name: str, count: int | None = None, seed: int = DEFAULT_SEED) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown property suite {name!r}")
    rng = np.random.default_rng([seed, SUITE_NAMES.index(name)])
    rows = SUITES[name](count if count is not None else DEFAULT_COUNTS[name], rng)
    return SuiteResult(name, seed, rows)


def run_suites(names="all", count: int | None = None, seed: int = DEFAULT_SEED) -> list:
    if names == "all":
        names = SUITE_NAMES
    elif isinstance(names, str):
        names = (names,)
    return [run_suite(n, count, seed) for n in names]


__all__ = [
    "DEFAULT_COUNTS", "DEFAULT_SEED", "PropertyRow", "SUITES", "SUITE_NAMES", "SuiteResult",
    "random_growth", "random_moderate", "random_negligible", "run_suite", "run_suites",
]
