"""Algebras built from families of scales ``(r^m)_m``.

For a family increasing in ``m`` the moderate sequences are those moderate
at every level and the negligible ones are negligible at some level; for a
decreasing family the two quantifiers swap.  Every verdict here is relative
to the finite level budget: "in F" means no falsifying level was found.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .embed import check_scale_admissible
from .scale import DECREASING, INCREASING, ScaleFamily, family_direction
from .seqspace.seq import Seq, seq_mul
from .seqspace.ultranorm import PROJECTIVE, ultranorm

DEFAULT_M_BUDGET = 6


@dataclass
class FamilyVerdict:
    """Membership of one sequence in the family algebra.

    ``in_F``/``in_K`` are ``None`` when an undecided level prevents a verdict.
    ``F_level`` is the falsifying level when ``in_F`` is False and, in the
    decreasing case, the witnessing level when it is True; ``K_level`` the
    same for the ideal.
    """

    in_F: bool | None
    F_level: int | None
    in_K: bool | None
    K_level: int | None
    case: str
    levels: dict = field(default_factory=dict)  # m -> UltranormEstimate

    @property
    def conclusive(self) -> bool:
        return self.in_F is not None and self.in_K is not None

    def rows(self, label=""):
        out = []
        for m, est in sorted(self.levels.items()):
            out.append({"label": label, "case": self.case, "m": m, "method": est.method,
                        "exponent": est.exponent, "value": est.value,
                        "in_F": self.in_F, "F_level": self.F_level,
                        "in_K": self.in_K, "K_level": self.K_level})
        return out


def _case(fam: ScaleFamily) -> str:
    case = fam.direction or family_direction(fam)
    if case not in (INCREASING, DECREASING):
        raise ValueError(f"family {fam.label} is not monotone in m")
    return case


def _first(levels, pred):
    for m, est in levels.items():
        if est.confident and pred(est):
            return m
    return None


def _all(levels, pred) -> bool:
    return all(est.confident and pred(est) for est in levels.values())


def family_membership(f: Seq, fam: ScaleFamily, p, mu: int = 1, nu: int = 0,
                      m_budget: int = DEFAULT_M_BUDGET, method: str = "auto",
                      nmax: int | None = None) -> FamilyVerdict:
    """Decide ``f in F`` and ``f in K`` over the levels ``m <= m_budget``."""
    case = _case(fam)
    levels = {m: ultranorm(f, p, mu, nu, r, method=method, nmax=nmax) for m, r in fam.members(m_budget)}
    if not levels:
        raise ValueError("no family level within the budget")
    finite = lambda e: e.is_finite  # noqa: E731
    infinite = lambda e: e.value == math.inf  # noqa: E731
    zero = lambda e: e.is_zero  # noqa: E731
    nonzero = lambda e: e.value > 0  # noqa: E731

    if case == INCREASING:
        fals = _first(levels, infinite)
        in_F = False if fals is not None else (True if _all(levels, finite) else None)
        wit = _first(levels, zero)
        in_K = True if wit is not None else (False if _all(levels, nonzero) else None)
        return FamilyVerdict(in_F, fals, in_K, wit, case, levels)

    wit = _first(levels, finite)
    in_F = True if wit is not None else (False if _all(levels, infinite) else None)
    fals = _first(levels, nonzero)
    in_K = False if fals is not None else (True if _all(levels, zero) else None)
    return FamilyVerdict(in_F, wit, in_K, fals, case, levels)


@dataclass
class IdealCheck:
    ok: bool | None
    flagged: bool  # the pair (k, f) was not confirmed to lie in K x F
    level: int | None  # the level used by the bookkeeping
    k_verdict: FamilyVerdict
    f_verdict: FamilyVerdict
    product_verdict: FamilyVerdict
    note: str = ""

    def __bool__(self):
        return bool(self.ok)


def family_ideal_check(k: Seq, f: Seq, fam: ScaleFamily, p, mu: int = 1, nu: int = 0,
                       m_budget: int = DEFAULT_M_BUDGET, method: str = "auto",
                       nmax: int | None = None) -> IdealCheck:
    """Check that ``k * f`` lies in the ideal when ``k`` does and ``f`` is moderate.

    Increasing families: ``k`` is negligible at some level ``m`` and ``f`` is
    moderate at that same level, so the product is negligible there.
    Decreasing families: ``k`` is negligible at every level and ``f`` is
    moderate from its witnessing level ``m'`` on; levels below ``m'`` are
    reached through ``K_{m'} subset K_m``.
    """
    kw = dict(mu=mu, nu=nu, m_budget=m_budget, method=method, nmax=nmax)
    vk = family_membership(k, fam, p, **kw)
    vf = family_membership(f, fam, p, **kw)
    vkf = family_membership(seq_mul(k, f), fam, p, **kw)
    flagged = not (vk.in_K is True and vf.in_F is True)
    if vk.case == INCREASING:
        level = vk.K_level
        at_level = vkf.levels.get(level) if level is not None else None
    else:
        level = vf.F_level
        at_level = vkf.levels.get(level) if level is not None else None
    if vkf.in_K is None:
        return IdealCheck(None, flagged, level, vk, vf, vkf, "product undecided")
    if flagged:
        # the claim says nothing about such pairs: pass, but report it
        note = "pair outside K x F; product in K" if vkf.in_K else "pair outside K x F (vacuous)"
        return IdealCheck(True, True, level, vk, vf, vkf, note)
    ok = bool(vkf.in_K) and (at_level is None or (at_level.confident and at_level.is_zero))
    return IdealCheck(ok, False, level, vk, vf, vkf)


@dataclass
class FamilyAdmissibility:
    m0: int | None
    reports: dict  # m -> AdmissibilityReport

    @property
    def admissible(self) -> bool:
        return self.m0 is not None


def family_admissible(f: Seq, fam: ScaleFamily, p, mode: str = PROJECTIVE, mu_max: int = 2,
                      nu_max: int = 2, m_budget: int = DEFAULT_M_BUDGET, method: str = "auto",
                      nmax: int | None = None) -> FamilyAdmissibility:
    """Search the smallest level ``m0`` at which the scale is admissible for ``f``."""
    reports = {}
    for m, r in fam.members(m_budget):
        rep = check_scale_admissible(f, p, r, mode=mode, mu_max=mu_max, nu_max=nu_max,
                                     method=method, nmax=nmax)
        reports[m] = rep
        if rep.admissible:
            return FamilyAdmissibility(m, reports)
    return FamilyAdmissibility(None, reports)


__all__ = [
    "DEFAULT_M_BUDGET", "FamilyAdmissibility", "FamilyVerdict", "IdealCheck", "family_admissible",
    "family_ideal_check", "family_membership",
]
