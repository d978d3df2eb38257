"""Completeness by diagonalisation, on finite data.

Given members ``f^0, ..., f^{M-1}`` of a (presumed) Cauchy sequence:

1. :func:`extract_moduli` finds strictly increasing member indices
   ``m_mu`` with ``d_mu(f^k, f^l) < 2^-mu`` for ``k, l >= m_mu`` and strictly
   increasing thresholds ``n_mu`` past which
   ``p^mu_nu(f^k_n - f^l_n)^{r_n} < 2^-mu`` for ``k, l in [m_mu, m_{mu+1}]``;
2. :func:`diagonalize` glues ``fbar_n = f^{m_mu}_n`` on ``[n_mu, n_{mu+1})``;
3. :func:`verify_convergence` measures ``d(f^m, fbar)``.

Levels are ``mu = 1 .. mu_max``; the last bracket uses members up to
``M - 1``.  Nothing here proves convergence: the reports say what held on
the members and samples supplied.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from .scale import Scale, geometric_schedule
from .seqspace.seq import Seq, piecewise, seq_sub
from .seqspace.ultranorm import INDUCTIVE, PROJECTIVE, UltranormEstimate, distance

MONOTONE_TOL = 1e-2
SAMPLE_POINTS = 48


class NotCauchy(ValueError):
    """No valid modulus at level ``mu``; ``(k, l)`` is the offending pair."""

    def __init__(self, mu: int, k: int, l: int, value: float | None = None):  # noqa: E741
        self.mu, self.k, self.l, self.value = mu, k, l, value
        extra = "" if value is None else f" (value {value:.4g} >= {2.0 ** -mu:.4g})"
        super().__init__(f"not Cauchy at level mu={mu}: members {k} and {l}{extra}")


@dataclass
class CauchyData:
    members: list
    p: object
    r: Scale
    mu_max: int
    m: dict  # mu -> member index
    n: dict  # mu -> sample threshold
    nu: dict  # mu -> seminorm order used at level mu
    mode: str = PROJECTIVE
    samples: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def eps(self, mu: int) -> float:
        return 2.0 ** -mu

    def upper(self, mu: int) -> int:
        """Last member index of the bracket at level ``mu``."""
        return self.m[mu + 1] if mu < self.mu_max else len(self.members) - 1

    def level_at(self, n: int) -> int | None:
        """``sup {mu : n_mu <= n}`` or None before the first threshold."""
        best = None
        for mu in range(1, self.mu_max + 1):
            if self.n[mu] <= n:
                best = mu
        return best

    def rows(self):
        return [{"mu": mu, "m": self.m[mu], "n": self.n[mu], "nu": self.nu[mu], "eps": self.eps(mu)}
                for mu in range(1, self.mu_max + 1)]


def _log_values(f: Seq, g: Seq, p, mu, nu, r, ns) -> np.ndarray:
    """``r_n ln p^mu_nu(f_n - g_n)`` on the samples."""
    h = seq_sub(f, g)
    out = []
    for n in ns:
        L = h.log_seminorm(p, mu, nu, int(n))
        out.append(-math.inf if L == -math.inf else r(int(n)) * L)
    return np.array(out)


def extract_moduli(members, p, r: Scale, mu_max: int = 4, sample_budget: int | None = None,
                   mode: str = PROJECTIVE, nu_max: int = 4, method: str = "auto",
                   nmax: int | None = None) -> CauchyData:
    """Greedy moduli ``(m_mu, n_mu)`` for ``mu = 1 .. mu_max``.

    Projective mode uses ``p^mu_mu``.  Inductive mode picks ``nu(mu)`` as the
    smallest order, not below ``nu(mu - 1)``, that admits a modulus, so that
    the chosen seminorms increase with ``mu``.

    Raises
    ------
    NotCauchy
        When no member index works at some level.
    """
    members = list(members)
    M = len(members)
    if M < 3:
        raise ValueError("need at least three members")
    if mode not in (PROJECTIVE, INDUCTIVE):
        raise ValueError(f"unknown mode {mode!r}")
    budget = int(sample_budget or nmax or config.default_nmax())
    start = max([f.start for f in members] + [r.domain_start, 2])
    ns = geometric_schedule(start, budget, SAMPLE_POINTS)
    dist_cache: dict = {}

    def d(k, l, mu, nu):  # noqa: E741
        key = (min(k, l), max(k, l), mu, nu)
        if key not in dist_cache:
            if k == l:
                dist_cache[key] = UltranormEstimate(0.0, "exact", -math.inf)
            else:
                dist_cache[key] = distance(members[k], members[l], p, mu, nu, r, method=method, nmax=nmax)
        return dist_cache[key]

    def modulus(mu, nu, lowest):
        """Smallest m >= lowest with every pair beyond m closer than 2^-mu."""
        worst = None
        for m in range(lowest, M - 1):
            bad = None
            for k in range(m, M):
                for l in range(k + 1, M):  # noqa: E741
                    est = d(k, l, mu, nu)
                    if not est.confident or not est.value < 2.0 ** -mu:
                        bad = (k, l, est.value)
                        break
                if bad:
                    break
            if bad is None:
                return m, None
            worst = worst or bad
        return None, worst

    m_of, nu_of = {}, {}
    lowest, nu_floor = 0, 0
    for mu in range(1, mu_max + 1):
        if mode == PROJECTIVE:
            candidates = [mu]
        else:
            candidates = list(range(nu_floor, nu_max + 1))
        found, worst = None, None
        for nu in candidates:
            m, bad = modulus(mu, nu, lowest)
            if m is not None:
                found = (m, nu)
                break
            worst = worst or bad
        if found is None:
            if worst is None:
                worst = (max(lowest, M - 2), M - 1, None)
            raise NotCauchy(mu, worst[0], worst[1], worst[2])
        m_of[mu], nu_of[mu] = found
        lowest, nu_floor = found[0] + 1, found[1]

    cd = CauchyData(members, p, r, mu_max, m_of, {}, nu_of, mode, ns)
    prev_index = -1
    for mu in range(1, mu_max + 1):
        lo, hi = m_of[mu], cd.upper(mu)
        worst = np.full(len(ns), -np.inf)
        pair_of = [None] * len(ns)
        for k in range(lo, hi + 1):
            for l in range(k + 1, hi + 1):  # noqa: E741
                vals = _log_values(members[k], members[l], p, mu, nu_of[mu], r, ns)
                for i, v in enumerate(vals):
                    if v > worst[i]:
                        worst[i], pair_of[i] = v, (k, l)
        suffix = np.maximum.accumulate(worst[::-1])[::-1]
        ok = np.nonzero(suffix < -mu * math.log(2.0))[0]
        ok = ok[ok > prev_index]
        if ok.size == 0:
            i = int(np.argmax(worst))
            k, l = pair_of[i] or (lo, hi)  # noqa: E741
            raise NotCauchy(mu, k, l, math.exp(worst[i]) if worst[i] > -np.inf else 0.0)
        prev_index = int(ok[0])
        cd.n[mu] = int(ns[prev_index])
    return cd


def diagonalize(cd: CauchyData, label: str = "fbar") -> Seq:
    """``fbar_n = f^{m_mu}_n`` for ``n`` in ``[n_mu, n_{mu+1})``."""
    brackets = [(cd.n[mu], cd.members[cd.m[mu]]) for mu in range(1, cd.mu_max + 1)]
    return piecewise(brackets, label=label)


@dataclass
class ConvergenceReport:
    distances: dict  # member index -> UltranormEstimate
    decreasing: bool
    final_distance: float
    bound: float
    within_bound: bool
    flagged: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.decreasing and self.within_bound

    def rows(self):
        return [{"member": m, "method": e.method, "exponent": e.exponent, "distance": e.value,
                 "flagged": m in self.flagged} for m, e in sorted(self.distances.items())]


def verify_convergence(cd: CauchyData, fbar: Seq, p=None, r: Scale | None = None,
                       mu_max: int | None = None, method: str = "tail",
                       nmax: int | None = None) -> ConvergenceReport:
    """Distances ``d(f^m, fbar)`` at the top level, their monotonicity and the final bound.

    Monotonicity is required over the members the diagonal actually uses
    (``m <= m_{mu_max}``); the bound ``2^(1-mu)`` is checked for every member
    from ``m_mu`` on, and the final distance (last member) must be below
    ``2^(1 - mu_max)``.
    """
    p = p or cd.p
    r = r or cd.r
    mu_max = mu_max or cd.mu_max
    mu_top, nu_top = mu_max, cd.nu[mu_max]
    dists = {m: distance(f, fbar, p, mu_top, nu_top, r, method=method, nmax=nmax)
             for m, f in enumerate(cd.members)}
    flagged, notes = [], []
    covered = [m for m in dists if m <= cd.m[mu_max]]
    decreasing = True
    for a, b in zip(covered, covered[1:]):
        da, db = dists[a], dists[b]
        if not (da.confident and db.confident) or db.value > da.value + MONOTONE_TOL:
            decreasing = False
            flagged.append(b)
            notes.append(f"d(f^{b}, fbar) = {db.value:.4g} exceeds d(f^{a}, fbar) = {da.value:.4g}")
    within = True
    for mu in range(1, mu_max + 1):
        bound = 2.0 ** (1 - mu)
        for m in range(cd.m[mu], len(cd.members)):
            if not dists[m].value < bound:
                within = False
                if m not in flagged:
                    flagged.append(m)
                notes.append(f"d(f^{m}, fbar) = {dists[m].value:.4g} not below 2^(1-{mu})")
    final = dists[len(cd.members) - 1].value
    bound = 2.0 ** (1 - mu_max)
    within &= final < bound
    return ConvergenceReport(dists, decreasing, final, bound, within, sorted(flagged), notes)


@dataclass
class BoundChainReport:
    rows: list  # (member, mu, largest sampled value, bound, ok)

    @property
    def ok(self) -> bool:
        return all(r[-1] for r in self.rows)


def replay_bound_chain(cd: CauchyData, fbar: Seq) -> BoundChainReport:
    """``p(f^m_n - fbar_n)^{r_n} < 2^(1-mu)`` on sampled ``n >= n_mu`` with ``mu`` the last level of ``m``."""
    out = []
    for m, f in enumerate(cd.members):
        levels = [mu for mu in range(1, cd.mu_max + 1) if cd.m[mu] <= m]
        if not levels:
            continue
        mu = levels[-1]
        ns = cd.samples[cd.samples >= cd.n[mu]]
        if ns.size == 0:
            continue
        vals = _log_values(f, fbar, cd.p, mu, cd.nu[mu], cd.r, ns)
        top = float(np.max(vals))
        largest = 0.0 if top == -math.inf else math.exp(top)
        bound = 2.0 ** (1 - mu)
        out.append((m, mu, largest, bound, largest < bound))
    return BoundChainReport(out)


__all__ = [
    "BoundChainReport", "CauchyData", "ConvergenceReport", "NotCauchy", "diagonalize",
    "extract_moduli", "replay_bound_chain", "verify_convergence",
]
