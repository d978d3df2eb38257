"""Acceptance checks, one test per criterion.

Each test records a one-line PASS/FAIL verdict; the lines are printed in
the terminal summary (see conftest.py) and when this file is run directly:

    python3 tests/test_acceptance.py
"""
import filecmp
import math
import os
import pathlib
import shutil
import tempfile
import time

import mpmath
import numpy as np
import pytest

from gfakit.basealg.expr import evaluate_mp
from gfakit.basealg.jet import jet_eval
from gfakit.basealg.seminorm import AbsoluteValue, SupDerivatives
from gfakit.complete import diagonalize, extract_moduli, verify_convergence
from gfakit.dsl import format_spec, parse_spec, run_source
from gfakit.embed import check_scale_admissible, check_unbounded, make_delta
from gfakit.props import random_growth, random_moderate, run_suite
from gfakit.scale import LogScale, custom_scale, egorov_family, log_family, power_family
from gfakit.scalefam import family_ideal_check, family_membership
from gfakit.seqspace import (
    MODERATE, NEGLIGIBLE, NOT_EQUAL, GrowthCertificate, MonoSum, Seq, classify, distance,
    equal_in_quotient, tail_fit, ultranorm, zero_seq,
)

from _trees import random_tree

ROOT = pathlib.Path(__file__).resolve().parents[1]
ABS = AbsoluteValue()
SUP = SupDerivatives()
LOG = LogScale()
SEED = 20240601

RESULTS: dict = {}


def record(n: int, title: str, ok: bool, detail: str = ""):
    line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    RESULTS[n] = line
    print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def _default_budget(monkeypatch):
    monkeypatch.delenv("GFA_NMAX", raising=False)


def test_criterion_01_closed_form_powers():
    t0 = time.perf_counter()
    errs = []
    for k in (1, 2, 3):
        est = ultranorm(Seq.scalar(f"n^{k}", certificate=GrowthCertificate.of(a=k)), ABS, 1, 0, LOG)
        errs.append(abs(est.value - math.e**k) / math.e**k)
    elapsed = time.perf_counter() - t0
    ok = max(errs) <= 1e-9 and elapsed < 1.0
    record(1, "ultranorm of n^k under the log scale is e^k", ok,
           f"max rel err {max(errs):.1e}, {elapsed:.3f} s")


def test_criterion_02_discrete_metric():
    rng = np.random.default_rng(SEED + 2)
    bad = 0
    for _ in range(100):
        a, b = rng.normal(scale=10, size=2)
        if a == b:
            b += 1.0
        if distance(Seq.constant(a), Seq.constant(b), ABS, 1, 0, LOG).value != 1.0:
            bad += 1
        if distance(Seq.constant(a), Seq.constant(a), ABS, 1, 0, LOG).value != 0.0:
            bad += 1
    record(2, "constant embeddings: distance 1 if distinct, 0 if equal", bad == 0, f"{bad} violations")


def test_criterion_03_ultranorm_properties():
    rows = []
    for name, count in (("ultrametric", 1000), ("submult", 1000), ("scalar", 1000), ("tailfit", 50)):
        rows += run_suite(name, count, seed=SEED).rows
    bad = [r for r in rows if r.violations or r.instances == 0]
    summary = ", ".join(f"{r.suite}:{r.instances - r.violations}/{r.instances}" for r in rows)
    record(3, "ultrametric, submultiplicative, scalar-invariant; TailFit within 1e-2", not bad, summary)


def test_criterion_04_ideal_and_ring():
    rows = run_suite("ideal", 500, seed=SEED).rows + run_suite("ring", 100, seed=SEED).rows
    bad = [r for r in rows if r.violations]
    summary = ", ".join(f"{r.prop}:{r.instances - r.violations}/{r.instances}" for r in rows)
    record(4, "negligible times moderate is negligible; ring axioms in the quotient", not bad, summary)


def test_criterion_05_delta_embedding():
    d = make_delta()
    cls = classify(d, SUP, LOG, mu_max=1, nu_max=2, method="tail", nmax=10**5)
    exps = [cls.estimate(1, nu).exponent for nu in (0, 1, 2)]
    close = all(abs(e - want) <= 1e-2 for e, want in zip(exps, (1, 2, 3)))
    strict = check_unbounded(d, budget=10**5).strict_everywhere
    slow = custom_scale("1/log(log(n))", start=16)
    refused = not check_scale_admissible(d, SUP, slow, mu_max=1, nu_max=1, nmax=10**5).admissible
    ok = cls.verdict == MODERATE and close and strict and refused
    record(5, "gaussian delta: exponents 1, 2, 3; unbounded; 1/lnln n not admissible", ok,
           f"exponents {', '.join(f'{e:.5f}' for e in exps)}; strict={strict}; lnln refused={refused}")


def test_criterion_06_delta_squared():
    d = make_delta()
    d2 = d * d
    cls = classify(d2, SUP, LOG, mu_max=1, nu_max=0, method="tail", nmax=10**5)
    val = cls.estimate(1, 0).value
    neq = equal_in_quotient(d2, zero_seq("function"), SUP, LOG, mu_max=1, nu_max=0, nmax=10**5)
    ok = cls.verdict == MODERATE and abs(val - math.e**2) <= 1e-2 and neq == NOT_EQUAL
    record(6, "delta squared is moderate, value e^2, non-zero in the quotient", ok,
           f"value {val:.5f} vs {math.e**2:.5f}; {neq}")


def test_criterion_07_completeness():
    t0 = time.perf_counter()
    members, acc = [], MonoSum.monomial(1.0)
    for m in range(8):
        members.append(Seq.from_mono(acc, f"f{m}"))
        acc = acc + MonoSum.monomial(1.0, a=-(m + 1))
    cd = extract_moduli(members, ABS, LOG, mu_max=4, nmax=10**5)
    rep = verify_convergence(cd, diagonalize(cd), nmax=10**5)
    elapsed = time.perf_counter() - t0
    ok = rep.decreasing and rep.final_distance < 2.0**-3 and elapsed < 10
    record(7, "diagonal of a Cauchy family: monotone distances, final < 1/8", ok,
           f"m={[cd.m[mu] for mu in range(1, 5)]}, final {rep.final_distance:.4f}, {elapsed:.2f} s")


def _random_values(rng, stationary):
    head = rng.normal(size=int(rng.integers(0, 6))).tolist()
    if stationary:
        return Seq.from_values(head), len(head)
    tail = Seq.from_mono(random_moderate(rng, decay=False))
    return Seq.from_values(head, tail), None


def test_criterion_08_scale_families():
    rng = np.random.default_rng(SEED + 8)
    egorov = egorov_family(range(1, 7))
    wrong = 0
    for _ in range(200):
        stationary = bool(rng.random() < 0.5)
        f, _ = _random_values(rng, stationary)
        v = family_membership(f, egorov, ABS, m_budget=6, nmax=4096)
        wrong += v.in_F is not True or v.in_K is not stationary

    powers = power_family(range(1, 5))
    tame = Seq.scalar("exp(log(n)^2)", certificate=GrowthCertificate.from_terms({(0, 2): 1.0}))
    v1 = family_membership(tame, powers, ABS)
    v2 = family_membership(Seq.monomial(1, s=1, t=0.5), powers, ABS)
    v3 = family_membership(Seq.scalar("1/n"), egorov, ABS, nmax=4096)
    worked = (v1.in_F is True and v2.in_F is False and v2.F_level == 3
              and abs(v2.levels[2].value - math.e) < 1e-12 and v3.in_F is True and v3.in_K is False)

    failures = {"power": 0, "log": 0, "egorov": 0}
    logs = log_family(range(1, 5))
    for _ in range(200):
        k = Seq.from_mono(random_moderate(rng, decay=False) *
                          MonoSum.monomial(1.0, s=-float(rng.uniform(0.2, 2)), t=float(rng.choice([0.5, 1.0]))))
        f = Seq.from_mono(random_moderate(rng, decay=False))
        f_sub = f * Seq.monomial(1.0, s=float(rng.uniform(0.1, 2)), t=0.2)
        chk = family_ideal_check(k, f_sub, powers, ABS)
        failures["power"] += not (chk.ok and not chk.flagged)
        chk = family_ideal_check(k, f, logs, ABS)
        failures["log"] += not (chk.ok and not chk.flagged)
        ks, _ = _random_values(rng, True)
        anything = Seq.from_mono(random_growth(rng))
        chk = family_ideal_check(ks, anything, egorov, ABS, nmax=4096)
        failures["egorov"] += not (chk.ok and not chk.flagged)
    ok = wrong == 0 and worked and not any(failures.values())
    record(8, "Egorov ideal = stationary zeros; worked power examples; ideal checks", ok,
           f"egorov mismatches {wrong}/200; worked examples {worked}; ideal failures {failures}")


def test_criterion_09_jets_against_differences():
    rng = np.random.default_rng(SEED + 9)
    worst, bad = 0.0, 0
    with mpmath.workdps(50):
        h = mpmath.mpf("1e-15")
        for _ in range(500):
            e = random_tree(rng, depth=4)
            x0 = float(rng.uniform(-1.5, 1.5))
            order = int(rng.integers(1, 3))
            got = jet_eval(e, x0, order=order).values
            xm = mpmath.mpf(x0)
            f = lambda t: evaluate_mp(e, x=t)  # noqa: E731
            fd = [(f(xm + h) - f(xm - h)) / (2 * h), (f(xm + h) - 2 * f(xm) + f(xm - h)) / h**2]
            for k in range(1, order + 1):
                want = float(fd[k - 1])
                err = abs(got[k] - want)
                tol = max(1e-6 * abs(want), 1e-9)
                worst = max(worst, err / max(abs(want), 1e-9))
                bad += err > tol
    record(9, "jets of order 1-2 match central differences (rtol 1e-6)", bad == 0,
           f"{bad} mismatches over 500 trees, worst scaled error {worst:.1e}")


def _same(a, b):
    names = sorted(p.name for p in a.iterdir())
    if names != sorted(p.name for p in b.iterdir()):
        return False
    _, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    return not mismatch and not errors


def test_criterion_10_dsl_golden_files():
    specs = sorted((ROOT / "specs").glob("*.gfa"))
    notes = []
    tmp = pathlib.Path(tempfile.mkdtemp())
    try:
        for path in specs:
            src = path.read_text()
            spec = parse_spec(src)
            if parse_spec(format_spec(spec)) != spec:
                notes.append(f"{path.stem}: round trip")
            first, second = tmp / f"{path.stem}-1", tmp / f"{path.stem}-2"
            run_source(src, first)
            run_source(src, second, parallel=True)
            if not _same(first, ROOT / "tests" / "golden" / path.stem):
                notes.append(f"{path.stem}: golden")
            if not _same(first, second):
                notes.append(f"{path.stem}: rerun")
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    record(10, "bundled specs: printer round trip, golden CSVs, byte-identical reruns", not notes,
           "; ".join(notes) or f"{len(specs)} specs")


if __name__ == "__main__":
    os.environ.pop("GFA_NMAX", None)
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
