"""Execute a parsed spec and write one CSV per task plus ``summary.csv``.

Exit codes: 0 when every verdict is conclusive and every property suite
passed, 2 when some verdict is Inconclusive, 1 on a falsified property or a
runtime error.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .. import config
from ..basealg.expr import free_symbols, parse_expr
from ..basealg.seminorm import AbsoluteValue, SobolevSupDerivatives, SupDerivatives
from ..complete import NotCauchy, diagonalize, extract_moduli, replay_bound_chain, verify_convergence
from ..embed import (
    bump, check_scale_admissible, check_unbounded, embed_by_convolution, embed_constant, gaussian, make_delta,
)
from ..props import DEFAULT_SEED, run_suites
from ..scale import (
    DECREASING, INCREASING, AsymptoticFamily, AsymptoticScale, EgorovScale, LogScale, PowerScale,
    asymptotic_family, custom_scale, egorov_family, exponential_asymptotic_family, log_family,
    power_asymptotic_family, power_family,
)
from ..scalefam import family_ideal_check, family_membership
from ..seqspace.monomial import mono_from_expr
from ..seqspace.seq import FUNCTION, Seq, seq_add, seq_derivative, seq_mul, seq_sub
from ..seqspace.ultranorm import (
    INCONCLUSIVE, PROJECTIVE, classify, distance, equal_in_quotient, rows_to_csv,
)
from .syntax import (
    BinSeq, Delta, Deriv, EmbedConst, EmbedConv, FamilyDecl, Lit, MollifierDecl, Num, Ref, ScaleDecl,
    SeminormDecl, SeqDecl, Task, Values, parse_spec, split_args,
)

OK, INCONCLUSIVE_STATUS, FAIL, ERROR = "ok", "inconclusive", "fail", "error"
SUMMARY_COLUMNS = ["task", "kind", "target", "verdict", "status", "detail", "file"]


@dataclass
class TaskResult:
    index: int
    kind: str
    target: str
    verdict: str
    status: str
    detail: str
    filename: str
    csv: str

    def summary_row(self):
        return {"task": self.index, "kind": self.kind, "target": self.target, "verdict": self.verdict,
                "status": self.status, "detail": self.detail, "file": self.filename}


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return "" if v is None else v


def _csv(rows, columns) -> str:
    return rows_to_csv([{k: _cell(v) for k, v in r.items()} for r in rows], columns)


def pretty_value(v: float) -> str:
    """``e``, ``e^2``, ... when ``ln v`` is within 1e-2 of an integer."""
    if v is None:
        return ""
    if v == 0 or not math.isfinite(v):
        return _cell(float(v))
    k = math.log(v)
    if abs(k - round(k)) < 1e-2:
        k = int(round(k))
        return "1" if k == 0 else ("e" if k == 1 else f"e^{k}")
    return f"{v:.6g}"


# ---------------------------------------------------------------------------
# building objects from declarations

class Env:
    def __init__(self, spec):
        self.seqs, self.scales, self.families, self.mollifiers, self.seminorms = {}, {}, {}, {}, {}
        for stmt in spec.statements:
            if isinstance(stmt, SeqDecl):
                self.seqs[stmt.name] = self.build_seq(stmt.expr, stmt.cert).with_label(stmt.name)
            elif isinstance(stmt, ScaleDecl):
                self.scales[stmt.name] = self.build_scale(stmt)
            elif isinstance(stmt, FamilyDecl):
                self.families[stmt.name] = self.build_family(stmt)
            elif isinstance(stmt, MollifierDecl):
                self.mollifiers[stmt.name] = _mollifier(stmt.kind)
            elif isinstance(stmt, SeminormDecl):
                self.seminorms[stmt.name] = _seminorm(stmt)

    def mollifier(self, ref: Ref):
        return self.mollifiers.get(ref.name) or _mollifier(ref.name)

    def build_seq(self, e, cert=None) -> Seq:
        if isinstance(e, Lit):
            expr = parse_expr(e.text, ("x", "n"))
            if cert:
                return Seq.certified(expr, **dict(cert))
            if "x" in free_symbols(expr):
                return Seq.function(expr)
            mono = mono_from_expr(expr)
            return Seq.from_mono(mono) if mono is not None else Seq.scalar(expr)
        if cert:
            raise ValueError("certify applies to expression strings only")
        if isinstance(e, Num):
            return Seq.constant(e.value)
        if isinstance(e, Ref):
            return self.seqs[e.name]
        if isinstance(e, BinSeq):
            op = {"+": seq_add, "-": seq_sub, "*": seq_mul}[e.op]
            return op(self.build_seq(e.left), self.build_seq(e.right))
        if isinstance(e, Deriv):
            return seq_derivative(self.build_seq(e.arg))
        if isinstance(e, Delta):
            return make_delta(self.mollifier(e.mollifier))
        if isinstance(e, EmbedConst):
            return embed_constant(e.text.text)
        if isinstance(e, EmbedConv):
            src = e.source.text if isinstance(e.source, Lit) else "heaviside"
            return embed_by_convolution(src, self.mollifier(e.mollifier))
        if isinstance(e, Values):
            return Seq.from_values(e.values)
        raise TypeError(f"cannot build {e!r}")

    def build_scale(self, d: ScaleDecl):
        p = dict(d.params)
        if d.kind == "log":
            return LogScale()
        if d.kind == "power":
            return PowerScale(float(p["m"]))
        if d.kind == "egorov":
            return EgorovScale(int(p["m"]))
        if d.kind == "custom":
            return custom_scale(p["expr"].text, int(p.get("from", 1)))
        return AsymptoticScale(_generator(p["generator"]), int(p["m"]))

    def build_family(self, d: FamilyDecl):
        p = dict(d.params)
        levels = range(1, int(p.get("levels", 6)) + 1)
        if d.kind == "power":
            return power_family(levels)
        if d.kind == "egorov":
            return egorov_family(levels)
        if d.kind == "log":
            return log_family(levels)
        direction = p.get("direction")
        direction = {"increasing": INCREASING, "decreasing": DECREASING}[direction.name] if direction else None
        return asymptotic_family(_generator(p["generator"]), levels, direction)


def _mollifier(kind):
    return {"gaussian": gaussian, "bump": bump}[kind]()


def _seminorm(d: SeminormDecl):
    p = dict(d.params)
    density = int(p.get("density", 256))
    if d.kind == "abs":
        return AbsoluteValue()
    if d.kind == "sup":
        return SupDerivatives(density)
    return SobolevSupDerivatives(int(p["order"]), density=density)


def _generator(g):
    if isinstance(g, Lit):
        return AsymptoticFamily(parse_expr(g.text, ("n", "m")), None, g.text)
    return {"power": power_asymptotic_family, "exponential": exponential_asymptotic_family}[g.name]()


# ---------------------------------------------------------------------------
# tasks

class _Ctx:
    def __init__(self, env: Env, task: Task, seed: int, nmax: int | None):
        self.env, self.task = env, task
        self.opts = dict(task.options)
        self.args, mode = split_args(task)
        self.mode = mode or PROJECTIVE
        self.seed = int(self.opts.get("seed", seed))
        self.nmax = int(self.opts.get("nmax", nmax or config.default_nmax()))
        self.method = self.opts["method"].name if "method" in self.opts else "auto"

    def seq(self, i):
        return self.env.seqs[self.args[i].name]

    def seminorm(self, *seqs):
        ref = self.opts.get("seminorm")
        if ref is not None:
            if ref.name in self.env.seminorms:
                return self.env.seminorms[ref.name]
            return AbsoluteValue() if ref.name == "abs" else SupDerivatives()
        if any(s.kind == FUNCTION for s in seqs):
            return SupDerivatives()
        return AbsoluteValue()

    def int_opt(self, key, default):
        return int(self.opts.get(key, default))


def _task_classify(c: _Ctx):
    f, r = c.seq(0), c.env.scales[c.args[1].name]
    cls = classify(f, c.seminorm(f), r, mode=c.mode, mu_max=c.int_opt("mu", 2), nu_max=c.int_opt("nu", 2),
                   method=c.method, nmax=c.nmax)
    detail = ""
    if cls.chosen:
        detail = "chosen=" + " ".join(f"{mu}:{nu}" for mu, nu in sorted(cls.chosen.items()))
    status = INCONCLUSIVE_STATUS if cls.verdict == INCONCLUSIVE else OK
    return cls.verdict, status, detail, cls.to_csv()


DISTANCE_COLUMNS = ["label", "mu", "nu", "method", "exponent", "value", "residual", "confident"]


def _task_distance(c: _Ctx):
    f, g, r = c.seq(0), c.seq(1), c.env.scales[c.args[2].name]
    mu, nu = c.int_opt("mu", 1), c.int_opt("nu", 0)
    est = distance(f, g, c.seminorm(f, g), mu, nu, r, method=c.method, nmax=c.nmax)
    row = {"label": f"{f.label} - {g.label}", "mu": mu, "nu": nu, "method": est.method, "exponent": est.exponent,
           "value": est.value, "residual": est.residual, "confident": est.confident}
    status = OK if est.confident else INCONCLUSIVE_STATUS
    verdict = pretty_value(est.value) if est.confident else INCONCLUSIVE
    return verdict, status, f"value={_cell(est.value)}", _csv([row], DISTANCE_COLUMNS)


def _task_equal(c: _Ctx):
    f, g, r = c.seq(0), c.seq(1), c.env.scales[c.args[2].name]
    p = c.seminorm(f, g)
    kw = dict(mode=c.mode, mu_max=c.int_opt("mu", 2), nu_max=c.int_opt("nu", 2), method=c.method, nmax=c.nmax)
    verdict = equal_in_quotient(f, g, p, r, **kw)
    diff = classify(seq_sub(f, g), p, r, **kw)
    diff.label = f"{f.label} - {g.label}"
    status = INCONCLUSIVE_STATUS if verdict == INCONCLUSIVE else OK
    return verdict, status, f"difference={diff.verdict}", diff.to_csv()


EMBED_COLUMNS = ["check", "label", "mu", "nu", "n", "method", "exponent", "value", "confident"]


def _task_embed_check(c: _Ctx):
    f, r = c.seq(0), c.env.scales[c.args[1].name]
    p = c.seminorm(f)
    rep = check_scale_admissible(f, p, r, mode=c.mode, mu_max=c.int_opt("mu", 2), nu_max=c.int_opt("nu", 2),
                                 method=c.method, nmax=c.nmax)
    rows = [dict(row, check="ultranorm") for row in rep.rows(f.label)]
    detail = f"admissible={_cell(rep.admissible)}"
    if rep.nonzero_witness is not None:
        detail += f" witness={pretty_value(rep.witness_value)} at={rep.nonzero_witness[0]}:{rep.nonzero_witness[1]}"
    if f.kind == FUNCTION:
        unb = check_unbounded(f, p, budget=c.int_opt("budget", min(c.nmax, 10**5)))
        rows += [{"check": "sup", "label": f.label, "mu": 1, "nu": 0, "n": n, "value": v}
                 for n, v in unb.sup_values]
        detail += f" unbounded={_cell(unb.monotone_growth)} strict={_cell(unb.strict_everywhere)}"
    verdict = "admissible" if rep.admissible else "not admissible"
    status = INCONCLUSIVE_STATUS if rep.verdict == INCONCLUSIVE else OK
    return verdict, status, detail, _csv(rows, EMBED_COLUMNS)


FAMILY_COLUMNS = ["label", "case", "m", "method", "exponent", "value", "in_F", "F_level", "in_K", "K_level"]
IDEAL_COLUMNS = ["k", "f", "level", "flagged", "k_in_K", "f_in_F", "product_in_K", "ok", "note"]


def _task_family(c: _Ctx):
    fam = c.env.families[c.args[-1].name]
    kw = dict(mu=c.int_opt("mu", 1), nu=c.int_opt("nu", 0), m_budget=c.int_opt("m", 6), method=c.method, nmax=c.nmax)
    if len(c.args) == 3:
        k, f = c.seq(0), c.seq(1)
        chk = family_ideal_check(k, f, fam, c.seminorm(k, f), **kw)
        row = {"k": k.label, "f": f.label, "level": chk.level, "flagged": chk.flagged,
               "k_in_K": chk.k_verdict.in_K, "f_in_F": chk.f_verdict.in_F,
               "product_in_K": chk.product_verdict.in_K, "ok": chk.ok, "note": chk.note}
        status = {True: OK, False: FAIL, None: INCONCLUSIVE_STATUS}[chk.ok]
        verdict = {True: "ideal holds", False: "ideal violated", None: INCONCLUSIVE}[chk.ok]
        return verdict, status, f"flagged={_cell(chk.flagged)} level={_cell(chk.level)}", _csv([row], IDEAL_COLUMNS)
    f = c.seq(0)
    v = family_membership(f, fam, c.seminorm(f), **kw)
    verdict = f"in_F={_cell(v.in_F) or 'unknown'} in_K={_cell(v.in_K) or 'unknown'}"
    status = OK if v.conclusive else INCONCLUSIVE_STATUS
    detail = f"F_level={_cell(v.F_level)} K_level={_cell(v.K_level)}"
    return verdict, status, detail, _csv(v.rows(f.label), FAMILY_COLUMNS)


CAUCHY_COLUMNS = ["section", "mu", "member", "n", "nu", "value", "bound", "ok"]


def _task_cauchy(c: _Ctx):
    members = [c.env.seqs[ref.name] for ref in c.opts["members"]]
    r = c.env.scales[c.opts["scale"].name]
    p = c.seminorm(*members)
    mu_max = c.int_opt("mu_max", 4)
    try:
        cd = extract_moduli(members, p, r, mu_max=mu_max, mode=c.mode, method=c.method, nmax=c.nmax)
    except NotCauchy as exc:
        row = {"section": "falsifier", "mu": exc.mu, "member": f"{exc.k}:{exc.l}", "value": exc.value,
               "bound": 2.0 ** -exc.mu, "ok": False}
        return "NotCauchy", OK, str(exc), _csv([row], CAUCHY_COLUMNS)
    fbar = diagonalize(cd)
    rep = verify_convergence(cd, fbar, nmax=c.nmax)
    chain = replay_bound_chain(cd, fbar)
    rows = [{"section": "modulus", "mu": mu, "member": cd.m[mu], "n": cd.n[mu], "nu": cd.nu[mu],
             "bound": cd.eps(mu), "ok": True} for mu in range(1, mu_max + 1)]
    rows += [{"section": "distance", "member": m, "value": est.value, "ok": m not in rep.flagged}
             for m, est in sorted(rep.distances.items())]
    rows += [{"section": "chain", "mu": mu, "member": m, "value": v, "bound": b, "ok": ok}
             for m, mu, v, b, ok in chain.rows]
    good = rep.ok and chain.ok
    detail = f"final={_cell(rep.final_distance)} bound={_cell(rep.bound)} decreasing={_cell(rep.decreasing)}"
    return ("Converged" if good else "NotConverged"), (OK if good else FAIL), detail, _csv(rows, CAUCHY_COLUMNS)


PROPS_COLUMNS = ["suite", "property", "instances", "violations", "vacuous", "worst", "status"]


def _task_props(c: _Ctx):
    suite = c.opts["suite"].name if "suite" in c.opts else "all"
    count = c.opts.get("count")
    results = run_suites(suite, count, c.seed)
    rows = [row.as_dict() for res in results for row in res.rows]
    passed = all(res.passed for res in results)
    total = sum(r["instances"] for r in rows)
    bad = sum(r["violations"] for r in rows)
    return ("pass" if passed else "FAIL"), (OK if passed else FAIL), \
        f"seed={c.seed} instances={total} violations={bad}", _csv(rows, PROPS_COLUMNS)


HANDLERS = {
    "classify": _task_classify, "distance": _task_distance, "equal": _task_equal,
    "embed-check": _task_embed_check, "family": _task_family, "cauchy": _task_cauchy,
    "verify-properties": _task_props,
}


def _target(t: Task) -> str:
    if t.kind == "cauchy":
        members = dict(t.options).get("members", ())
        return "[" + " ".join(m.name for m in members) + "]"
    if t.kind == "verify-properties":
        suite = dict(t.options).get("suite")
        return suite.name if suite is not None else "all"
    return " ".join(a.name for a in t.args)


def run_task(env: Env, index: int, task: Task, seed: int = DEFAULT_SEED, nmax: int | None = None) -> TaskResult:
    filename = f"{index:02d}-{task.kind}.csv"
    try:
        verdict, status, detail, text = HANDLERS[task.kind](_Ctx(env, task, seed, nmax))
    except Exception as exc:  # reported in the summary, exit code 1
        verdict, status, detail = "Error", ERROR, f"{type(exc).__name__}: {exc}"
        text = _csv([{"error": detail}], ["error"])
    return TaskResult(index, task.kind, _target(task), verdict, status, detail, filename, text)


def _run_in_worker(source: str, index: int, seed: int, nmax):
    spec = parse_spec(source)
    return run_task(Env(spec), index, spec.tasks[index - 1], seed, nmax)


def exit_code(results) -> int:
    statuses = {r.status for r in results}
    if statuses & {FAIL, ERROR}:
        return 1
    if INCONCLUSIVE_STATUS in statuses:
        return 2
    return 0


def write_results(results, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for res in results:
        path = os.path.join(out_dir, res.filename)
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(res.csv)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    path = os.path.join(out_dir, "summary.csv")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(_csv([r.summary_row() for r in results], SUMMARY_COLUMNS))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def run_source(source: str, out_dir: str | None = None, seed: int = DEFAULT_SEED, nmax: int | None = None,
               parallel: bool = False, workers: int | None = None):
    """Parse, run and (optionally) write; returns ``(exit code, results)``.

    Parallel runs use worker processes, each rebuilding the declarations
    from the source, so tasks share no state.
    """
    spec = parse_spec(source)
    if nmax is not None and not 16 <= nmax <= config.NMAX_CAP:
        raise ValueError(f"nmax must lie in 16..{config.NMAX_CAP:.0e}")
    tasks = spec.tasks
    if parallel and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_in_worker, source, i, seed, nmax) for i in range(1, len(tasks) + 1)]
            results = [f.result() for f in futures]
    else:
        env = Env(spec)
        results = [run_task(env, i, t, seed, nmax) for i, t in enumerate(tasks, start=1)]
    if out_dir is not None:
        write_results(results, out_dir)
    return exit_code(results), results


def run_spec(spec_or_source, out_dir: str, seed: int = DEFAULT_SEED, nmax: int | None = None,
             parallel: bool = False) -> int:
    """Run a spec (source text or parsed) and write its CSV files; returns the exit code."""
    from .printer import format_spec

    source = spec_or_source if isinstance(spec_or_source, str) else format_spec(spec_or_source)
    code, _ = run_source(source, out_dir, seed, nmax, parallel)
    return code
