"""Canonical text for a parsed spec; re-parsing it gives an equal tree."""
from __future__ import annotations

from .syntax import (
    BinSeq, Delta, Deriv, EmbedConst, EmbedConv, ExperimentSpec, FamilyDecl, Lit, MollifierDecl, Num,
    Ref, ScaleDecl, SeminormDecl, SeqDecl, Task, Values,
)

_PREC = {"+": 1, "-": 1, "*": 2}


def _num(v) -> str:
    return str(v) if isinstance(v, int) else repr(float(v))


def _value(v) -> str:
    if isinstance(v, Ref):
        return v.name
    if isinstance(v, Lit):
        return f'"{v.text}"'
    if isinstance(v, tuple):
        return "[" + ", ".join(_value(x) for x in v) + "]"
    return _num(v)


def format_seq(e, parent: int = 0, right: bool = False) -> str:
    if isinstance(e, BinSeq):
        p = _PREC[e.op]
        body = f"{format_seq(e.left, p)} {e.op} {format_seq(e.right, p, True)}"
        if p < parent or (right and p == parent):
            return f"({body})"
        return body
    if isinstance(e, Lit):
        return f'"{e.text}"'
    if isinstance(e, Num):
        text = _num(e.value)
        return f"({text})" if text.startswith("-") and parent else text
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Deriv):
        return f"deriv({format_seq(e.arg)})"
    if isinstance(e, Delta):
        return f"delta {e.mollifier.name}"
    if isinstance(e, EmbedConst):
        return f'embed const "{e.text.text}"'
    if isinstance(e, EmbedConv):
        return f"embed conv {_value(e.source)} {e.mollifier.name}"
    if isinstance(e, Values):
        return "values [" + ", ".join(_num(v) for v in e.values) + "]"
    raise TypeError(f"not a sequence expression: {e!r}")


def format_statement(s) -> str:
    if isinstance(s, SeqDecl):
        out = f"seq {s.name} = {format_seq(s.expr)}"
        if s.cert:
            out += " certify " + " ".join(f"{k}={_num(v)}" for k, v in s.cert)
        return out + ";"
    if isinstance(s, ScaleDecl):
        p = dict(s.params)
        out = f"scale {s.name} = {s.kind}"
        if s.kind in ("power", "egorov"):
            out += f" {_num(p['m'])}"
        elif s.kind == "custom":
            out += f" {_value(p['expr'])}"
            if "from" in p:
                out += f" from {_num(p['from'])}"
        elif s.kind == "asymptotic":
            out += f" {_value(p['generator'])} m {_num(p['m'])}"
        return out + ";"
    if isinstance(s, FamilyDecl):
        parts = [f"family {s.name} = {s.kind}"]
        for key, val in s.params:
            if key == "levels":
                parts.append(f"levels {_num(val)}")
            else:
                parts.append(_value(val))
        return " ".join(parts) + ";"
    if isinstance(s, MollifierDecl):
        return f"mollifier {s.name} = {s.kind};"
    if isinstance(s, SeminormDecl):
        parts = [f"seminorm {s.name} = {s.kind}"]
        for key, val in s.params:
            parts.append(_num(val) if key == "order" else f"density {_num(val)}")
        return " ".join(parts) + ";"
    if isinstance(s, Task):
        head = f"task {s.kind}"
        if s.block:
            body = ", ".join(f"{k}: {_value(v)}" for k, v in s.options)
            return f"{head} {{ {body} }};"
        parts = [head] + [a.name for a in s.args] + [f"{k}={_value(v)}" for k, v in s.options]
        return " ".join(parts) + ";"
    raise TypeError(f"not a statement: {s!r}")


def format_spec(spec: ExperimentSpec) -> str:
    return "".join(format_statement(s) + "\n" for s in spec.statements)
