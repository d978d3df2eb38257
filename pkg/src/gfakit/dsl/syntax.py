"""Lexer, recursive-descent parser and validator for experiment specs.

A spec is a list of ``;``-terminated statements::

    seq f = "n^2";
    seq d = delta gaussian;
    scale r = log;
    task classify f r projective mu=2 nu=2;

Syntax errors are fatal (the first one stops parsing); name resolution and
parameter checks run afterwards and report every problem they find.
"""
from __future__ import annotations

import difflib
from dataclasses import dataclass, field

from .. import config
from ..basealg.expr import ExprError, parse_expr

ERROR = "error"
WARNING = "warning"


# ---------------------------------------------------------------------------
# diagnostics

@dataclass(frozen=True)
class Span:
    offset: int
    line: int
    col: int
    length: int


@dataclass(frozen=True)
class Diagnostic:
    span: Span
    severity: str
    message: str
    suggestion: str | None = None

    def render(self, source: str | None = None, path: str = "<spec>") -> str:
        s = self.span
        out = f"{path}:{s.line}:{s.col}: {self.severity}: {self.message}"
        if self.suggestion:
            out += f" (did you mean {self.suggestion}?)"
        if source is not None:
            lines = source.split("\n")
            # an error at end of input may sit on the empty line after the last newline
            line = lines[s.line - 1] if s.line <= len(lines) else ""
            out += "\n  " + line + "\n  " + " " * (s.col - 1) + "^" * max(1, s.length)
        return out


class SpecError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(first.message if first else "invalid spec")


class _Fatal(Exception):
    def __init__(self, diag):
        self.diag = diag


# ---------------------------------------------------------------------------
# tokens

NAME, NUMBER, STRING, PUNCT, EOF = "NAME", "NUMBER", "STRING", "PUNCT", "EOF"
PUNCTUATION = set("=;,[](){}:+-*")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span
    value: object = None


def _span(src, start, end, line_starts) -> Span:
    import bisect

    i = bisect.bisect_right(line_starts, start) - 1
    return Span(start, i + 1, start - line_starts[i] + 1, max(0, end - start))


def tokenize(src: str) -> list:
    line_starts = [0] + [i + 1 for i, c in enumerate(src) if c == "\n"]
    toks, i, n = [], 0, len(src)
    while i < n:
        c = src[i]
        if c in " \t\r\n":
            i += 1
        elif c == "#":
            while i < n and src[i] != "\n":
                i += 1
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(Token(NAME, src[i:j], _span(src, i, j, line_starts)))
            i = j
        elif c.isdigit() or (c == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    j = k
                    while j < n and src[j].isdigit():
                        j += 1
            text = src[i:j]
            try:
                value = int(text) if text.isdigit() else float(text)
            except ValueError:
                raise _Fatal(Diagnostic(_span(src, i, j, line_starts), ERROR, f"malformed number {text}"))
            toks.append(Token(NUMBER, text, _span(src, i, j, line_starts), value))
            i = j
        elif c == '"':
            j = i + 1
            while j < n and src[j] != '"' and src[j] != "\n":
                j += 1
            if j >= n or src[j] != '"':
                raise _Fatal(Diagnostic(_span(src, i, j, line_starts), ERROR, "unterminated string"))
            toks.append(Token(STRING, src[i:j + 1], _span(src, i, j + 1, line_starts), src[i + 1:j]))
            i = j + 1
        elif c in PUNCTUATION:
            toks.append(Token(PUNCT, c, _span(src, i, i + 1, line_starts)))
            i += 1
        else:
            raise _Fatal(Diagnostic(_span(src, i, i + 1, line_starts), ERROR, f"unexpected character {c!r}"))
    toks.append(Token(EOF, "", _span(src, n, n, line_starts)))
    return toks


# ---------------------------------------------------------------------------
# syntax tree; spans do not take part in equality

def _nospan():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lit:
    text: str
    span: Span = _nospan()


@dataclass(frozen=True)
class Num:
    value: float
    span: Span = _nospan()


@dataclass(frozen=True)
class Ref:
    name: str
    span: Span = _nospan()


@dataclass(frozen=True)
class BinSeq:
    op: str
    left: object
    right: object
    span: Span = _nospan()


@dataclass(frozen=True)
class Deriv:
    arg: object
    span: Span = _nospan()


@dataclass(frozen=True)
class Delta:
    mollifier: Ref
    span: Span = _nospan()


@dataclass(frozen=True)
class EmbedConst:
    text: Lit
    span: Span = _nospan()


@dataclass(frozen=True)
class EmbedConv:
    source: object  # Lit or Ref("heaviside")
    mollifier: Ref
    span: Span = _nospan()


@dataclass(frozen=True)
class Values:
    values: tuple
    span: Span = _nospan()


@dataclass(frozen=True)
class SeqDecl:
    name: str
    expr: object
    cert: tuple | None = None  # ((key, value), ...)
    span: Span = _nospan()


@dataclass(frozen=True)
class ScaleDecl:
    name: str
    kind: str
    params: tuple = ()  # (key, value) pairs; values are numbers or Lit
    span: Span = _nospan()


@dataclass(frozen=True)
class FamilyDecl:
    name: str
    kind: str
    params: tuple = ()
    span: Span = _nospan()


@dataclass(frozen=True)
class MollifierDecl:
    name: str
    kind: str
    span: Span = _nospan()


@dataclass(frozen=True)
class SeminormDecl:
    name: str
    kind: str
    params: tuple = ()
    span: Span = _nospan()


@dataclass(frozen=True)
class Task:
    kind: str
    args: tuple = ()  # Ref
    options: tuple = ()  # (key, value) with value a number, Ref or tuple of Ref
    block: bool = False  # options written as { key: value, ... }
    span: Span = _nospan()


@dataclass(frozen=True)
class ExperimentSpec:
    statements: tuple

    @property
    def declarations(self):
        return [s for s in self.statements if not isinstance(s, Task)]

    @property
    def tasks(self):
        return [s for s in self.statements if isinstance(s, Task)]


# ---------------------------------------------------------------------------
# the grammar

SCALE_KINDS = ("log", "power", "egorov", "custom", "asymptotic")
FAMILY_KINDS = ("power", "egorov", "log", "asymptotic")
MOLLIFIER_KINDS = ("gaussian", "bump")
SEMINORM_KINDS = ("abs", "sup", "sobolev")
CERT_KEYS = ("C", "a", "b", "s", "t", "u")
ASYMPTOTIC_BUILTINS = ("power", "exponential")
MODES = ("projective", "inductive")
METHODS = ("auto", "closed", "tail")

TASK_KINDS = ("classify", "distance", "equal", "embed-check", "family", "cauchy", "verify-properties")


class Parser:
    def __init__(self, source: str):
        self.src = source
        self.toks = tokenize(source)
        self.i = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i = min(self.i + 1, len(self.toks) - 1)
        return t

    def fail(self, message, tok=None, suggestion=None):
        tok = tok or self.tok
        raise _Fatal(Diagnostic(tok.span, ERROR, message, suggestion))

    def at(self, kind, text=None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind, text=None):
        if self.at(kind, text):
            return self.advance()
        return None

    def expect(self, kind, text=None, what=None) -> Token:
        if self.at(kind, text):
            return self.advance()
        want = what or (repr(text) if text else kind.lower())
        got = "end of input" if self.tok.kind == EOF else repr(self.tok.text)
        self.fail(f"expected {want}, found {got}")

    def word(self, choices, what) -> Token:
        t = self.tok
        if t.kind != NAME or t.text not in choices:
            close = difflib.get_close_matches(t.text, choices, n=1)
            self.fail(f"expected {what} ({'|'.join(choices)}), found {t.text or 'end of input'!r}", t,
                      close[0] if close else None)
        return self.advance()

    def number(self, what="number") -> Token:
        neg = self.accept(PUNCT, "-")
        t = self.expect(NUMBER, what=what)
        if neg:
            return Token(NUMBER, "-" + t.text, _join(neg.span, t.span), -t.value)
        return t

    def join(self, start: Span) -> Span:
        prev = self.toks[max(self.i - 1, 0)].span
        return _join(start, prev)

    # -- statements ----------------------------------------------------------

    def parse(self) -> ExperimentSpec:
        out = []
        while not self.at(EOF):
            t = self.tok
            if t.kind != NAME:
                self.fail(f"expected a statement, found {t.text!r}")
            handler = {
                "seq": self.seq_decl, "scale": self.scale_decl, "family": self.family_decl,
                "mollifier": self.mollifier_decl, "seminorm": self.seminorm_decl, "task": self.task,
            }.get(t.text)
            if handler is None:
                close = difflib.get_close_matches(t.text, ["seq", "scale", "family", "mollifier", "seminorm", "task"], n=1)
                self.fail(f"unknown statement {t.text!r}", t, close[0] if close else None)
            out.append(handler())
        return ExperimentSpec(tuple(out))

    def _head(self):
        start = self.advance().span
        name = self.expect(NAME, what="a name")
        self.expect(PUNCT, "=")
        return start, name.text

    def _end(self, start):
        self.expect(PUNCT, ";", what="';'")
        return self.join(start)

    def seq_decl(self):
        start, name = self._head()
        expr = self.seq_expr()
        cert = None
        if self.accept(NAME, "certify"):
            pairs = []
            while self.at(NAME) and self.tok.text in CERT_KEYS:
                key = self.advance().text
                self.expect(PUNCT, "=")
                pairs.append((key, self.number().value))
            if not pairs:
                self.fail("certify needs at least one of C=, a=, b=, s=, t=, u=")
            cert = tuple(pairs)
        return SeqDecl(name, expr, cert, self._end(start))

    # seq_expr := term (("+"|"-") term)*
    def seq_expr(self):
        start = self.tok.span
        left = self.seq_term()
        while self.at(PUNCT, "+") or self.at(PUNCT, "-"):
            op = self.advance().text
            right = self.seq_term()
            left = BinSeq(op, left, right, self.join(start))
        return left

    def seq_term(self):
        start = self.tok.span
        left = self.seq_atom()
        while self.accept(PUNCT, "*"):
            right = self.seq_atom()
            left = BinSeq("*", left, right, self.join(start))
        return left

    def seq_atom(self):
        t = self.tok
        if t.kind == STRING:
            self.advance()
            return Lit(t.value, t.span)
        if t.kind == NUMBER or (t.kind == PUNCT and t.text == "-" and self.toks[self.i + 1].kind == NUMBER):
            n = self.number()
            return Num(n.value, n.span)
        if self.accept(PUNCT, "("):
            inner = self.seq_expr()
            self.expect(PUNCT, ")")
            return inner
        if t.kind != NAME:
            self.fail(f"expected a sequence expression, found {t.text or 'end of input'!r}")
        if t.text == "deriv":
            self.advance()
            self.expect(PUNCT, "(")
            inner = self.seq_expr()
            self.expect(PUNCT, ")")
            return Deriv(inner, self.join(t.span))
        if t.text == "delta":
            self.advance()
            m = self.expect(NAME, what="a mollifier")
            return Delta(Ref(m.text, m.span), self.join(t.span))
        if t.text == "embed":
            self.advance()
            how = self.word(("const", "conv"), "embedding")
            if how.text == "const":
                s = self.expect(STRING, what="an expression string")
                return EmbedConst(Lit(s.value, s.span), self.join(t.span))
            if self.at(STRING):
                s = self.advance()
                src = Lit(s.value, s.span)
            else:
                s = self.expect(NAME, what="an expression string or heaviside")
                src = Ref(s.text, s.span)
            m = self.expect(NAME, what="a mollifier")
            return EmbedConv(src, Ref(m.text, m.span), self.join(t.span))
        if t.text == "values":
            self.advance()
            self.expect(PUNCT, "[")
            vals = []
            while not self.at(PUNCT, "]"):
                vals.append(self.number().value)
                if not self.accept(PUNCT, ","):
                    break
            self.expect(PUNCT, "]")
            return Values(tuple(vals), self.join(t.span))
        self.advance()
        return Ref(t.text, t.span)

    def scale_decl(self):
        start, name = self._head()
        kind = self.word(SCALE_KINDS, "scale kind").text
        params = []
        if kind == "power":
            params.append(("m", self.number("power parameter").value))
        elif kind == "egorov":
            params.append(("m", self.number("egorov index").value))
        elif kind == "custom":
            s = self.expect(STRING, what="an expression string")
            params.append(("expr", Lit(s.value, s.span)))
            if self.accept(NAME, "from"):
                params.append(("from", self.number("start index").value))
        elif kind == "asymptotic":
            params.append(("generator", self._generator()))
            self.expect(NAME, "m", what="'m'")
            params.append(("m", self.number("family index").value))
        return ScaleDecl(name, kind, tuple(params), self._end(start))

    def _generator(self):
        if self.at(STRING):
            s = self.advance()
            return Lit(s.value, s.span)
        t = self.word(ASYMPTOTIC_BUILTINS, "asymptotic family")
        return Ref(t.text, t.span)

    def family_decl(self):
        start, name = self._head()
        kind = self.word(FAMILY_KINDS, "family kind").text
        params = []
        if kind == "asymptotic":
            params.append(("generator", self._generator()))
            if self.at(NAME, "increasing") or self.at(NAME, "decreasing"):
                params.append(("direction", Ref(self.tok.text, self.advance().span)))
        if self.accept(NAME, "levels"):
            params.append(("levels", self.number("level count").value))
        return FamilyDecl(name, kind, tuple(params), self._end(start))

    def mollifier_decl(self):
        start, name = self._head()
        kind = self.word(MOLLIFIER_KINDS, "mollifier").text
        return MollifierDecl(name, kind, self._end(start))

    def seminorm_decl(self):
        start, name = self._head()
        kind = self.word(SEMINORM_KINDS, "seminorm kind").text
        params = []
        if kind == "sobolev":
            params.append(("order", self.number("derivative order").value))
        if kind in ("sup", "sobolev") and self.accept(NAME, "density"):
            params.append(("density", self.number("grid density").value))
        return SeminormDecl(name, kind, tuple(params), self._end(start))

    def task(self):
        start = self.advance().span
        t = self.expect(NAME, what="a task kind")
        kind = t.text
        # hyphenated kinds: NAME '-' NAME written without spaces
        while self.at(PUNCT, "-") and self.tok.span.offset == t.span.offset + len(kind) \
                and self.toks[self.i + 1].kind == NAME \
                and self.toks[self.i + 1].span.offset == self.tok.span.offset + 1:
            self.advance()
            kind += "-" + self.advance().text
        kind_span = _join(t.span, self.toks[self.i - 1].span)
        if kind not in TASK_KINDS:
            close = difflib.get_close_matches(kind, TASK_KINDS, n=1)
            raise _Fatal(Diagnostic(kind_span, ERROR, f"unknown task kind {kind}", close[0] if close else None))
        args, options, block = [], [], False
        if self.accept(PUNCT, "{"):
            block = True
            while not self.at(PUNCT, "}"):
                key = self.expect(NAME, what="a key")
                self.expect(PUNCT, ":")
                options.append((key.text, self.value()))
                if not self.accept(PUNCT, ","):
                    break
            self.expect(PUNCT, "}")
        else:
            while self.at(NAME):
                if self.toks[self.i + 1].kind == PUNCT and self.toks[self.i + 1].text == "=":
                    key = self.advance()
                    self.advance()
                    options.append((key.text, self.value()))
                else:
                    a = self.advance()
                    args.append(Ref(a.text, a.span))
        return Task(kind, tuple(args), tuple(options), block, self._end(start))

    def value(self):
        if self.at(NAME):
            t = self.advance()
            return Ref(t.text, t.span)
        if self.accept(PUNCT, "["):
            items = []
            while not self.at(PUNCT, "]"):
                t = self.expect(NAME, what="a name")
                items.append(Ref(t.text, t.span))
                if not self.accept(PUNCT, ","):
                    break
            self.expect(PUNCT, "]")
            return tuple(items)
        return self.number("a value").value


def _join(a: Span, b: Span) -> Span:
    end = max(a.offset + a.length, b.offset + b.length)
    return Span(a.offset, a.line, a.col, end - a.offset)


# ---------------------------------------------------------------------------
# validation

SEQ, SCALE, FAMILY, MOLLIFIER, SEMINORM = "sequence", "scale", "family", "mollifier", "seminorm"

INT_OPTIONS = {"mu", "nu", "mu_max", "nu_max", "m", "nmax", "count", "seed", "budget"}

TASK_SCHEMAS = {
    # kind: (positional categories, allowed option keys)
    "classify": ((SEQ, SCALE), {"mode", "mu", "nu", "method", "seminorm", "nmax"}),
    "distance": ((SEQ, SEQ, SCALE), {"mu", "nu", "method", "seminorm", "nmax"}),
    "equal": ((SEQ, SEQ, SCALE), {"mode", "mu", "nu", "method", "seminorm", "nmax"}),
    "embed-check": ((SEQ, SCALE), {"mode", "mu", "nu", "method", "seminorm", "nmax", "budget"}),
    "family": ((SEQ, FAMILY), {"mu", "nu", "m", "method", "seminorm", "nmax"}),
    "cauchy": ((), {"members", "scale", "mu_max", "mode", "seminorm", "nmax", "method"}),
    "verify-properties": ((), {"suite", "count", "seed"}),
}


class Validator:
    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.names: dict = {}  # name -> category
        self.diags: list = []

    def error(self, span, message, suggestion=None):
        self.diags.append(Diagnostic(span, ERROR, message, suggestion))

    def resolve(self, ref: Ref, category: str, builtins=()):
        if ref.name in builtins:
            return
        cat = self.names.get(ref.name)
        if cat is None:
            pool = [n for n, c in self.names.items() if c == category] + list(builtins)
            close = difflib.get_close_matches(ref.name, pool, n=1)
            self.error(ref.span, f"unknown name {ref.name}", close[0] if close else None)
        elif cat != category:
            self.error(ref.span, f"{ref.name} is a {cat}, expected a {category}")

    def declare(self, stmt, category):
        if stmt.name in self.names:
            self.error(stmt.span, f"duplicate name {stmt.name}")
        self.names[stmt.name] = category

    def check_expr(self, lit: Lit, symbols):
        try:
            parse_expr(lit.text, symbols)
        except ExprError as exc:
            self.error(lit.span, f"bad expression: {exc}")

    def run(self):
        for stmt in self.spec.statements:
            getattr(self, "check_" + type(stmt).__name__)(stmt)
        return self.diags

    # -- declarations --------------------------------------------------------

    def check_SeqDecl(self, d: SeqDecl):
        self.seq_expr(d.expr)
        if d.cert:
            keys = [k for k, _ in d.cert]
            if len(set(keys)) != len(keys):
                self.error(d.span, "repeated certify key")
            if dict(d.cert).get("C", 1.0) <= 0:
                self.error(d.span, "certificate constant C must be positive")
        self.declare(d, SEQ)

    def seq_expr(self, e):
        if isinstance(e, Lit):
            self.check_expr(e, ("x", "n"))
        elif isinstance(e, Ref):
            self.resolve(e, SEQ)
        elif isinstance(e, BinSeq):
            self.seq_expr(e.left)
            self.seq_expr(e.right)
        elif isinstance(e, Deriv):
            self.seq_expr(e.arg)
        elif isinstance(e, Delta):
            self.resolve(e.mollifier, MOLLIFIER, MOLLIFIER_KINDS)
        elif isinstance(e, EmbedConst):
            self.check_expr(e.text, ("x",))
        elif isinstance(e, EmbedConv):
            if isinstance(e.source, Lit):
                self.check_expr(e.source, ("x",))
            elif e.source.name != "heaviside":
                self.error(e.source.span, f"unknown piecewise function {e.source.name}", "heaviside")
            self.resolve(e.mollifier, MOLLIFIER, MOLLIFIER_KINDS)
        elif isinstance(e, Values):
            if not e.values:
                self.error(e.span, "values needs at least one entry")

    def check_ScaleDecl(self, d: ScaleDecl):
        p = dict(d.params)
        if d.kind == "power" and not p["m"] > 0:
            self.error(d.span, "power scale parameter must be positive")
        if d.kind == "egorov" and (p["m"] < 0 or int(p["m"]) != p["m"]):
            self.error(d.span, "egorov scale parameter must be a natural number")
        if d.kind == "custom":
            self.check_expr(p["expr"], ("n",))
            if "from" in p and (p["from"] < 1 or int(p["from"]) != p["from"]):
                self.error(d.span, "custom scale start must be a positive integer")
        if d.kind == "asymptotic":
            if isinstance(p["generator"], Lit):
                self.check_expr(p["generator"], ("n", "m"))
            if int(p["m"]) != p["m"] or abs(p["m"]) > config.LEVEL_CAP:
                self.error(d.span, f"asymptotic family index must be an integer of size at most {config.LEVEL_CAP}")
        self.declare(d, SCALE)

    def check_FamilyDecl(self, d: FamilyDecl):
        p = dict(d.params)
        if isinstance(p.get("generator"), Lit):
            self.check_expr(p["generator"], ("n", "m"))
        levels = p.get("levels", 6)
        if int(levels) != levels or not 1 <= levels <= config.LEVEL_CAP:
            self.error(d.span, f"levels must be an integer in 1..{config.LEVEL_CAP}")
        self.declare(d, FAMILY)

    def check_MollifierDecl(self, d: MollifierDecl):
        self.declare(d, MOLLIFIER)

    def check_SeminormDecl(self, d: SeminormDecl):
        p = dict(d.params)
        if d.kind == "sobolev" and (int(p["order"]) != p["order"] or not 0 <= p["order"] <= config.INDEX_CAP):
            self.error(d.span, f"sobolev order must be an integer in 0..{config.INDEX_CAP}")
        if "density" in p and (int(p["density"]) != p["density"] or not 8 <= p["density"] <= 65536):
            self.error(d.span, "density must be an integer in 8..65536")
        self.declare(d, SEMINORM)

    # -- tasks ---------------------------------------------------------------

    def check_Task(self, t: Task):
        cats, allowed = TASK_SCHEMAS[t.kind]
        opts = dict(t.options)
        if len(opts) != len(t.options):
            self.error(t.span, "repeated option")
        args, _ = split_args(t)
        if len(args) < len(t.args) and "mode" in opts:
            self.error(t.args[-1].span, "mode given twice")
        if t.kind == "family" and len(args) == 3:
            cats = (SEQ, SEQ, FAMILY)  # ideal check for the pair (k, f)
        if len(args) != len(cats):
            shape = " ".join(c for c in cats) or "no positional arguments"
            self.error(t.span, f"task {t.kind} takes {len(cats)} positional argument(s) ({shape}), got {len(args)}")
        for ref, cat in zip(args, cats):
            self.resolve(ref, cat)
        for key, val in t.options:
            if key not in allowed:
                close = difflib.get_close_matches(key, sorted(allowed), n=1)
                self.error(t.span, f"unknown option {key} for task {t.kind}", close[0] if close else None)
                continue
            self.option(t, key, val)
        if t.kind == "cauchy":
            for key in ("members", "scale"):
                if key not in opts:
                    self.error(t.span, f"cauchy needs {key}")

    def option(self, t: Task, key, val):
        span = getattr(val, "span", None) or t.span
        if key in INT_OPTIONS:
            if not isinstance(val, int) or isinstance(val, bool):
                self.error(span, f"{key} must be an integer")
                return
            if key in ("mu", "mu_max") and not 1 <= val <= config.INDEX_CAP:
                self.error(span, f"{key} must lie in 1..{config.INDEX_CAP}")
            if key in ("nu", "nu_max") and not 0 <= val <= config.INDEX_CAP:
                self.error(span, f"{key} must lie in 0..{config.INDEX_CAP}")
            if key == "m" and not 1 <= val <= config.LEVEL_CAP:
                self.error(span, f"m must lie in 1..{config.LEVEL_CAP}")
            if key in ("nmax", "budget") and not 16 <= val <= config.NMAX_CAP:
                self.error(span, f"{key} must lie in 16..{config.NMAX_CAP:.0e}")
            if key == "count" and not 1 <= val <= 100_000:
                self.error(span, "count must lie in 1..100000")
            return
        if key == "members":
            if not isinstance(val, tuple) or len(val) < 3:
                self.error(span, "members must list at least three sequences")
                return
            for ref in val:
                self.resolve(ref, SEQ)
            return
        if not isinstance(val, Ref):
            self.error(span, f"{key} expects a name")
            return
        if key == "mode" and val.name not in MODES:
            self.error(val.span, f"unknown mode {val.name}", _close(val.name, MODES))
        elif key == "method" and val.name not in METHODS:
            self.error(val.span, f"unknown method {val.name}", _close(val.name, METHODS))
        elif key == "scale":
            self.resolve(val, SCALE)
        elif key == "seminorm":
            self.resolve(val, SEMINORM, ("abs", "sup"))
        elif key == "suite":
            from ..props import SUITE_NAMES

            if val.name not in SUITE_NAMES + ("all",):
                self.error(val.span, f"unknown property suite {val.name}", _close(val.name, SUITE_NAMES + ("all",)))


def _close(word, choices):
    got = difflib.get_close_matches(word, choices, n=1)
    return got[0] if got else None


def diagnose(source: str):
    """``(spec or None, diagnostics)`` without raising."""
    try:
        spec = Parser(source).parse()
    except _Fatal as f:
        return None, [f.diag]
    diags = Validator(spec).run()
    return (spec if not any(d.severity == ERROR for d in diags) else None), diags


def parse_spec(source: str) -> ExperimentSpec:
    """Parse and validate; raises :class:`SpecError` carrying the diagnostics."""
    spec, diags = diagnose(source)
    if spec is None:
        raise SpecError(diags)
    return spec


def split_args(t: Task):
    """Positional arguments of a task with a trailing mode word removed, plus that mode."""
    args = list(t.args)
    mode = dict(t.options).get("mode")
    if t.kind in ("classify", "equal", "embed-check") and args and args[-1].name in MODES:
        mode = args.pop()
    return args, (mode.name if isinstance(mode, Ref) else None)
