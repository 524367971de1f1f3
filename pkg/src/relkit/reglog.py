"""Regular logic: parser, typing, and evaluation in finite-set models.

Grammar::

    theory  := (decl ";")*
    decl    := "sort" ID | "fun" ID ":" type "->" ID | "pred" ID ":" type | "axiom" seq
    type    := ID ("," ID)*
    seq     := ["[" ID ":" ID ("," ID ":" ID)* "]"] [formula ("," formula)*] "|-" formula
    formula := conj;  conj := unary ("&" unary)*
    unary   := "exists" ID ":" ID "." formula | "T" | "(" formula ")" | PRED "(" terms ")" | term "=" term
    term    := ID | ID "(" terms ")" | "<" terms ">"

Unicode ⊤, ∧, ∃, ⊢ and → are accepted.  Free variables are bound by the
sequent's context, which is either listed or inferred from use; a bound
variable may not shadow one already in scope.
"""
from __future__ import annotations

import itertools
import json
import random
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from .finrel import FinSetObj
from .report import Report


class LogicError(Exception):
    def __init__(self, kind: str, msg: str, pos: tuple[int, int] | None = None):
        self.kind = kind
        self.msg = msg
        self.pos = pos
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(f"{where}{kind} error: {msg}")


# ------------------------------------------------------------------ syntax trees

Pos = tuple


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"{self.fn}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Tup:
    items: tuple
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"<{', '.join(map(str, self.items))}>"


@dataclass(frozen=True)
class Top:
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"{self.pred}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Eq:
    left: Any
    right: Any
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class And:
    left: Any
    right: Any
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: str
    body: Any
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"(exists {self.var}:{self.sort}. {self.body})"


@dataclass(frozen=True)
class Sequent:
    context: tuple          # ((var, sort), ...)
    antecedents: tuple
    consequent: Any
    pos: Pos = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        ctx = ", ".join(f"{v}:{s}" for v, s in self.context)
        return f"[{ctx}] {', '.join(map(str, self.antecedents))} |- {self.consequent}"


@dataclass
class Signature:
    sorts: list = field(default_factory=list)
    funs: dict = field(default_factory=dict)     # name -> (arg sorts, result sort)
    preds: dict = field(default_factory=dict)    # name -> arg sorts

    def symbols(self) -> set:
        return set(self.sorts) | set(self.funs) | set(self.preds)


@dataclass
class Theory:
    signature: Signature
    axioms: list = field(default_factory=list)


def conj(*fs):
    if not fs:
        return Top()
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


# ------------------------------------------------------------------ lexer and parser

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*|//[^\n]*)
  | (?P<turn>\|-|⊢) | (?P<arrow>->|→)
  | (?P<sym>[;:,()<>\[\]&∧=.⊤∃])
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_CANON = {"∧": "&", "⊤": "T", "∃": "exists", "⊢": "|-", "→": "->"}
KEYWORDS = {"sort", "fun", "pred", "axiom", "exists", "T"}


@dataclass
class Token:
    kind: str
    text: str
    pos: Pos


def tokenize(text: str) -> list[Token]:
    out = []
    i, line, col = 0, 1, 1
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise LogicError("lexical", f"unexpected character {text[i]!r}", (line, col))
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                t = _CANON.get(tok, tok)
                out.append(Token("id" if kind == "id" and t not in KEYWORDS else "sym", t, (line, col)))
            col += len(tok)
        i = m.end()
    out.append(Token("eof", "", (line, col)))
    return out


class Parser:
    def __init__(self, text: str, signature: Signature | None = None):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = signature or Signature()

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise LogicError("syntax", f"expected {text!r}, found {found!r}", self.tok.pos)
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "id":
            found = self.tok.text or "end of input"
            raise LogicError("syntax", f"expected {what}, found {found!r}", self.tok.pos)
        t = self.tok
        self.i += 1
        return t

    # -- declarations
    def theory(self) -> Theory:
        th = Theory(self.sig)
        while self.tok.kind != "eof":
            self.decl(th)
            self.expect(";")
        return th

    def _fresh_symbol(self, t: Token) -> str:
        if t.text in self.sig.symbols():
            raise LogicError("type", f"symbol {t.text!r} already declared", t.pos)
        return t.text

    def _sort(self) -> str:
        t = self.ident("sort")
        if t.text not in self.sig.sorts:
            raise LogicError("type", f"unknown sort {t.text!r}", t.pos)
        return t.text

    def type_(self) -> tuple:
        sorts = [self._sort()]
        while self.at(","):
            self.i += 1
            sorts.append(self._sort())
        return tuple(sorts)

    def decl(self, th: Theory) -> None:
        t = self.tok
        if t.text == "sort" and t.kind == "sym":
            self.i += 1
            th.signature.sorts.append(self._fresh_symbol(self.ident("sort name")))
        elif t.text == "fun" and t.kind == "sym":
            self.i += 1
            name = self._fresh_symbol(self.ident("function name"))
            self.expect(":")
            args = self.type_()
            self.expect("->")
            th.signature.funs[name] = (args, self._sort())
        elif t.text == "pred" and t.kind == "sym":
            self.i += 1
            name = self._fresh_symbol(self.ident("predicate name"))
            self.expect(":")
            th.signature.preds[name] = self.type_()
        elif t.text == "axiom" and t.kind == "sym":
            self.i += 1
            th.axioms.append(self.sequent())
        else:
            raise LogicError("syntax", f"expected a declaration, found {t.text or 'end of input'!r}", t.pos)

    # -- sequents and formulas
    def sequent(self) -> Sequent:
        pos = self.tok.pos
        ctx = None
        if self.at("["):
            self.i += 1
            ctx = []
            while True:
                v = self.ident("variable")
                self.expect(":")
                s = self._sort()
                if any(v.text == w for w, _ in ctx):
                    raise LogicError("scope", f"variable {v.text!r} declared twice", v.pos)
                ctx.append((v.text, s))
                if not self.at(","):
                    break
                self.i += 1
            self.expect("]")
        ants = []
        if not self.at("|-"):
            ants.append(self.formula())
            while self.at(","):
                self.i += 1
                ants.append(self.formula())
        self.expect("|-")
        cons = self.formula()
        return close_sequent(self.sig, ctx, tuple(ants), cons, pos)

    def formula(self):
        f = self.unary()
        while self.at("&"):
            t = self.expect("&")
            f = And(f, self.unary(), t.pos)
        return f

    def unary(self):
        t = self.tok
        if t.kind == "sym" and t.text == "exists":
            self.i += 1
            v = self.ident("variable")
            self.expect(":")
            s = self._sort()
            self.expect(".")
            return Exists(v.text, s, self.formula(), t.pos)
        if t.kind == "sym" and t.text == "T":
            self.i += 1
            return Top(t.pos)
        if self.at("("):
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "id" and t.text in self.sig.preds:
            self.i += 1
            self.expect("(")
            args = self.terms(")")
            self.expect(")")
            return Atom(t.text, args, t.pos)
        left = self.term()
        eq = self.expect("=")
        return Eq(left, self.term(), eq.pos)

    def terms(self, close: str) -> tuple:
        if self.at(close):
            return ()
        out = [self.term()]
        while self.at(","):
            self.i += 1
            out.append(self.term())
        return tuple(out)

    def term(self):
        t = self.tok
        if self.at("<"):
            self.i += 1
            items = self.terms(">")
            self.expect(">")
            return Tup(items, t.pos)
        name = self.ident("term")
        if self.at("("):
            if name.text not in self.sig.funs:
                raise LogicError("type", f"unknown function symbol {name.text!r}", name.pos)
            self.i += 1
            args = self.terms(")")
            self.expect(")")
            return App(name.text, args, name.pos)
        if name.text in self.sig.symbols():
            raise LogicError("syntax", f"{name.text!r} is a declared symbol, not a variable", name.pos)
        return Var(name.text, name.pos)


def parse_theory(text: str) -> tuple[Signature, Theory]:
    th = Parser(text).theory()
    return th.signature, th


def parse_formula(text: str, sig: Signature):
    p = Parser(text, sig)
    f = p.formula()
    if p.tok.kind != "eof":
        raise LogicError("syntax", f"unexpected {p.tok.text!r}", p.tok.pos)
    return f


def parse_sequent(text: str, sig: Signature) -> Sequent:
    p = Parser(text, sig)
    s = p.sequent()
    if p.tok.kind != "eof":
        raise LogicError("syntax", f"unexpected {p.tok.text!r}", p.tok.pos)
    return s


# ------------------------------------------------------------------ typing


def term_type(sig: Signature, t, ctx: dict) -> tuple:
    if isinstance(t, Var):
        if t.name not in ctx:
            raise LogicError("scope", f"variable {t.name!r} not in context", t.pos)
        return (ctx[t.name],)
    if isinstance(t, Tup):
        return tuple(s for x in t.items for s in term_type(sig, x, ctx))
    if isinstance(t, App):
        if t.fn not in sig.funs:
            raise LogicError("type", f"unknown function symbol {t.fn!r}", t.pos)
        args, res = sig.funs[t.fn]
        got = tuple(s for x in t.args for s in term_type(sig, x, ctx))
        if got != args:
            raise LogicError("type", f"{t.fn} expects ({', '.join(args)}), got ({', '.join(got)})", t.pos)
        return (res,)
    raise LogicError("type", f"not a term: {t!r}")


def check_formula(sig: Signature, f, ctx: dict) -> None:
    """Raise unless f is well typed in ctx (variable -> sort)."""
    if isinstance(f, Top):
        return
    if isinstance(f, Atom):
        if f.pred not in sig.preds:
            raise LogicError("type", f"unknown predicate {f.pred!r}", f.pos)
        got = tuple(s for x in f.args for s in term_type(sig, x, ctx))
        if got != sig.preds[f.pred]:
            raise LogicError("type", f"{f.pred} expects ({', '.join(sig.preds[f.pred])}), got ({', '.join(got)})",
                             f.pos)
        return
    if isinstance(f, Eq):
        a, b = term_type(sig, f.left, ctx), term_type(sig, f.right, ctx)
        if a != b:
            raise LogicError("type", f"equation between ({', '.join(a)}) and ({', '.join(b)})", f.pos)
        return
    if isinstance(f, And):
        check_formula(sig, f.left, ctx)
        check_formula(sig, f.right, ctx)
        return
    if isinstance(f, Exists):
        if f.var in ctx:
            raise LogicError("scope", f"bound variable {f.var!r} shadows one in scope", f.pos)
        if f.sort not in sig.sorts:
            raise LogicError("type", f"unknown sort {f.sort!r}", f.pos)
        check_formula(sig, f.body, {**ctx, f.var: f.sort})
        return
    raise LogicError("type", f"not a formula: {f!r}")


def free_vars(x) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []

    def go(y, bound):
        if isinstance(y, Var):
            if y.name not in bound and y.name not in out:
                out.append(y.name)
        elif isinstance(y, (App, Atom)):
            for a in y.args:
                go(a, bound)
        elif isinstance(y, Tup):
            for a in y.items:
                go(a, bound)
        elif isinstance(y, (Eq, And)):
            go(y.left, bound)
            go(y.right, bound)
        elif isinstance(y, Exists):
            go(y.body, bound | {y.var})
    go(x, frozenset())
    return out


def _infer(sig: Signature, fs: tuple, known: dict) -> dict:
    """Sorts of free variables from argument positions and equations."""
    sorts = dict(known)
    first_pos: dict = {}
    eqs: list = []

    def flat_args(args, expected, pos, bound):
        i = 0
        for a in args:
            width = _width(sig, a, bound, sorts)
            if width is None:
                return
            want = expected[i:i + width]
            visit_term(a, want, bound)
            i += width

    def visit_term(t, want, bound):
        if isinstance(t, Var):
            first_pos.setdefault(t.name, t.pos)
            if t.name in bound:
                return
            if want and len(want) == 1:
                if t.name in sorts and sorts[t.name] != want[0]:
                    raise LogicError("type", f"variable {t.name!r} used at sorts {sorts[t.name]} and {want[0]}", t.pos)
                sorts[t.name] = want[0]
        elif isinstance(t, App):
            if t.fn in sig.funs:
                flat_args(t.args, sig.funs[t.fn][0], t.pos, bound)
        elif isinstance(t, Tup):
            if want is None:
                for a in t.items:
                    visit_term(a, None, bound)
            else:
                flat_args(t.items, want, t.pos, bound)

    def visit(f, bound):
        if isinstance(f, Atom) and f.pred in sig.preds:
            flat_args(f.args, sig.preds[f.pred], f.pos, bound)
        elif isinstance(f, Eq):
            visit_term(f.left, None, bound)
            visit_term(f.right, None, bound)
            eqs.append((f, bound))
        elif isinstance(f, And):
            visit(f.left, bound)
            visit(f.right, bound)
        elif isinstance(f, Exists):
            visit(f.body, {**bound, f.var: f.sort})

    for f in fs:
        visit(f, {})
    changed = True
    while changed:
        changed = False
        for f, bound in eqs:
            env = {**sorts, **bound}
            for a, b in ((f.left, f.right), (f.right, f.left)):
                tb = _try_type(sig, b, env)
                if tb is not None:
                    before = dict(sorts)
                    visit_term(a, tb, bound)
                    changed = changed or sorts != before
    for v in free_vars(conj(*fs)) if fs else []:
        if v not in sorts:
            raise LogicError("type", f"cannot infer the sort of {v!r}", first_pos.get(v))
    return sorts


def _width(sig, t, bound, sorts):
    if isinstance(t, (Var, App)):
        return 1
    if isinstance(t, Tup):
        ws = [_width(sig, a, bound, sorts) for a in t.items]
        return None if None in ws else sum(ws)
    return None


def _try_type(sig, t, env):
    try:
        return term_type(sig, t, env)
    except LogicError:
        return None


def close_sequent(sig: Signature, ctx: list | None, ants: tuple, cons, pos=(0, 0)) -> Sequent:
    """Attach the context (listed or inferred) and type-check."""
    fs = ants + (cons,)
    free = free_vars(conj(*fs))
    if ctx is None:
        sorts = _infer(sig, fs, {})
        context = tuple((v, sorts[v]) for v in free)
    else:
        context = tuple(ctx)
        names = {v for v, _ in context}
        for v in free:
            if v not in names:
                raise LogicError("scope", f"free variable {v!r} is not in the listed context", pos)
    env = dict(context)
    for f in fs:
        check_formula(sig, f, env)
    return Sequent(context, ants, cons, pos)


# ------------------------------------------------------------------ models


@dataclass
class Interpretation:
    sorts: dict          # sort -> FinSetObj
    funs: dict           # name -> {args tuple: value}
    preds: dict          # name -> frozenset of tuples

    @classmethod
    def from_json(cls, sig: Signature, data: dict) -> "Interpretation":
        try:
            sorts = {s: FinSetObj(s, tuple(str(e) for e in data["sorts"][s])) for s in sig.sorts}
            funs = {f: {tuple(str(a) for a in row[0]) if isinstance(row[0], list) else (str(row[0]),): str(row[1])
                        for row in data.get("funs", {}).get(f, [])} for f in sig.funs}
            preds = {p: frozenset(tuple(str(a) for a in (row if isinstance(row, list) else [row]))
                                  for row in data.get("preds", {}).get(p, [])) for p in sig.preds}
        except (KeyError, TypeError, IndexError) as e:
            raise LogicError("model", f"malformed interpretation: {e}") from None
        i = cls(sorts, funs, preds)
        i.validate(sig)
        return i

    def to_json(self) -> dict:
        return {"sorts": {s: list(x.elements) for s, x in self.sorts.items()},
                "funs": {f: [[list(k), v] for k, v in sorted(t.items())] for f, t in self.funs.items()},
                "preds": {p: [list(r) for r in sorted(v)] for p, v in self.preds.items()}}

    def validate(self, sig: Signature) -> None:
        for f, (args, res) in sig.funs.items():
            dom = set(itertools.product(*[self.sorts[s].elements for s in args]))
            table = self.funs.get(f, {})
            if set(table) != dom:
                raise LogicError("model", f"function {f} is not total on its domain")
            if not all(v in self.sorts[res] for v in table.values()):
                raise LogicError("model", f"function {f} leaves its codomain")
        for p, args in sig.preds.items():
            for row in self.preds.get(p, ()):
                if len(row) != len(args) or not all(e in self.sorts[s] for e, s in zip(row, args)):
                    raise LogicError("model", f"predicate {p} has an ill-typed tuple {row!r}")


def _compile_term(t, index: dict, i: Interpretation) -> Callable[[tuple], tuple]:
    if isinstance(t, Var):
        k = index[t.name]
        return lambda env: (env[k],)
    if isinstance(t, Tup):
        parts = [_compile_term(a, index, i) for a in t.items]
        return lambda env: tuple(x for p in parts for x in p(env))
    if isinstance(t, App):
        parts = [_compile_term(a, index, i) for a in t.args]
        table = i.funs[t.fn]
        return lambda env: (table[tuple(x for p in parts for x in p(env))],)
    raise LogicError("type", f"not a term: {t!r}")


def assignments(i: Interpretation, ctx) -> list[tuple]:
    return list(itertools.product(*[i.sorts[s].elements for _, s in ctx]))


def eval_formula(f, i: Interpretation, ctx) -> frozenset:
    """The subset of the context's product denoted by f: T is everything,
    & is intersection, exists is the image along the projection, = is the
    preimage of the diagonal and P(t) the preimage of P along t."""
    ctx = tuple(ctx)
    index = {v: k for k, (v, _) in enumerate(ctx)}
    if isinstance(f, Top):
        return frozenset(assignments(i, ctx))
    if isinstance(f, And):
        return eval_formula(f.left, i, ctx) & eval_formula(f.right, i, ctx)
    if isinstance(f, Exists):
        inner = eval_formula(f.body, i, ctx + ((f.var, f.sort),))
        return frozenset(g[:-1] for g in inner)
    if isinstance(f, Eq):
        a, b = _compile_term(f.left, index, i), _compile_term(f.right, index, i)
        return frozenset(g for g in assignments(i, ctx) if a(g) == b(g))
    if isinstance(f, Atom):
        parts = [_compile_term(x, index, i) for x in f.args]
        rel = i.preds[f.pred]
        return frozenset(g for g in assignments(i, ctx) if tuple(x for p in parts for x in p(g)) in rel)
    raise LogicError("type", f"not a formula: {f!r}")


def satisfies_sequent(sq: Sequent, i: Interpretation) -> tuple[bool, dict | None]:
    """Meet of the antecedents below the consequent; the witness is the
    least violating assignment."""
    ctx = sq.context
    lhs = frozenset(assignments(i, ctx))
    for a in sq.antecedents:
        lhs &= eval_formula(a, i, ctx)
    bad = sorted(lhs - eval_formula(sq.consequent, i, ctx))
    if bad:
        return False, {v: e for (v, _), e in zip(ctx, bad[0])}
    return True, None


def check_theory(th: Theory, i: Interpretation) -> Report:
    rep = Report("theory")
    i.validate(th.signature)
    for n, ax in enumerate(th.axioms):
        ok, w = satisfies_sequent(ax, i)
        rep.add(f"axiom {n + 1}", str(ax), ok, w, 1)
    if not th.axioms:
        rep.add("no axioms", "empty theory", True, None, 0)
    return rep


# ------------------------------------------------------------------ pointwise semantics (oracle)


def term_value(t, i: Interpretation, env: dict) -> tuple:
    if isinstance(t, Var):
        return (env[t.name],)
    if isinstance(t, Tup):
        return tuple(x for a in t.items for x in term_value(a, i, env))
    return (i.funs[t.fn][tuple(x for a in t.args for x in term_value(a, i, env))],)


def holds(f, i: Interpretation, env: dict) -> bool:
    """Truth at one assignment, by recursion with quantifier search."""
    if isinstance(f, Top):
        return True
    if isinstance(f, And):
        return holds(f.left, i, env) and holds(f.right, i, env)
    if isinstance(f, Eq):
        return term_value(f.left, i, env) == term_value(f.right, i, env)
    if isinstance(f, Atom):
        return tuple(x for a in f.args for x in term_value(a, i, env)) in i.preds[f.pred]
    if isinstance(f, Exists):
        return any(holds(f.body, i, {**env, f.var: e}) for e in i.sorts[f.sort].elements)
    raise LogicError("type", f"not a formula: {f!r}")


# ------------------------------------------------------------------ substitution


def _fresh(base: str, avoid: set) -> str:
    k = 0
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def subst_term(t, sigma: dict):
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, Tup):
        return Tup(tuple(subst_term(a, sigma) for a in t.items), t.pos)
    return App(t.fn, tuple(subst_term(a, sigma) for a in t.args), t.pos)


def substitute(f, sigma: dict):
    """Capture-avoiding f[sigma]; bound variables are renamed when they
    clash with variables of the substituted terms."""
    if isinstance(f, Top):
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, sigma) for a in f.args), f.pos)
    if isinstance(f, Eq):
        return Eq(subst_term(f.left, sigma), subst_term(f.right, sigma), f.pos)
    if isinstance(f, And):
        return And(substitute(f.left, sigma), substitute(f.right, sigma), f.pos)
    if isinstance(f, Exists):
        inner = {k: v for k, v in sigma.items() if k != f.var}
        clash = {v for t in inner.values() for v in free_vars(Eq(t, t))}
        if f.var in clash:
            avoid = clash | set(free_vars(f.body)) | set(inner)
            new = _fresh(f.var, avoid)
            body = substitute(f.body, {f.var: Var(new)})
            return Exists(new, f.sort, substitute(body, inner), f.pos)
        return Exists(f.var, f.sort, substitute(f.body, inner), f.pos)
    raise LogicError("type", f"not a formula: {f!r}")


# ------------------------------------------------------------------ pullback sequents


SQUARE_SIGNATURE = Signature(["P", "X", "Xp", "Y"],
                             {"u": (("P",), "X"), "v": (("P",), "Xp"), "t": (("X",), "Y"), "s": (("Xp",), "Y")}, {})


def pullback_sequents(sig: Signature = SQUARE_SIGNATURE, u="u", v="v", t="t", s="s") -> list[Sequent]:
    """For a square u;t = v;s of function symbols: existence
    t(m) = s(m') |- exists p. u(p) = m & v(p) = m', and uniqueness
    u(p) = u(p'), v(p) = v(p') |- p = p'."""
    P = sig.funs[u][0][0]
    m, mp, p, pp = Var("m"), Var("m'"), Var("p"), Var("p'")
    exist = close_sequent(sig, [("m", sig.funs[u][1]), ("m'", sig.funs[v][1])],
                          (Eq(App(t, (m,)), App(s, (mp,))),),
                          Exists("p", P, And(Eq(App(u, (Var("p"),)), m), Eq(App(v, (Var("p"),)), mp))))
    unique = close_sequent(sig, [("p", P), ("p'", P)],
                           (Eq(App(u, (p,)), App(u, (pp,))), Eq(App(v, (p,)), App(v, (pp,)))), Eq(p, pp))
    return [exist, unique]


def square_model(sq) -> Interpretation:
    """Interpret the square signature by a commuting square of functions."""
    sorts = {"P": sq.P, "X": sq.X, "Xp": sq.Xp, "Y": sq.Y}
    funs = {name: {(x,): f(x) for x in f.src} for name, f in (("u", sq.u), ("v", sq.v), ("t", sq.t), ("s", sq.s))}
    return Interpretation(sorts, funs, {})


def pullback_sequent_agreement(bound: int = 3) -> Report:
    """Over every commuting square of sets within the bound: the two
    sequents hold in Sub iff the square is a pullback iff the cells of the
    square and of its kernel square are exact in matrices over Sub."""
    from . import equip as E
    from . import fib as B
    rep = Report("pullback-sequents")
    sub = B.SubFibration(bound)
    eq = E.matr(sub)
    exist, unique = pullback_sequents()
    n = 0
    w = {"seq": None, "cells": None, "exist": None, "unique": None}
    counter = None
    for sq in B.commuting_squares(bound):
        n += 1
        i = square_model(sq)
        e_ok = satisfies_sequent(exist, i)[0]
        u_ok = satisfies_sequent(unique, i)[0]
        pb = B.is_set_pullback(sq)
        cells = all(E.square_exact(eq, sq)) and all(E.square_exact(eq, B.kernel_square(sub.base, sq)))
        if (e_ok and u_ok) != pb:
            w["seq"] = w["seq"] or sq
        if cells != pb:
            w["cells"] = w["cells"] or sq
        if e_ok != B.is_weak_pullback(sq):
            w["exist"] = w["exist"] or sq
        if u_ok != B.comparison(None, sq)[1]:
            w["unique"] = w["unique"] or sq
        if counter is None and not pb:
            counter = (sq, "existence" if not e_ok else "uniqueness")
    rep.add("sequents iff pullback", "both sequents hold in Sub exactly for pullbacks", w["seq"] is None, w["seq"], n)
    rep.add("pullback iff exact cells", "square and kernel square exact exactly for pullbacks",
            w["cells"] is None, w["cells"], n)
    rep.add("existence sequent iff weak pullback", "existence half alone", w["exist"] is None, w["exist"], n)
    rep.add("uniqueness sequent iff injective comparison", "uniqueness half alone", w["unique"] is None,
            w["unique"], n)
    rep.info["non-pullback counterexample"] = counter
    return rep


# ------------------------------------------------------------------ random instances


def random_signature(rng: random.Random) -> Signature:
    sorts = [f"S{k}" for k in range(rng.randint(1, 2))]
    funs = {}
    for k in range(rng.randint(0, 3)):
        funs[f"f{k}"] = (tuple(rng.choice(sorts) for _ in range(rng.randint(1, 2))), rng.choice(sorts))
    preds = {f"P{k}": tuple(rng.choice(sorts) for _ in range(rng.randint(1, 2))) for k in range(rng.randint(1, 2))}
    return Signature(sorts, funs, preds)


def random_model(sig: Signature, rng: random.Random, max_size: int = 3) -> Interpretation:
    sorts = {s: FinSetObj(s, tuple(f"{s.lower()}{k}" for k in range(rng.randint(1, max_size)))) for s in sig.sorts}
    funs = {}
    for f, (args, res) in sig.funs.items():
        dom = itertools.product(*[sorts[s].elements for s in args])
        funs[f] = {d: rng.choice(sorts[res].elements) for d in dom}
    preds = {}
    for p, args in sig.preds.items():
        dom = list(itertools.product(*[sorts[s].elements for s in args]))
        preds[p] = frozenset(d for d in dom if rng.random() < 0.5)
    return Interpretation(sorts, funs, preds)


def random_term(sig: Signature, rng: random.Random, ctx: list, sort: str, depth: int = 2):
    vars_ = [Var(v) for v, s in ctx if s == sort]
    funs = [f for f, (_, r) in sig.funs.items() if r == sort]
    if vars_ and (depth == 0 or not funs or rng.random() < 0.5):
        return rng.choice(vars_)
    if not funs or depth < 0:
        return None
    f = rng.choice(funs)
    args = [random_term(sig, rng, ctx, a, depth - 1) for a in sig.funs[f][0]]
    if any(a is None for a in args):
        return rng.choice(vars_) if vars_ else None
    return App(f, tuple(args))


def random_formula(sig: Signature, rng: random.Random, ctx: list, depth: int = 3, names: Iterator | None = None):
    names = names if names is not None else (f"z{k}" for k in itertools.count())
    r = rng.random()
    if depth == 0 or r < 0.25:
        choice = rng.random()
        if choice < 0.1:
            return Top()
        if choice < 0.6:
            p = rng.choice(sorted(sig.preds))
            args = [random_term(sig, rng, ctx, s) for s in sig.preds[p]]
            if all(a is not None for a in args):
                return Atom(p, tuple(args))
        sort = rng.choice(sig.sorts)
        a, b = random_term(sig, rng, ctx, sort), random_term(sig, rng, ctx, sort)
        if a is None or b is None:
            return Top()
        return Eq(a, b)
    if r < 0.6:
        return And(random_formula(sig, rng, ctx, depth - 1, names), random_formula(sig, rng, ctx, depth - 1, names))
    v = next(names)
    s = rng.choice(sig.sorts)
    return Exists(v, s, random_formula(sig, rng, ctx + [(v, s)], depth - 1, names))


def logic_suite(count: int = 1000, seed: int = 0, max_size: int = 3) -> Report:
    """Random (formula, model) instances over sets within max_size:
    compositional denotation against pointwise truth, the substitution
    lemma, the Frobenius form of the existential image, and sequent
    satisfaction against the pointwise reading."""
    rng = random.Random(seed)
    rep = Report("regular-logic")
    bad = {"den": None, "subst": None, "frob": None, "sat": None, "mono": None}
    for n in range(count):
        sig = random_signature(rng)
        i = random_model(sig, rng, max_size)
        ctx = [(f"x{k}", rng.choice(sig.sorts)) for k in range(rng.randint(0, 2))]
        f = random_formula(sig, rng, ctx)
        check_formula(sig, f, dict(ctx))
        den = eval_formula(f, i, ctx)
        oracle = frozenset(g for g in assignments(i, ctx) if holds(f, i, {v: e for (v, _), e in zip(ctx, g)}))
        if den != oracle:
            bad["den"] = bad["den"] or {"formula": str(f), "instance": n}
        # substitution: a context gamma and a term for each variable of ctx
        gamma = [(f"y{k}", rng.choice(sig.sorts)) for k in range(rng.randint(1, 2))]
        sigma = {}
        for v, s in ctx:
            t = random_term(sig, rng, gamma, s)
            if t is None:
                break
            sigma[v] = t
        if len(sigma) == len(ctx):
            fs = substitute(f, sigma)
            check_formula(sig, fs, dict(gamma))
            gidx = {v: k for k, (v, _) in enumerate(gamma)}
            terms = [_compile_term(sigma[v], gidx, i) for v, _ in ctx]
            pulled = frozenset(g for g in assignments(i, gamma) if tuple(tm(g)[0] for tm in terms) in den)
            if eval_formula(fs, i, gamma) != pulled:
                bad["subst"] = bad["subst"] or {"formula": str(f), "sigma": {k: str(v) for k, v in sigma.items()}}
        # Frobenius: image of phi along a term t equals exists xs. t(xs) = y & phi
        if ctx:
            s = rng.choice(sig.sorts)
            t = random_term(sig, rng, ctx, s)
            if t is not None:
                idx = {v: k for k, (v, _) in enumerate(ctx)}
                tt = _compile_term(t, idx, i)
                image = frozenset(tt(g) for g in den)
                g_formula = And(Eq(t, Var("y")), f)
                for v, sv in reversed(ctx):
                    g_formula = Exists(v, sv, g_formula)
                check_formula(sig, g_formula, {"y": s})
                if eval_formula(g_formula, i, [("y", s)]) != image:
                    bad["frob"] = bad["frob"] or {"formula": str(f), "term": str(t)}
        # sequent satisfaction against the pointwise reading, and monotonicity
        a = random_formula(sig, rng, ctx, 2)
        sq = Sequent(tuple(ctx), (a,), f)
        ok, _ = satisfies_sequent(sq, i)
        envs = [{v: e for (v, _), e in zip(ctx, g)} for g in assignments(i, ctx)]
        pointwise = all(holds(f, i, e) for e in envs if holds(a, i, e))
        if ok != pointwise:
            bad["sat"] = bad["sat"] or {"sequent": str(sq)}
        if ok:
            b = random_formula(sig, rng, ctx, 1)
            if not satisfies_sequent(Sequent(tuple(ctx), (a, b), f), i)[0]:
                bad["mono"] = bad["mono"] or {"sequent": str(sq), "extra": str(b)}
    rep.add("denotation vs pointwise truth", "T, &, exists, =, P(t) read in subsets", bad["den"] is None, bad["den"],
            count)
    rep.add("substitution lemma", "den(phi[sigma]) = den(sigma)* den(phi)", bad["subst"] is None, bad["subst"], count)
    rep.add("Frobenius image", "image along t = exists xs. t = y & phi", bad["frob"] is None, bad["frob"], count)
    rep.add("sequent satisfaction", "meet of antecedents below consequent", bad["sat"] is None, bad["sat"], count)
    rep.add("monotonicity", "strengthening an antecedent preserves satisfaction", bad["mono"] is None, bad["mono"],
            count)
    return rep


def load_model(sig: Signature, text: str) -> Interpretation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise LogicError("model", f"invalid JSON: {e.msg}", (e.lineno, e.colno)) from None
    return Interpretation.from_json(sig, data)
