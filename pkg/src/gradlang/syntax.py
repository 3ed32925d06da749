"""Lexer, parser and pretty-printer for terms and type annotations.

Concrete grammar (terms):

    term      ::= "let" ["rec"] IDENT param* "=" term "in" term
                | "fun" param+ "->" term
                | "match" term "with" ["|"] arm ("|" arm)*
                | annot
    param     ::= IDENT | "(" IDENT ":" type ")"
    arm       ::= UIDENT [IDENT | "_"] ("->" | "=>") term
    annot     ::= cmp (":" type)*
    cmp       ::= add [("<" | "<=" | ">" | ">=" | "==" | "!=") add]
    add       ::= mul (("+" | "-") mul)*
    mul       ::= pow (("*" | "/") pow)*
    pow       ::= app ("**" app)*
    app       ::= atom+              -- juxtaposition, left associative
    atom      ::= INT | DOUBLE | STRING | DATE | CURRENCY
                | IDENT | UIDENT | "(" term ")" | "(" OPERATOR ")"
                | "{" [IDENT "=" term ("," IDENT "=" term)*] "}"
                | atom "." IDENT     -- record projection

An uppercase identifier in term position is a variant injection; at the head
of an application it takes the next atom as payload, otherwise the payload is
the empty record.  A fixed set of uppercase names (USD, EUR, ...) lexes as
currency literals instead.  Dates are written `2021-01-17`.  Binary operators
are ordinary curried functions; only precedence is syntax.

Concrete grammar (types):

    type      ::= row | mu
    mu        ::= ("mu" | "\u03bc") IDENT "." mu | arrow
    arrow     ::= appty ["->" mu]
    appty     ::= UIDENT atomty* | atomty
    atomty    ::= "?" | "Dyn" | UIDENT | IDENT | "\u03b5"
                | "(" type ")" | "{" [row] "}" | "[" [row] "]"
    row       ::= field (";" field)* [";" (IDENT | "\u03b5")]
    field     ::= (IDENT | UIDENT) ":" mu

`{...}` is a record of a row, `[...]` a variant of a row; a row without an
explicit tail is closed (empty-row tail).  `?` and `Dyn` both denote the
dynamic type.  `List t` is an alias for the usual recursive two-constructor
encoding and expands during interning.  `--` starts a line comment.
"""

from __future__ import annotations

import datetime
import re
from dataclasses import dataclass, field, replace

from .diagnostics import DUMMY_SPAN, ParseError, ScopeError, Span

# ---------------------------------------------------------------------------
# Surface types

@dataclass(frozen=True)
class SurfaceType:
    pass


@dataclass(frozen=True)
class TVar(SurfaceType):
    name: str


@dataclass(frozen=True)
class TCtor(SurfaceType):
    name: str
    args: tuple[SurfaceType, ...] = ()


@dataclass(frozen=True)
class TArrow(SurfaceType):
    dom: SurfaceType
    cod: SurfaceType


@dataclass(frozen=True)
class TRecord(SurfaceType):
    row: SurfaceType


@dataclass(frozen=True)
class TVariant(SurfaceType):
    row: SurfaceType


@dataclass(frozen=True)
class TRowField(SurfaceType):
    label: str
    ty: SurfaceType
    tail: SurfaceType


@dataclass(frozen=True)
class TRowEmpty(SurfaceType):
    pass


@dataclass(frozen=True)
class TMu(SurfaceType):
    var: str
    body: SurfaceType


@dataclass(frozen=True)
class TDyn(SurfaceType):
    pass


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Term:
    pass


def _span_field():
    return field(default=DUMMY_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Term):
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class Lit(Term):
    kind: str  # int | double | string | date | currency
    value: object
    span: Span = _span_field()


@dataclass(frozen=True)
class Lam(Term):
    param: str
    body: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class Let(Term):
    rec: bool
    name: str
    bound: Term
    body: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class Annot(Term):
    term: Term
    ty: SurfaceType
    span: Span = _span_field()


@dataclass(frozen=True)
class RecordLit(Term):
    fields: tuple[tuple[str, Term], ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class Proj(Term):
    term: Term
    label: str
    span: Span = _span_field()


@dataclass(frozen=True)
class Inject(Term):
    label: str
    payload: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class Match(Term):
    scrutinee: Term
    arms: tuple[tuple[str, str | None, Term], ...]
    span: Span = _span_field()


# ---------------------------------------------------------------------------
# Lexer

KEYWORDS = {"let", "rec", "in", "match", "with", "fun", "mu"}
CURRENCIES = ("USD", "EUR", "GBP", "JPY", "CHF", "CAD", "AUD")

# Longest operators first so that `**` wins over `*` and `->` over `-`.
OPERATORS = [
    "**", "->", "=>", "<=", ">=", "==", "!=",
    "+", "-", "*", "/", "<", ">", "=", "|", ":", ";", ",", ".",
    "(", ")", "{", "}", "[", "]", "?", "_", "\u03b5",
]

BINOPS = {
    "**": 70, "*": 60, "/": 60, "+": 50, "-": 50,
    "<": 40, "<=": 40, ">": 40, ">=": 40, "==": 40, "!=": 40,
}

_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}")
_DOUBLE_RE = re.compile(r"\d+\.\d+")
_INT_RE = re.compile(r"\d+")
_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*")


@dataclass(frozen=True)
class Token:
    kind: str  # int double string date lident uident keyword op eof
    value: object
    span: Span


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(source)

    def emit(kind, value, length, start_line, start_col):
        tokens.append(Token(kind, value, Span(start_line, start_col, line, col)))

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("--", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c == '"':
            j = i + 1
            buf = []
            while j < n and source[j] != '"':
                if source[j] == "\\" and j + 1 < n:
                    esc = source[j + 1]
                    buf.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                    j += 2
                else:
                    buf.append(source[j])
                    j += 1
            if j >= n:
                raise ParseError("unterminated string literal", Span(line, col, line, col))
            width = j + 1 - i
            i = j + 1
            col += width
            emit("string", "".join(buf), width, start_line, start_col)
            continue
        if c.isdigit():
            m = _DATE_RE.match(source, i)
            if m and not (m.end() < n and source[m.end()].isdigit()):
                text = m.group()
                i = m.end()
                col += len(text)
                emit("date", datetime.date.fromisoformat(text), len(text), start_line, start_col)
                continue
            m = _DOUBLE_RE.match(source, i)
            if m:
                text = m.group()
                i = m.end()
                col += len(text)
                emit("double", float(text), len(text), start_line, start_col)
                continue
            m = _INT_RE.match(source, i)
            text = m.group()
            i = m.end()
            col += len(text)
            emit("int", int(text), len(text), start_line, start_col)
            continue
        if c == "\u03bc":
            i += 1
            col += 1
            emit("keyword", "mu", 1, start_line, start_col)
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            text = m.group()
            i = m.end()
            col += len(text)
            if text in KEYWORDS:
                emit("keyword", text, len(text), start_line, start_col)
            elif text[0].isupper():
                emit("uident", text, len(text), start_line, start_col)
            else:
                emit("lident", text, len(text), start_line, start_col)
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                i += len(op)
                col += len(op)
                emit("op", op, len(op), start_line, start_col)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", Span(line, col, line, col + 1))
    tokens.append(Token("eof", None, Span(line, col, line, col)))
    return tokens


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    # -- token helpers

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value in ops

    def at_kw(self, *kws: str) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.value in kws

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            self.fail(f"'{op}'")
        return self.next()

    def expect_kw(self, kw: str) -> Token:
        if not self.at_kw(kw):
            self.fail(f"'{kw}'")
        return self.next()

    def expect_lident(self) -> Token:
        if self.peek().kind != "lident":
            self.fail("identifier")
        return self.next()

    def fail(self, *expected: str):
        tok = self.peek()
        shown = tok.value if tok.kind != "eof" else "end of input"
        raise ParseError(f"unexpected {shown!r}", tok.span, expected)

    def span_from(self, start: Span) -> Span:
        prev = self.tokens[self.pos - 1] if self.pos > 0 else self.peek()
        return Span(start.line, start.col, prev.span.end_line, prev.span.end_col)

    # -- terms

    def parse_term(self) -> Term:
        start = self.peek().span
        if self.at_kw("let"):
            return self.parse_let()
        if self.at_kw("fun"):
            self.next()
            params = [self.parse_param()]
            while not self.at_op("->"):
                params.append(self.parse_param())
            self.expect_op("->")
            body = self.parse_term()
            return self.build_lambda(params, body, self.span_from(start))
        if self.at_kw("match"):
            self.next()
            scrutinee = self.parse_term()
            self.expect_kw("with")
            arms = self.parse_arms()
            return Match(scrutinee, tuple(arms), span=self.span_from(start))
        return self.parse_annot()

    def parse_let(self) -> Term:
        start = self.peek().span
        self.expect_kw("let")
        rec = False
        if self.at_kw("rec"):
            self.next()
            rec = True
        name = self.expect_lident().value
        params = []
        while not self.at_op("="):
            params.append(self.parse_param())
        self.expect_op("=")
        bound = self.parse_term()
        if params:
            bound = self.build_lambda(params, bound, bound.span)
        self.expect_kw("in")
        body = self.parse_term()
        return Let(rec, name, bound, body, span=self.span_from(start))

    def parse_param(self) -> tuple[str, SurfaceType | None, Span]:
        tok = self.peek()
        if tok.kind == "lident":
            self.next()
            return (tok.value, None, tok.span)
        if self.at_op("("):
            self.next()
            name = self.expect_lident()
            self.expect_op(":")
            ty = self.parse_type()
            self.expect_op(")")
            return (name.value, ty, name.span)
        self.fail("parameter")

    def build_lambda(self, params, body: Term, span: Span) -> Term:
        for name, ty, pspan in reversed(params):
            if ty is not None:
                body = annotate_uses(body, name, ty, pspan)
            body = Lam(name, body, span=span)
        return body

    def parse_arms(self) -> list[tuple[str, str | None, Term]]:
        if self.at_op("|"):
            self.next()
        arms = [self.parse_arm()]
        labels = {arms[0][0]}
        while self.at_op("|"):
            self.next()
            arm = self.parse_arm()
            if arm[0] in labels:
                raise ParseError(f"duplicate match label '{arm[0]}'", self.peek().span)
            labels.add(arm[0])
            arms.append(arm)
        return arms

    def parse_arm(self) -> tuple[str, str | None, Term]:
        tok = self.peek()
        if tok.kind != "uident":
            self.fail("variant label")
        self.next()
        binder = None
        nxt = self.peek()
        if nxt.kind in ("lident", "uident"):
            binder = self.next().value
        elif self.at_op("_"):
            self.next()
            binder = "_"
        if not (self.at_op("->") or self.at_op("=>")):
            self.fail("'->'", "'=>'")
        self.next()
        body = self.parse_term()
        return (tok.value, binder, body)

    def parse_annot(self) -> Term:
        start = self.peek().span
        term = self.parse_cmp()
        while self.at_op(":"):
            self.next()
            ty = self.parse_type()
            term = Annot(term, ty, span=self.span_from(start))
        return term

    def parse_cmp(self) -> Term:
        start = self.peek().span
        left = self.parse_add()
        if self.at_op("<", "<=", ">", ">=", "==", "!="):
            op = self.next()
            right = self.parse_add()
            return self.binop(op, left, right, start)
        return left

    def parse_add(self) -> Term:
        start = self.peek().span
        term = self.parse_mul()
        while self.at_op("+", "-"):
            op = self.next()
            term = self.binop(op, term, self.parse_mul(), start)
        return term

    def parse_mul(self) -> Term:
        start = self.peek().span
        term = self.parse_pow()
        while self.at_op("*", "/"):
            op = self.next()
            term = self.binop(op, term, self.parse_pow(), start)
        return term

    def parse_pow(self) -> Term:
        start = self.peek().span
        term = self.parse_app()
        while self.at_op("**"):
            op = self.next()
            term = self.binop(op, term, self.parse_app(), start)
        return term

    def binop(self, op: Token, left: Term, right: Term, start: Span) -> Term:
        span = self.span_from(start)
        fn = App(Var(op.value, span=op.span), left, span=span)
        return App(fn, right, span=span)

    def at_atom(self) -> bool:
        tok = self.peek()
        if tok.kind in ("int", "double", "string", "date", "lident", "uident"):
            return True
        return self.at_op("(", "{")

    def parse_app(self) -> Term:
        start = self.peek().span
        atoms = [self.parse_atom()]
        while self.at_atom():
            atoms.append(self.parse_atom())
        head = atoms[0]
        rest = atoms[1:]
        if isinstance(head, _VariantHead):
            if rest:
                payload, rest = rest[0], rest[1:]
                payload = self.unwrap(payload)
            else:
                payload = RecordLit((), span=head.span)
            term = Inject(head.label, payload, span=self.span_from(start))
        else:
            term = self.unwrap(head)
        for atom in rest:
            term = App(term, self.unwrap(atom), span=self.span_from(start))
        return term

    def unwrap(self, atom) -> Term:
        if isinstance(atom, _VariantHead):
            return Inject(atom.label, RecordLit((), span=atom.span), span=atom.span)
        return atom

    def parse_atom(self):
        tok = self.peek()
        start = tok.span
        if tok.kind == "int":
            self.next()
            atom: Term = Lit("int", tok.value, span=tok.span)
        elif tok.kind == "double":
            self.next()
            atom = Lit("double", tok.value, span=tok.span)
        elif tok.kind == "string":
            self.next()
            atom = Lit("string", tok.value, span=tok.span)
        elif tok.kind == "date":
            self.next()
            atom = Lit("date", tok.value, span=tok.span)
        elif tok.kind == "lident":
            self.next()
            atom = Var(tok.value, span=tok.span)
        elif tok.kind == "uident":
            self.next()
            if tok.value in CURRENCIES:
                atom = Lit("currency", tok.value, span=tok.span)
            else:
                atom = _VariantHead(tok.value, tok.span)
        elif self.at_op("("):
            self.next()
            optok = self.peek()
            if optok.kind == "op" and optok.value in BINOPS and self.peek(1).kind == "op" \
                    and self.peek(1).value == ")":
                self.next()
                self.next()
                atom = Var(optok.value, span=optok.span)
            else:
                atom = self.parse_term()
                self.expect_op(")")
        elif self.at_op("{"):
            self.next()
            fields = []
            labels = set()
            if not self.at_op("}"):
                while True:
                    label = self.expect_lident()
                    if label.value in labels:
                        raise ParseError(f"duplicate record label '{label.value}'", label.span)
                    labels.add(label.value)
                    self.expect_op("=")
                    fields.append((label.value, self.parse_term()))
                    if self.at_op(","):
                        self.next()
                        continue
                    break
            self.expect_op("}")
            atom = RecordLit(tuple(fields), span=self.span_from(start))
        else:
            self.fail("term")
        # Postfix projections bind tightest.
        while self.at_op(".") and self.peek(1).kind == "lident":
            self.next()
            label = self.next()
            base = self.unwrap(atom)
            atom = Proj(base, label.value, span=self.span_from(start))
        return atom

    # -- types

    def parse_type(self) -> SurfaceType:
        if self.looks_like_row():
            return self.parse_row(closer=None)
        return self.parse_mu_type()

    def looks_like_row(self) -> bool:
        tok = self.peek()
        if tok.kind not in ("lident", "uident"):
            return self.at_op("\u03b5")
        follow = self.peek(1)
        return follow.kind == "op" and follow.value == ":"

    def parse_mu_type(self) -> SurfaceType:
        if self.at_kw("mu"):
            self.next()
            var = self.expect_lident().value
            self.expect_op(".")
            return TMu(var, self.parse_mu_type())
        return self.parse_arrow_type()

    def parse_arrow_type(self) -> SurfaceType:
        dom = self.parse_app_type()
        if self.at_op("->"):
            self.next()
            return TArrow(dom, self.parse_mu_type())
        return dom

    def parse_app_type(self) -> SurfaceType:
        tok = self.peek()
        if tok.kind == "uident" and tok.value not in ("Dyn",):
            self.next()
            args = []
            while self.at_type_atom():
                args.append(self.parse_atom_type())
            return TCtor(tok.value, tuple(args))
        return self.parse_atom_type()

    def at_type_atom(self) -> bool:
        tok = self.peek()
        if tok.kind in ("lident", "uident"):
            return True
        return self.at_op("(", "{", "[", "?")

    def parse_atom_type(self) -> SurfaceType:
        tok = self.peek()
        if self.at_op("?"):
            self.next()
            return TDyn()
        if self.at_op("\u03b5"):
            self.next()
            return TRowEmpty()
        if tok.kind == "uident":
            self.next()
            if tok.value == "Dyn":
                return TDyn()
            return TCtor(tok.value, ())
        if tok.kind == "lident":
            self.next()
            return TVar(tok.value)
        if self.at_op("("):
            self.next()
            ty = self.parse_type()
            self.expect_op(")")
            return ty
        if self.at_op("{"):
            self.next()
            row = TRowEmpty() if self.at_op("}") else self.parse_row(closer="}")
            self.expect_op("}")
            return TRecord(row)
        if self.at_op("["):
            self.next()
            row = TRowEmpty() if self.at_op("]") else self.parse_row(closer="]")
            self.expect_op("]")
            return TVariant(row)
        self.fail("type")

    def parse_row(self, closer: str | None) -> SurfaceType:
        fields = []
        labels = set()
        tail: SurfaceType = TRowEmpty()
        while True:
            tok = self.peek()
            if self.at_op("\u03b5"):
                self.next()
                break
            if tok.kind in ("lident", "uident"):
                follow = self.peek(1)
                if follow.kind == "op" and follow.value == ":":
                    if tok.value in labels:
                        raise ParseError(f"duplicate row label '{tok.value}'", tok.span)
                    labels.add(tok.value)
                    self.next()
                    self.next()
                    fields.append((tok.value, self.parse_mu_type()))
                    if self.at_op(";"):
                        self.next()
                        continue
                    break
                if tok.kind == "lident":
                    self.next()
                    tail = TVar(tok.value)
                    break
            self.fail("row field", "row tail")
        row = tail
        for label, ty in reversed(fields):
            row = TRowField(label, ty, row)
        return row


@dataclass(frozen=True)
class _VariantHead:
    label: str
    span: Span


def annotate_uses(term: Term, name: str, ty: SurfaceType, span: Span) -> Term:
    """Wrap every free occurrence of `name` in `term` with `(name : ty)`."""
    if isinstance(term, Var):
        if term.name == name:
            return Annot(term, ty, span=term.span)
        return term
    if isinstance(term, Annot):
        if isinstance(term.term, Var) and term.term.name == name:
            return term
        return replace(term, term=annotate_uses(term.term, name, ty, span))
    if isinstance(term, Lam):
        if term.param == name:
            return term
        return replace(term, body=annotate_uses(term.body, name, ty, span))
    if isinstance(term, App):
        return replace(
            term,
            fn=annotate_uses(term.fn, name, ty, span),
            arg=annotate_uses(term.arg, name, ty, span),
        )
    if isinstance(term, Let):
        bound = term.bound if term.rec and term.name == name else annotate_uses(term.bound, name, ty, span)
        body = term.body if term.name == name else annotate_uses(term.body, name, ty, span)
        return replace(term, bound=bound, body=body)
    if isinstance(term, RecordLit):
        return replace(
            term,
            fields=tuple((l, annotate_uses(t, name, ty, span)) for l, t in term.fields),
        )
    if isinstance(term, Proj):
        return replace(term, term=annotate_uses(term.term, name, ty, span))
    if isinstance(term, Inject):
        return replace(term, payload=annotate_uses(term.payload, name, ty, span))
    if isinstance(term, Match):
        arms = tuple(
            (l, b, body if b == name else annotate_uses(body, name, ty, span))
            for l, b, body in term.arms
        )
        return replace(term, scrutinee=annotate_uses(term.scrutinee, name, ty, span), arms=arms)
    return term


def parse_term(source: str) -> Term:
    p = _Parser(source)
    term = p.parse_term()
    if p.peek().kind != "eof":
        p.fail("end of input")
    return term


def parse_type(source: str) -> SurfaceType:
    p = _Parser(source)
    ty = p.parse_type()
    if p.peek().kind != "eof":
        p.fail("end of input")
    return ty


def parse_binding(source: str) -> tuple[bool, str, Term]:
    """Parse a `let`-binding without an `in` body, as used by the REPL/prelude."""
    p = _Parser(source)
    start = p.peek().span
    p.expect_kw("let")
    rec = False
    if p.at_kw("rec"):
        p.next()
        rec = True
    name = p.expect_lident().value
    params = []
    while not p.at_op("="):
        params.append(p.parse_param())
    p.expect_op("=")
    bound = p.parse_term()
    if params:
        bound = p.build_lambda(params, bound, p.span_from(start))
    if p.peek().kind != "eof":
        p.fail("end of input")
    return rec, name, bound


# ---------------------------------------------------------------------------
# Scope checking

def scope_check(term: Term, bound: frozenset[str]) -> None:
    """Every variable must be lexically bound or a known global name."""
    if isinstance(term, Var):
        if term.name not in bound:
            raise ScopeError(f"unbound variable '{term.name}'", term.span)
    elif isinstance(term, Lam):
        scope_check(term.body, bound | {term.param})
    elif isinstance(term, App):
        scope_check(term.fn, bound)
        scope_check(term.arg, bound)
    elif isinstance(term, Let):
        inner = bound | {term.name}
        scope_check(term.bound, inner if term.rec else bound)
        scope_check(term.body, inner)
    elif isinstance(term, Annot):
        scope_check(term.term, bound)
    elif isinstance(term, RecordLit):
        for _, t in term.fields:
            scope_check(t, bound)
    elif isinstance(term, Proj):
        scope_check(term.term, bound)
    elif isinstance(term, Inject):
        scope_check(term.payload, bound)
    elif isinstance(term, Match):
        scope_check(term.scrutinee, bound)
        for _, binder, body in term.arms:
            extra = {binder} if binder and binder != "_" else set()
            scope_check(body, bound | extra)


# ---------------------------------------------------------------------------
# Pretty-printing

_PREC_ANNOT = 10
_PREC_CMP = 40
_PREC_APP = 80
_PREC_ATOM = 100


def pretty_term(term: Term) -> str:
    return _pt(term, 0)


def _binop_view(term: Term):
    if isinstance(term, App) and isinstance(term.fn, App) and isinstance(term.fn.fn, Var):
        op = term.fn.fn.name
        if op in BINOPS:
            return op, term.fn.arg, term.arg
    return None


def _pt(term: Term, prec: int) -> str:
    if isinstance(term, Var):
        if term.name in BINOPS:
            return f"({term.name})"
        return term.name
    if isinstance(term, Lit):
        if term.kind == "string":
            body = str(term.value).replace("\\", "\\\\").replace('"', '\\"')
            body = body.replace("\n", "\\n").replace("\t", "\\t")
            return f'"{body}"'
        if term.kind == "date":
            return term.value.isoformat()
        return str(term.value)
    view = _binop_view(term)
    if view is not None:
        op, left, right = view
        p = BINOPS[op]
        # Comparisons are non-associative; arithmetic is left-associative.
        lp, rp = (p, p + 1) if p > _PREC_CMP else (p + 1, p + 1)
        text = f"{_pt(left, lp)} {op} {_pt(right, rp)}"
        return f"({text})" if prec > p else text
    if isinstance(term, App):
        text = f"{_pt(term.fn, _PREC_APP)} {_pt(term.arg, _PREC_APP + 1)}"
        return f"({text})" if prec > _PREC_APP else text
    if isinstance(term, Lam):
        params = [term.param]
        body = term.body
        while isinstance(body, Lam):
            params.append(body.param)
            body = body.body
        text = f"fun {' '.join(params)} -> {_pt(body, 0)}"
        return f"({text})" if prec > 0 else text
    if isinstance(term, Let):
        kw = "let rec" if term.rec else "let"
        params = []
        bound = term.bound
        while isinstance(bound, Lam):
            params.append(bound.param)
            bound = bound.body
        head = " ".join([term.name] + params)
        text = f"{kw} {head} = {_pt(bound, 0)} in {_pt(term.body, 0)}"
        return f"({text})" if prec > 0 else text
    if isinstance(term, Annot):
        text = f"{_pt(term.term, _PREC_ANNOT + 1)} : {pretty_type(term.ty)}"
        return f"({text})" if prec > _PREC_ANNOT else text
    if isinstance(term, RecordLit):
        inner = ", ".join(f"{l} = {_pt(t, 0)}" for l, t in term.fields)
        return "{" + (f" {inner} " if inner else "") + "}"
    if isinstance(term, Proj):
        return f"{_pt(term.term, _PREC_ATOM)}.{term.label}"
    if isinstance(term, Inject):
        if isinstance(term.payload, RecordLit) and not term.payload.fields:
            text = term.label
        else:
            text = f"{term.label} {_pt(term.payload, _PREC_APP + 1)}"
        return f"({text})" if prec > _PREC_APP else text
    if isinstance(term, Match):
        arms = " ".join(
            f"| {l}{(' ' + b) if b else ''} -> {_pt(body, 1)}" for l, b, body in term.arms
        )
        text = f"match {_pt(term.scrutinee, 1)} with {arms}"
        return f"({text})" if prec > 0 else text
    raise TypeError(f"unknown term {term!r}")


def pretty_type(ty: SurfaceType) -> str:
    return _pty(ty, 0)


def _pty(ty: SurfaceType, prec: int) -> str:
    # prec levels: 0 = open, 1 = arrow argument, 2 = application argument
    if isinstance(ty, TVar):
        return ty.name
    if isinstance(ty, TDyn):
        return "?"
    if isinstance(ty, TCtor):
        if not ty.args:
            return ty.name
        text = " ".join([ty.name] + [_pty(a, 2) for a in ty.args])
        return f"({text})" if prec >= 2 else text
    if isinstance(ty, TArrow):
        text = f"{_pty(ty.dom, 1)} -> {_pty(ty.cod, 0)}"
        return f"({text})" if prec >= 1 else text
    if isinstance(ty, TRecord):
        return "{" + _row_text(ty.row, braced=True) + "}"
    if isinstance(ty, TVariant):
        return "[" + _row_text(ty.row, braced=True) + "]"
    if isinstance(ty, (TRowField, TRowEmpty)):
        text = _row_text(ty, braced=False)
        return f"({text})" if prec >= 1 else text
    if isinstance(ty, TMu):
        text = f"mu {ty.var}. {_pty(ty.body, 0)}"
        return f"({text})" if prec >= 1 else text
    raise TypeError(f"unknown type {ty!r}")


def _row_text(row: SurfaceType, braced: bool) -> str:
    parts = []
    while isinstance(row, TRowField):
        parts.append(f"{row.label} : {_pty(row.ty, 1)}")
        row = row.tail
    if isinstance(row, TRowEmpty):
        if not braced:
            parts.append("\u03b5")
    elif isinstance(row, TVar):
        parts.append(row.name)
    else:
        parts.append(_pty(row, 1))
    inner = "; ".join(parts)
    if braced and inner:
        return f" {inner} "
    return inner
