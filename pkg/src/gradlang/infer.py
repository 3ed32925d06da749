"""Constraint-generating type inference with gradual annotations.

Inference walks the term once, solving each constraint the moment it is
generated.  Annotated terms keep their annotation as the resulting type even
when inference found something more precise; that is the only door through
which the dynamic type enters a program.  Let-bound syntactic values are
generalized rank-1; dynamic nodes are never quantified and stay shared
across instantiations (per-constraint copying keeps distinct uses apart).

Alongside the result type, inference fills an `InferOutcome` with a
span-to-type table and the runtime-check obligations the evaluator consumes:
each application whose constraint merged a dynamic node against a concrete
type gets an argument check, and each annotation records the pair of types
on either side of its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import syntax as S
from .diagnostics import ScopeError, Span, UnifyError
from .typegraph import (
    Kind,
    Node,
    PDyn,
    PVar,
    STAR,
    TypeStore,
    intern,
    kind_check,
    resolve,
)
from .unify import unify

# ---------------------------------------------------------------------------
# Environments and schemes

@dataclass(frozen=True)
class Scheme:
    """Rank-1 type scheme: universally quantified variable ids over a body."""

    quantified: tuple[int, ...]
    body: Node


class TypeEnv:
    """Lexically scoped map from names to schemes."""

    def __init__(self, parent: "TypeEnv | None" = None):
        self.table: dict[str, Scheme] = {}
        self.parent = parent

    def child(self) -> "TypeEnv":
        return TypeEnv(self)

    def bind(self, name: str, scheme: Scheme) -> None:
        self.table[name] = scheme

    def lookup(self, name: str) -> Scheme | None:
        env: TypeEnv | None = self
        while env is not None:
            if name in env.table:
                return env.table[name]
            env = env.parent
        return None

    def schemes(self):
        env: TypeEnv | None = self
        seen: set[str] = set()
        while env is not None:
            for name, scheme in env.table.items():
                if name not in seen:
                    seen.add(name)
                    yield scheme
            env = env.parent

    def names(self) -> frozenset[str]:
        out: set[str] = set()
        env: TypeEnv | None = self
        while env is not None:
            out.update(env.table)
            env = env.parent
        return frozenset(out)


def mono(node: Node) -> Scheme:
    return Scheme((), node)


def _reachable_vars(store: TypeStore, node: Node, acc: set[int], seen: set[int]) -> None:
    from .typegraph import PApp, PMu, PRow

    stack = [node]
    while stack:
        cur = store.find(stack.pop())
        if cur.id in seen:
            continue
        seen.add(cur.id)
        p = cur.payload
        if isinstance(p, PVar):
            acc.add(cur.id)
        elif isinstance(p, PApp):
            stack.append(p.fn)
            stack.append(p.arg)
        elif isinstance(p, PRow):
            stack.append(p.ty)
            stack.append(p.tail)
        elif isinstance(p, PMu):
            stack.append(p.body)


def generalize(store: TypeStore, env: TypeEnv, node: Node) -> Scheme:
    """Quantify variables free in `node` but not reachable from `env`.

    Only variable representatives are quantified; dynamic nodes are shared.
    """
    ty_vars: set[int] = set()
    _reachable_vars(store, node, ty_vars, set())
    env_vars: set[int] = set()
    seen: set[int] = set()
    for scheme in env.schemes():
        _reachable_vars(store, scheme.body, env_vars, seen)
    quantified = tuple(sorted(ty_vars - env_vars))
    return Scheme(quantified, node)


def instantiate(store: TypeStore, scheme: Scheme) -> Node:
    """Replace quantified variables with fresh ones, sharing everything else."""
    if not scheme.quantified:
        return scheme.body
    from .typegraph import PApp, PMu, PRow

    quantified = set(scheme.quantified)
    fresh: dict[int, Node] = {}
    memo: dict[int, Node] = {}

    def contains_quantified(node: Node) -> bool:
        found: set[int] = set()
        _reachable_vars(store, node, found, set())
        return bool(found & quantified)

    def go(n: Node) -> Node:
        cur = store.find(n)
        p = cur.payload
        if isinstance(p, PVar):
            if cur.id in quantified:
                if cur.id not in fresh:
                    fresh[cur.id] = store.fresh_var()
                return fresh[cur.id]
            return cur
        if cur.id in memo:
            return memo[cur.id]
        if not contains_quantified(cur):
            return cur
        if isinstance(p, PApp):
            out = store._new(PApp(cur, cur))
            memo[cur.id] = out
            out.payload = PApp(go(p.fn), go(p.arg))
            return out
        if isinstance(p, PRow):
            out = store._new(PRow(p.label, cur, cur))
            memo[cur.id] = out
            out.payload = PRow(p.label, go(p.ty), go(p.tail))
            return out
        if isinstance(p, PMu):
            out = store._new(PMu(p.binder, cur))
            memo[cur.id] = out
            out.payload = PMu(p.binder, go(p.body))
            return out
        return cur

    return go(scheme.body)


# ---------------------------------------------------------------------------
# Inference outcome

@dataclass
class Obligation:
    """A runtime check the evaluator must perform at a term."""

    node: Node  # type the value at this position must satisfy
    span: Span


@dataclass
class InferOutcome:
    """Result table of one inference run over one term."""

    types: dict[int, Node] = field(default_factory=dict)  # id(term) -> node
    span_types: list[tuple[Span, Node]] = field(default_factory=list)
    arg_checks: dict[int, Obligation] = field(default_factory=dict)  # id(App)
    boundaries: dict[int, tuple[Node, Node]] = field(default_factory=dict)  # id(Annot)
    event_spans: set[Span] = field(default_factory=set)

    def record(self, term: S.Term, node: Node) -> None:
        self.types[id(term)] = node
        self.span_types.append((term.span, node))

    def dyn_spans(self, store: TypeStore) -> set[Span]:
        """Spans whose type involves the dynamic type or whose constraint
        merged one; the blame-safety property checks containment in these."""
        spans = set(self.event_spans)
        for span, node in self.span_types:
            if store.contains_dyn(node):
                spans.add(span)
        return spans


LITERAL_TYPES = {
    "int": "Int",
    "double": "Double",
    "string": "String",
    "date": "Date",
    "currency": "Currency",
}


class Inference:
    """One inference pass; owns no state beyond the store and outcome."""

    def __init__(self, store: TypeStore, ctor_kinds: dict[str, Kind], outcome: InferOutcome | None = None):
        self.store = store
        self.kinds = ctor_kinds
        self.outcome = outcome if outcome is not None else InferOutcome()

    # -- constraint plumbing

    def constrain(self, left: Node, right: Node, term: S.Term) -> None:
        mark = len(self.store.dyn_events)
        try:
            unify(self.store, left, right)
        except UnifyError as err:
            if err.span is None:
                err.span = term.span
            raise
        finally:
            if len(self.store.dyn_events) > mark:
                self.outcome.event_spans.add(term.span)
                del self.store.dyn_events[mark:]

    # -- the main traversal

    def infer(self, env: TypeEnv, term: S.Term) -> Node:
        node = self._infer(env, term)
        self.outcome.record(term, node)
        return node

    def _infer(self, env: TypeEnv, term: S.Term) -> Node:
        store = self.store

        if isinstance(term, S.Var):
            scheme = env.lookup(term.name)
            if scheme is None:
                raise ScopeError(f"unbound variable '{term.name}'", term.span)
            return instantiate(store, scheme)

        if isinstance(term, S.Lit):
            return store.ctor(LITERAL_TYPES[term.kind])

        if isinstance(term, S.Lam):
            param = store.fresh_var()
            inner = env.child()
            inner.bind(term.param, mono(param))
            body = self.infer(inner, term.body)
            return store.arrow(param, body)

        if isinstance(term, S.App):
            fn_ty = self.infer(env, term.fn)
            arg_ty = self.infer(env, term.arg)
            result = store.fresh_var()
            mark = len(self.outcome.event_spans)
            self.constrain(fn_ty, store.arrow(arg_ty, result), term)
            if term.span in self.outcome.event_spans:
                # A dynamic node met a concrete type here; have the evaluator
                # re-check the argument against its post-merge type.
                self.outcome.arg_checks[id(term)] = Obligation(arg_ty, term.arg.span)
            return result

        if isinstance(term, S.Let):
            if term.rec:
                rec_var = store.fresh_var()
                bound_env = env.child()
                bound_env.bind(term.name, mono(rec_var))
                bound_ty = self.infer(bound_env, term.bound)
                self.constrain(rec_var, bound_ty, term.bound)
            else:
                bound_ty = self.infer(env, term.bound)
            if is_syntactic_value(term.bound):
                scheme = generalize(store, env, bound_ty)
            else:
                scheme = mono(bound_ty)
            body_env = env.child()
            body_env.bind(term.name, scheme)
            return self.infer(body_env, term.body)

        if isinstance(term, S.Annot):
            inferred = self.infer(env, term.term)
            kind = kind_check(term.ty, self.kinds)
            if kind != STAR:
                from .diagnostics import KindError

                raise KindError(f"annotation has kind {kind}, expected *", term.span)
            annotated = intern(store, term.ty)
            self.constrain(inferred, annotated, term)
            self.outcome.boundaries[id(term)] = (inferred, annotated)
            # The explicit annotation wins over anything more precise that
            # inference discovered.
            return annotated

        if isinstance(term, S.RecordLit):
            row = store.empty_row()
            for label, sub in reversed(term.fields):
                row = store.row(label, self.infer(env, sub), row)
            return store.record(row)

        if isinstance(term, S.Proj):
            rec_ty = self.infer(env, term.term)
            field_ty = store.fresh_var()
            tail = store.fresh_var()
            self.constrain(rec_ty, store.record(store.row(term.label, field_ty, tail)), term)
            return field_ty

        if isinstance(term, S.Inject):
            payload = self.infer(env, term.payload)
            tail = store.fresh_var()
            return store.variant(store.row(term.label, payload, tail))

        if isinstance(term, S.Match):
            scrut = self.infer(env, term.scrutinee)
            arm_payloads = {label: store.fresh_var() for label, _, _ in term.arms}
            row = store.empty_row()
            for label, _, _ in reversed(term.arms):
                row = store.row(label, arm_payloads[label], row)
            # Scrutinee must be a closed variant of exactly the arm labels.
            self.constrain(scrut, store.variant(row), term.scrutinee)
            result: Node | None = None
            for label, binder, body in term.arms:
                inner = env.child()
                if binder and binder != "_":
                    inner.bind(binder, mono(arm_payloads[label]))
                body_ty = self.infer(inner, body)
                if result is None:
                    result = body_ty
                else:
                    self.constrain(result, body_ty, body)
            assert result is not None
            return result

        raise TypeError(f"unknown term {term!r}")

    def infer_binding(self, env: TypeEnv, rec: bool, name: str, bound: S.Term) -> tuple[Scheme, Node]:
        """Infer a top-level binding the way `let` would, returning its scheme."""
        if rec:
            rec_var = self.store.fresh_var()
            bound_env = env.child()
            bound_env.bind(name, mono(rec_var))
            bound_ty = self.infer(bound_env, bound)
            self.constrain(rec_var, bound_ty, bound)
        else:
            bound_ty = self.infer(env, bound)
        if is_syntactic_value(bound):
            return generalize(self.store, env, bound_ty), bound_ty
        return mono(bound_ty), bound_ty


def is_syntactic_value(term: S.Term) -> bool:
    if isinstance(term, (S.Lam, S.Lit, S.Var)):
        return True
    if isinstance(term, S.Annot):
        return is_syntactic_value(term.term)
    if isinstance(term, S.RecordLit):
        return all(is_syntactic_value(t) for _, t in term.fields)
    if isinstance(term, S.Inject):
        return is_syntactic_value(term.payload)
    return False


# ---------------------------------------------------------------------------
# Dynamic-by-default rewriting

def annotate_dynamic_by_default(term: S.Term) -> S.Term:
    """Make un-annotated code dynamic: every let-bound term gets a `?`
    annotation and every use of a lambda parameter is annotated `?`.

    Idempotent: existing annotations are left alone.
    """
    return _dyn_rewrite(term, frozenset())


def _dyn_rewrite(term: S.Term, params: frozenset[str]) -> S.Term:
    dyn = S.TDyn()
    if isinstance(term, S.Var):
        if term.name in params:
            return S.Annot(term, dyn, span=term.span)
        return term
    if isinstance(term, S.Lit):
        return term
    if isinstance(term, S.Annot):
        if isinstance(term.term, S.Var):
            return term
        return replace(term, term=_dyn_rewrite(term.term, params))
    if isinstance(term, S.Lam):
        return replace(term, body=_dyn_rewrite(term.body, params | {term.param}))
    if isinstance(term, S.App):
        return replace(
            term,
            fn=_dyn_rewrite(term.fn, params),
            arg=_dyn_rewrite(term.arg, params),
        )
    if isinstance(term, S.Let):
        bound_params = params - {term.name} if term.rec else params
        bound = _dyn_rewrite(term.bound, bound_params)
        if not isinstance(bound, S.Annot):
            bound = S.Annot(bound, dyn, span=term.bound.span)
        return replace(term, bound=bound, body=_dyn_rewrite(term.body, params - {term.name}))
    if isinstance(term, S.RecordLit):
        return replace(term, fields=tuple((l, _dyn_rewrite(t, params)) for l, t in term.fields))
    if isinstance(term, S.Proj):
        return replace(term, term=_dyn_rewrite(term.term, params))
    if isinstance(term, S.Inject):
        return replace(term, payload=_dyn_rewrite(term.payload, params))
    if isinstance(term, S.Match):
        arms = tuple(
            (l, b, _dyn_rewrite(body, params - {b} if b else params))
            for l, b, body in term.arms
        )
        return replace(term, scrutinee=_dyn_rewrite(term.scrutinee, params), arms=arms)
    return term


def resolved_type(store: TypeStore, node: Node) -> S.SurfaceType:
    return resolve(store, node)
