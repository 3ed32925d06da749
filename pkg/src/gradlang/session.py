"""A language session: one type store, one global environment, one program.

Ties the pipeline together: parse, scope-check, infer, evaluate.  REPL
bindings and the prelude extend the same session; separate sessions are
fully independent.
"""

from __future__ import annotations

from . import prelude as prelude_mod
from . import runtime as R
from . import syntax as S
from .diagnostics import Span
from .infer import Inference, InferOutcome, annotate_dynamic_by_default
from .typegraph import CTOR_KINDS, Node, TypeStore, resolve, type_str


class Session:
    def __init__(
        self,
        prices: R.PriceTable | None = None,
        trace=None,
        dynamic_by_default: bool = False,
        load_prelude: bool = True,
    ):
        self.store = TypeStore(trace=trace)
        self.kinds = dict(CTOR_KINDS)
        self.outcome = InferOutcome()
        self.dynamic_by_default = dynamic_by_default
        self.type_env, self.value_env = R.builtins(self.store)
        self.interp = R.Interpreter(self.store, self.outcome, prices)
        if load_prelude:
            prelude_mod.load_prelude(self)

    # -- internals

    def _inference(self) -> Inference:
        return Inference(self.store, self.kinds, self.outcome)

    def _prepare(self, term: S.Term) -> S.Term:
        if self.dynamic_by_default:
            term = annotate_dynamic_by_default(term)
        S.scope_check(term, self.type_env.names())
        return term

    # -- pipeline entry points

    def infer_source(self, source: str) -> tuple[S.Term, Node]:
        term = self._prepare(S.parse_term(source))
        node = self._inference().infer(self.type_env, term)
        return term, node

    def type_of(self, source: str) -> str:
        _, node = self.infer_source(source)
        return S.pretty_type(resolve(self.store, node))

    def run_source(self, source: str) -> tuple[R.Value, Node]:
        term, node = self.infer_source(source)
        value = self.interp.eval(term, self.value_env)
        return value, node

    def run_term(self, term: S.Term) -> tuple[R.Value, Node]:
        term = self._prepare(term)
        node = self._inference().infer(self.type_env, term)
        value = self.interp.eval(term, self.value_env)
        return value, node

    def bind_term(self, rec: bool, name: str, term: S.Term) -> tuple[Node, R.Value]:
        """Install a top-level binding (REPL `let`, prelude snippet)."""
        S.scope_check(term, self.type_env.names() | ({name} if rec else frozenset()))
        inference = self._inference()
        scheme, node = inference.infer_binding(self.type_env, rec, name, term)
        if rec:
            frame: dict[str, R.Value] = {name: R._UNINITIALIZED}
            env = self.value_env.child(frame)
            frame[name] = self.interp.eval(term, env)
            value = frame[name]
        else:
            value = self.interp.eval(term, self.value_env)
        self.type_env.bind(name, scheme)
        self.value_env.frame[name] = value
        return node, value

    def bind_source(self, source: str) -> tuple[str, Node, R.Value]:
        rec, name, term = S.parse_binding(source)
        if self.dynamic_by_default:
            term = annotate_dynamic_by_default(term)
        node, value = self.bind_term(rec, name, term)
        return name, node, value

    # -- reporting helpers

    def show_type(self, node: Node) -> str:
        return S.pretty_type(resolve(self.store, node))

    def show_value(self, value: R.Value) -> str:
        return R.any_to_string(value)

    def dyn_spans(self) -> set[Span]:
        return self.outcome.dyn_spans(self.store)

    def type_table(self) -> list[tuple[Span, str]]:
        return [
            (span, type_str(self.store, node))
            for span, node in self.outcome.span_types
        ]
