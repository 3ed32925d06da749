"""Call-by-value evaluator with runtime checks at dynamic-type boundaries.

Values flowing through a `?`-typed position are boxed with their runtime tag;
functions crossing such a boundary are wrapped in a guard that re-checks the
argument and result tags on every application.  All checks are first-order
(tag level): records additionally require the expected labels to be present,
variants require the label to be among the expected ones.

A failed check raises RuntimeTypeError carrying two spans: the check site
(where the offending value was) and the blame site (the dynamically typed
code that deferred the check).  Statically typed code is never blamed.

Observables are deterministic date-indexed expression trees backed by an
in-memory price table; contracts are inert constructor trees compared
structurally.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass, field

from . import syntax as S
from .diagnostics import DUMMY_SPAN, EvalError, RuntimeTypeError, Span
from .infer import InferOutcome, Scheme, TypeEnv, mono
from .typegraph import (
    Node,
    PApp,
    PCtor,
    PDyn,
    PEmptyRow,
    PMu,
    PRow,
    PVar,
    TypeStore,
    intern,
    type_str,
)

# ---------------------------------------------------------------------------
# Observables and contracts

@dataclass(frozen=True)
class Obs:
    pass


@dataclass(frozen=True)
class ObsConst(Obs):
    value: float


@dataclass(frozen=True)
class ObsStock(Obs):
    date: datetime.date
    name: str


@dataclass(frozen=True)
class ObsBin(Obs):
    op: str  # add sub mul div
    left: Obs
    right: Obs


@dataclass(frozen=True)
class Contract:
    pass


@dataclass(frozen=True)
class CZero(Contract):
    pass


@dataclass(frozen=True)
class COne(Contract):
    currency: str


@dataclass(frozen=True)
class CScale(Contract):
    amount: Obs
    contract: Contract


@dataclass(frozen=True)
class CEuropean(Contract):
    date: datetime.date
    contract: Contract


DEFAULT_PRICES = {
    (datetime.date(2021, 1, 17), "ABC Co."): 95.0,
    (datetime.date(2021, 1, 22), "ABC Co."): 103.5,
    (datetime.date(2021, 1, 17), "XYZ Corp."): 50.0,
    (datetime.date(2021, 1, 22), "XYZ Corp."): 48.25,
}


class PriceTable:
    """Deterministic (date, name) -> price fixture used by stock observables."""

    def __init__(self, entries: dict | None = None):
        self.entries = dict(DEFAULT_PRICES)
        if entries:
            self.entries.update(entries)

    @classmethod
    def from_file(cls, path: str) -> "PriceTable":
        entries = {}
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                date_text, name, price = row[0].strip(), row[1].strip(), row[2]
                entries[(datetime.date.fromisoformat(date_text), name)] = float(price)
        return cls(entries)

    def lookup(self, date: datetime.date, name: str, span: Span) -> float:
        key = (date, name)
        if key not in self.entries:
            raise EvalError(f"no price fixture for {name!r} on {date.isoformat()}", span)
        return self.entries[key]


def sample_obs(obs: Obs, date: datetime.date, prices: PriceTable, span: Span = DUMMY_SPAN) -> float:
    if isinstance(obs, ObsConst):
        return obs.value
    if isinstance(obs, ObsStock):
        # A stock-price observable is struck on its quote date and does not
        # vary with the sampling date.
        return prices.lookup(obs.date, obs.name, span)
    if isinstance(obs, ObsBin):
        left = sample_obs(obs.left, date, prices, span)
        right = sample_obs(obs.right, date, prices, span)
        if obs.op == "add":
            return left + right
        if obs.op == "sub":
            return left - right
        if obs.op == "mul":
            return left * right
        if right == 0.0:
            raise EvalError("observable division by zero", span)
        return left / right
    raise EvalError(f"unknown observable {obs!r}", span)


# ---------------------------------------------------------------------------
# Values

@dataclass(frozen=True)
class Value:
    pass


@dataclass(frozen=True)
class VInt(Value):
    value: int


@dataclass(frozen=True)
class VDouble(Value):
    value: float


@dataclass(frozen=True)
class VString(Value):
    value: str


@dataclass(frozen=True)
class VDate(Value):
    value: datetime.date


@dataclass(frozen=True)
class VCurrency(Value):
    code: str


@dataclass(frozen=True)
class VRecord(Value):
    fields: dict[str, Value]


@dataclass(frozen=True)
class VVariant(Value):
    label: str
    payload: Value


@dataclass(frozen=True)
class VObs(Value):
    obs: Obs


@dataclass(frozen=True)
class VContract(Value):
    contract: Contract


@dataclass(frozen=True, eq=False)
class VClosure(Value):
    param: str
    body: S.Term
    env: "Env"
    node: Node | None  # the closure's inferred arrow type


@dataclass(frozen=True, eq=False)
class VPrim(Value):
    name: str
    arity: int
    impl: object
    args: tuple = ()


@dataclass(frozen=True, eq=False)
class VGuard(Value):
    """A function value crossing a dynamic boundary, re-checked per call."""

    inner: Value
    dom: Node | None
    cod_under: Node | None
    cod_ann: Node | None  # None means "box the result"
    origin: Span


@dataclass(frozen=True, eq=False)
class VDyn(Value):
    """A value in a dynamically typed position, tagged with its runtime type."""

    tag: str
    value: Value
    origin: Span


UNIT = VRecord({})


class Env:
    __slots__ = ("frame", "parent")

    def __init__(self, frame: dict[str, Value], parent: "Env | None" = None):
        self.frame = frame
        self.parent = parent

    def child(self, frame: dict[str, Value]) -> "Env":
        return Env(frame, self)

    def lookup(self, name: str, span: Span) -> Value:
        env: Env | None = self
        while env is not None:
            if name in env.frame:
                value = env.frame[name]
                if value is _UNINITIALIZED:
                    raise EvalError(f"recursive binding '{name}' used before initialization", span)
                return value
            env = env.parent
        raise EvalError(f"unbound variable '{name}' at runtime", span)


_UNINITIALIZED = VString("<uninitialized>")


def unbox(value: Value) -> Value:
    while isinstance(value, VDyn):
        value = value.value
    return value


def box_origin(value: Value, default: Span) -> Span:
    return value.origin if isinstance(value, VDyn) else default


def tag_of(value: Value) -> str:
    value = unbox(value)
    if isinstance(value, VInt):
        return "TInt"
    if isinstance(value, VDouble):
        return "TDouble"
    if isinstance(value, VString):
        return "TString"
    if isinstance(value, VDate):
        return "TDate"
    if isinstance(value, VCurrency):
        return "TCurrency"
    if isinstance(value, VObs):
        return "TObsDouble"
    if isinstance(value, VContract):
        return "TContract"
    if isinstance(value, (VClosure, VPrim, VGuard)):
        return "TFun"
    if isinstance(value, VRecord):
        return "TRecord"
    if isinstance(value, VVariant):
        return "TVariant"
    raise EvalError(f"untaggable value {value!r}")


# ---------------------------------------------------------------------------
# dynamic_to_type / any_to_string

def _string_list(items: list[str]) -> Value:
    out: Value = VVariant("Nil", UNIT)
    for item in reversed(items):
        out = VVariant("Cons", VRecord({"head": VString(item), "tail": out}))
    return out


def dynamic_to_type(value: Value) -> Value:
    """Total: a variant describing the runtime type of any value."""
    value = unbox(value)
    t = tag_of(value)
    if t == "TRecord":
        return VVariant("TRecord", _string_list(list(value.fields.keys())))
    if t == "TVariant":
        return VVariant("TVariant", VString(value.label))
    return VVariant(t, UNIT)


def obs_str(obs: Obs) -> str:
    if isinstance(obs, ObsConst):
        return f"const {obs.value}"
    if isinstance(obs, ObsStock):
        return f'stock_price {obs.date.isoformat()} "{obs.name}"'
    ops = {"add": "+", "sub": "-", "mul": "*", "div": "/"}
    return f"({obs_str(obs.left)} {ops[obs.op]} {obs_str(obs.right)})"


def contract_str(contract: Contract) -> str:
    if isinstance(contract, CZero):
        return "Zero"
    if isinstance(contract, COne):
        return f"One {contract.currency}"
    if isinstance(contract, CScale):
        return f"Scale ({obs_str(contract.amount)}) ({contract_str(contract.contract)})"
    if isinstance(contract, CEuropean):
        return f"European {contract.date.isoformat()} ({contract_str(contract.contract)})"
    return repr(contract)


def any_to_string(value: Value) -> str:
    """Total printable rendering of any runtime value."""
    value = unbox(value)
    if isinstance(value, VInt):
        return str(value.value)
    if isinstance(value, VDouble):
        return str(value.value)
    if isinstance(value, VString):
        return f'"{value.value}"'
    if isinstance(value, VDate):
        return value.value.isoformat()
    if isinstance(value, VCurrency):
        return value.code
    if isinstance(value, VObs):
        return obs_str(value.obs)
    if isinstance(value, VContract):
        return contract_str(value.contract)
    if isinstance(value, (VClosure, VPrim, VGuard)):
        return "<fun>"
    if isinstance(value, VRecord):
        inner = ", ".join(f"{k} = {any_to_string(v)}" for k, v in value.fields.items())
        return "{" + (f"{inner}" if inner else "") + "}"
    if isinstance(value, VVariant):
        if value.payload == UNIT:
            return value.label
        return f"{value.label} {_atomic(value.payload)}"
    return repr(value)


def _atomic(value: Value) -> str:
    text = any_to_string(value)
    if " " in text and not (text.startswith("{") or text.startswith('"') or text.startswith("(")):
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# First-order checks

def _row_labels(store: TypeStore, row: Node) -> tuple[set[str], bool]:
    labels: set[str] = set()
    seen: set[int] = set()
    cur = store.find(row)
    open_tail = False
    while True:
        if cur.id in seen:
            break
        seen.add(cur.id)
        p = cur.payload
        if isinstance(p, PRow):
            labels.add(p.label)
            cur = store.find(p.tail)
            continue
        if isinstance(p, (PVar, PDyn)):
            open_tail = True
        break
    return labels, open_tail


def first_order_ok(store: TypeStore, value: Value, node: Node, depth: int = 0) -> bool:
    """Tag-level check of a runtime value against a static type."""
    if depth > 16:
        return True
    cur = store.find(node)
    p = cur.payload
    if isinstance(p, (PVar, PDyn)):
        return True
    value = unbox(value)
    if isinstance(p, PMu):
        return first_order_ok(store, value, p.body, depth + 1)
    if isinstance(p, PCtor):
        expected = {
            "Int": "TInt",
            "Double": "TDouble",
            "String": "TString",
            "Date": "TDate",
            "Currency": "TCurrency",
            "Contract": "TContract",
        }.get(p.name)
        return expected is None or tag_of(value) == expected
    if isinstance(p, PApp):
        arrow = store.arrow_parts(cur)
        if arrow is not None:
            return tag_of(value) == "TFun"
        head = store.spine_head(cur).payload
        if isinstance(head, PCtor):
            if head.name == "Obs":
                return tag_of(value) == "TObsDouble"
            if head.name == "Π":
                if not isinstance(value, VRecord):
                    return False
                labels, _ = _row_labels(store, cur.payload.arg)
                return labels <= set(value.fields.keys())
            if head.name == "Σ":
                if not isinstance(value, VVariant):
                    return False
                labels, open_tail = _row_labels(store, cur.payload.arg)
                return value.label in labels or open_tail
        return True
    return True


# ---------------------------------------------------------------------------
# The evaluator

class Interpreter:
    def __init__(self, store: TypeStore, outcome: InferOutcome, prices: PriceTable | None = None):
        self.store = store
        self.outcome = outcome
        self.prices = prices if prices is not None else PriceTable()

    def eval(self, term: S.Term, env: Env) -> Value:
        if isinstance(term, S.Var):
            return env.lookup(term.name, term.span)

        if isinstance(term, S.Lit):
            if term.kind == "int":
                return VInt(term.value)
            if term.kind == "double":
                return VDouble(term.value)
            if term.kind == "string":
                return VString(term.value)
            if term.kind == "date":
                return VDate(term.value)
            return VCurrency(term.value)

        if isinstance(term, S.Lam):
            return VClosure(term.param, term.body, env, self.outcome.types.get(id(term)))

        if isinstance(term, S.App):
            fn_value = self.eval(term.fn, env)
            arg_value = self.eval(term.arg, env)
            obligation = self.outcome.arg_checks.get(id(term))
            if obligation is not None:
                if not first_order_ok(self.store, arg_value, obligation.node):
                    raise RuntimeTypeError(
                        type_str(self.store, obligation.node),
                        tag_of(arg_value),
                        obligation.span,
                        box_origin(arg_value, obligation.span),
                    )
            return self.apply(fn_value, arg_value, term.arg.span, term.fn.span)

        if isinstance(term, S.Let):
            if term.rec:
                frame: dict[str, Value] = {term.name: _UNINITIALIZED}
                inner = env.child(frame)
                frame[term.name] = self.eval(term.bound, inner)
                return self.eval(term.body, inner)
            bound = self.eval(term.bound, env)
            return self.eval(term.body, env.child({term.name: bound}))

        if isinstance(term, S.Annot):
            value = self.eval(term.term, env)
            boundary = self.outcome.boundaries.get(id(term))
            if boundary is None:
                return value
            under, ann = boundary
            if self.store.contains_dyn(ann) or self.store.contains_dyn(under):
                return self.coerce(value, under, ann, term.span)
            return value

        if isinstance(term, S.RecordLit):
            return VRecord({label: self.eval(sub, env) for label, sub in term.fields})

        if isinstance(term, S.Proj):
            value = self.eval(term.term, env)
            record = unbox(value)
            if not isinstance(record, VRecord) or term.label not in record.fields:
                raise RuntimeTypeError(
                    f"record with field '{term.label}'",
                    tag_of(value),
                    term.span,
                    box_origin(value, term.span),
                )
            return record.fields[term.label]

        if isinstance(term, S.Inject):
            return VVariant(term.label, self.eval(term.payload, env))

        if isinstance(term, S.Match):
            scrut = self.eval(term.scrutinee, env)
            variant = unbox(scrut)
            if not isinstance(variant, VVariant):
                raise RuntimeTypeError(
                    "variant", tag_of(scrut), term.scrutinee.span, box_origin(scrut, term.scrutinee.span)
                )
            for label, binder, body in term.arms:
                if label == variant.label:
                    if binder and binder != "_":
                        return self.eval(body, env.child({binder: variant.payload}))
                    return self.eval(body, env)
            raise RuntimeTypeError(
                f"variant among {{{', '.join(l for l, _, _ in term.arms)}}}",
                f"TVariant({variant.label})",
                term.scrutinee.span,
                box_origin(scrut, term.scrutinee.span),
            )

        raise EvalError(f"cannot evaluate {term!r}", getattr(term, "span", DUMMY_SPAN))

    # -- application and boundaries

    def apply(self, fn_value: Value, arg: Value, arg_span: Span, fn_span: Span) -> Value:
        if isinstance(fn_value, VDyn):
            inner = unbox(fn_value)
            if isinstance(inner, VClosure):
                inner = self.guard_from_closure(inner, fn_value.origin)
            elif not isinstance(inner, (VPrim, VGuard)):
                raise RuntimeTypeError("TFun", tag_of(inner), fn_span, fn_value.origin)
            result = self.apply(inner, arg, arg_span, fn_span)
            if isinstance(result, VDyn):
                return result
            return VDyn(tag_of(result), result, fn_value.origin)

        if isinstance(fn_value, VGuard):
            if fn_value.dom is not None and not first_order_ok(self.store, arg, fn_value.dom):
                raise RuntimeTypeError(
                    type_str(self.store, fn_value.dom),
                    tag_of(arg),
                    arg_span,
                    fn_value.origin,
                )
            result = self.apply(fn_value.inner, arg, arg_span, fn_span)
            if fn_value.cod_ann is None and fn_value.cod_under is None:
                return result
            return self.coerce(result, fn_value.cod_under, fn_value.cod_ann, fn_value.origin)

        if isinstance(fn_value, VClosure):
            return self.eval(fn_value.body, fn_value.env.child({fn_value.param: arg}))

        if isinstance(fn_value, VPrim):
            args = fn_value.args + ((arg, arg_span),)
            if len(args) < fn_value.arity:
                return VPrim(fn_value.name, fn_value.arity, fn_value.impl, args)
            return fn_value.impl(self, args)

        raise RuntimeTypeError("TFun", tag_of(fn_value), fn_span, fn_span)

    def guard_from_closure(self, closure: VClosure, origin: Span) -> Value:
        """Re-impose a closure's own static type when it arrives through `?`."""
        if closure.node is None:
            return closure
        arrow = self.store.arrow_parts(closure.node)
        if arrow is None:
            return closure
        dom = self.store.find(arrow[0])
        dom_check = None if isinstance(dom.payload, (PVar, PDyn)) else dom
        return VGuard(closure, dom_check, arrow[1], None, origin)

    def coerce(self, value: Value, under: Node | None, ann: Node | None, origin: Span) -> Value:
        """Adapt a value at the boundary between an inferred type and an
        annotation; boxes into `?`, checks and unboxes out of it, guards
        functions in between."""
        store = self.store
        ann_node = store.find(ann) if ann is not None else None
        under_node = store.find(under) if under is not None else None

        if ann_node is None or isinstance(ann_node.payload, PDyn):
            if isinstance(value, VDyn):
                return value
            return VDyn(tag_of(value), value, origin)

        if under_node is not None and isinstance(under_node.payload, PDyn):
            if not first_order_ok(store, value, ann_node):
                raise RuntimeTypeError(
                    type_str(store, ann_node), tag_of(value), origin, origin
                )
            inner = unbox(value)
            if isinstance(inner, VClosure):
                return self.guard_from_closure(inner, origin)
            return inner

        a_arrow = store.arrow_parts(ann_node)
        u_arrow = store.arrow_parts(under_node) if under_node is not None else None
        if a_arrow is not None and u_arrow is not None:
            if not (store.contains_dyn(ann_node) or store.contains_dyn(under_node)):
                return value
            inner = unbox(value)
            if not isinstance(inner, (VClosure, VPrim, VGuard)):
                raise RuntimeTypeError("TFun", tag_of(value), origin, origin)
            dom_check = self._pick_concrete(u_arrow[0], a_arrow[0])
            return VGuard(inner, dom_check, u_arrow[1], a_arrow[1], origin)

        if not first_order_ok(store, value, ann_node):
            raise RuntimeTypeError(type_str(store, ann_node), tag_of(value), origin, origin)
        return value

    def _pick_concrete(self, first: Node, second: Node) -> Node | None:
        for node in (first, second):
            found = self.store.find(node)
            if not isinstance(found.payload, (PVar, PDyn)):
                return found
        return None


# ---------------------------------------------------------------------------
# Builtins

def _arg_int(interp, arg) -> int:
    value, span = arg
    inner = unbox(value)
    if not isinstance(inner, VInt):
        raise RuntimeTypeError("TInt", tag_of(value), span, box_origin(value, span))
    return inner.value


def _arg_double(interp, arg) -> float:
    value, span = arg
    inner = unbox(value)
    if not isinstance(inner, VDouble):
        raise RuntimeTypeError("TDouble", tag_of(value), span, box_origin(value, span))
    return inner.value


def _arg_obs(interp, arg) -> Obs:
    value, span = arg
    inner = unbox(value)
    if not isinstance(inner, VObs):
        raise RuntimeTypeError("TObsDouble", tag_of(value), span, box_origin(value, span))
    return inner.obs


def _arg_contract(interp, arg) -> Contract:
    value, span = arg
    inner = unbox(value)
    if not isinstance(inner, VContract):
        raise RuntimeTypeError("TContract", tag_of(value), span, box_origin(value, span))
    return inner.contract


def _arg_date(interp, arg) -> datetime.date:
    value, span = arg
    inner = unbox(value)
    if not isinstance(inner, VDate):
        raise RuntimeTypeError("TDate", tag_of(value), span, box_origin(value, span))
    return inner.value


def _arg_string(interp, arg) -> str:
    value, span = arg
    inner = unbox(value)
    if not isinstance(inner, VString):
        raise RuntimeTypeError("TString", tag_of(value), span, box_origin(value, span))
    return inner.value


def _arg_currency(interp, arg) -> str:
    value, span = arg
    inner = unbox(value)
    if not isinstance(inner, VCurrency):
        raise RuntimeTypeError("TCurrency", tag_of(value), span, box_origin(value, span))
    return inner.code


def _bool(flag: bool) -> Value:
    return VVariant("True" if flag else "False", UNIT)


def _int_op(fn):
    def impl(interp, args):
        return VInt(fn(_arg_int(interp, args[0]), _arg_int(interp, args[1])))

    return impl


def _int_div(interp, args):
    d = _arg_int(interp, args[1])
    if d == 0:
        raise EvalError("integer division by zero", args[1][1])
    return VInt(_arg_int(interp, args[0]) // d)


def _double_op(fn):
    def impl(interp, args):
        return VDouble(fn(_arg_double(interp, args[0]), _arg_double(interp, args[1])))

    return impl


def _cmp_op(fn):
    def impl(interp, args):
        return _bool(fn(_arg_int(interp, args[0]), _arg_int(interp, args[1])))

    return impl


def _obs_op(op: str):
    def impl(interp, args):
        return VObs(ObsBin(op, _arg_obs(interp, args[0]), _arg_obs(interp, args[1])))

    return impl


def dyn_obs_mul(interp: Interpreter, args) -> Value:
    """Observable multiplication generalized over a dynamic second argument:
    a contract is scaled, an observable is multiplied pointwise, anything
    else is a runtime type error."""
    x = _arg_obs(interp, args[0])
    y_value, y_span = args[1]
    inner = unbox(y_value)
    if isinstance(inner, VContract):
        result: Value = VContract(CScale(x, inner.contract))
    elif isinstance(inner, VObs):
        result = VObs(ObsBin("mul", x, inner.obs))
    else:
        raise RuntimeTypeError(
            "TContract or TObsDouble", tag_of(y_value), y_span, box_origin(y_value, y_span)
        )
    return VDyn(tag_of(result), result, box_origin(y_value, y_span))


TYPE_REP_TYPE = (
    "[ TInt : {}; TDouble : {}; TString : {}; TDate : {}; TCurrency : {};"
    " TObsDouble : {}; TContract : {}; TFun : {};"
    " TRecord : List String; TVariant : String ]"
)

_BUILTIN_SPECS = [
    ("+", "Int -> Int -> Int", 2, _int_op(lambda a, b: a + b)),
    ("*", "Int -> Int -> Int", 2, _int_op(lambda a, b: a * b)),
    ("sub", "Int -> Int -> Int", 2, _int_op(lambda a, b: a - b)),
    ("div", "Int -> Int -> Int", 2, _int_div),
    ("fadd", "Double -> Double -> Double", 2, _double_op(lambda a, b: a + b)),
    ("fsub", "Double -> Double -> Double", 2, _double_op(lambda a, b: a - b)),
    ("fmul", "Double -> Double -> Double", 2, _double_op(lambda a, b: a * b)),
    ("fdiv", "Double -> Double -> Double", 2, _double_op(lambda a, b: a / b if b else 0.0)),
    ("-", "Obs Double -> Obs Double -> Obs Double", 2, _obs_op("sub")),
    ("/", "Obs Double -> Obs Double -> Obs Double", 2, _obs_op("div")),
    ("obs_add", "Obs Double -> Obs Double -> Obs Double", 2, _obs_op("add")),
    ("obs_mul", "Obs Double -> Obs Double -> Obs Double", 2, _obs_op("mul")),
    ("<", "Int -> Int -> [ True : {}; False : {} ]", 2, _cmp_op(lambda a, b: a < b)),
    ("<=", "Int -> Int -> [ True : {}; False : {} ]", 2, _cmp_op(lambda a, b: a <= b)),
    (">", "Int -> Int -> [ True : {}; False : {} ]", 2, _cmp_op(lambda a, b: a > b)),
    (">=", "Int -> Int -> [ True : {}; False : {} ]", 2, _cmp_op(lambda a, b: a >= b)),
    ("==", "Int -> Int -> [ True : {}; False : {} ]", 2, _cmp_op(lambda a, b: a == b)),
    ("!=", "Int -> Int -> [ True : {}; False : {} ]", 2, _cmp_op(lambda a, b: a != b)),
    ("**", "Obs Double -> ? -> ?", 2, dyn_obs_mul),
    (
        "one",
        "Currency -> Contract",
        1,
        lambda interp, args: VContract(COne(_arg_currency(interp, args[0]))),
    ),
    (
        "scale",
        "Obs Double -> Contract -> Contract",
        2,
        lambda interp, args: VContract(
            CScale(_arg_obs(interp, args[0]), _arg_contract(interp, args[1]))
        ),
    ),
    (
        "european",
        "Date -> Contract -> Contract",
        2,
        lambda interp, args: VContract(
            CEuropean(_arg_date(interp, args[0]), _arg_contract(interp, args[1]))
        ),
    ),
    (
        "stock_price",
        "Date -> String -> Obs Double",
        2,
        lambda interp, args: VObs(ObsStock(_arg_date(interp, args[0]), _arg_string(interp, args[1]))),
    ),
    ("const", "Double -> Obs Double", 1, lambda interp, args: VObs(ObsConst(_arg_double(interp, args[0])))),
    ("obs", "Double -> Obs Double", 1, lambda interp, args: VObs(ObsConst(_arg_double(interp, args[0])))),
    (
        "sample",
        "Obs Double -> Date -> Double",
        2,
        lambda interp, args: VDouble(
            sample_obs(_arg_obs(interp, args[0]), _arg_date(interp, args[1]), interp.prices, args[1][1])
        ),
    ),
    ("dynamic_to_type", f"? -> {TYPE_REP_TYPE}", 1, lambda interp, args: dynamic_to_type(args[0][0])),
    ("any_to_string", "? -> String", 1, lambda interp, args: VString(any_to_string(args[0][0]))),
]


def builtins(store: TypeStore) -> tuple[TypeEnv, Env]:
    """Typed bindings for the primitive operations and contract combinators."""
    tenv = TypeEnv()
    frame: dict[str, Value] = {}
    for name, sig, arity, impl in _BUILTIN_SPECS:
        node = intern(store, S.parse_type(sig))
        tenv.bind(name, mono(node))
        frame[name] = VPrim(name, arity, impl)
    tenv.bind("zero", mono(intern(store, S.parse_type("Contract"))))
    frame["zero"] = VContract(CZero())
    return tenv, Env(frame)
