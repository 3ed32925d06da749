"""Parser, pretty-printer and scope checking."""

import datetime

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradlang import syntax as S
from gradlang.diagnostics import ParseError, ScopeError

OPTION_PROGRAM = """
let receive currency amount = scale (one currency) amount in

let european_stock_option args =
  let first = stock_price args.effective_date args.company in
  let last = stock_price args.expiry_date args.company in
  let payoff = match args.call_or_put with
    | Call -> (last / first - args.strike)
    | Put -> (args.strike - last / first)
  in
  european args.expiry_date (receive args.currency payoff)
in

european_stock_option
  { company = "ABC Co.",
    call_or_put = Call,
    strike = 100.0,
    currency = USD,
    effective_date = 2021-01-17,
    expiry_date = 2021-01-22 }
"""

DYN_MUL_PROGRAM = """
let dyn_obs_mul x y = match dynamic_to_type (y) with
  | Obs Double => x ** y
  | Contract => scale x y
in
    dyn_obs_mul : Obs Double -> Dyn -> Dyn
"""


def test_parse_incr_let():
    term = S.parse_term("let incr x = x + 1 in incr")
    assert isinstance(term, S.Let)
    assert not term.rec
    assert term.name == "incr"
    assert isinstance(term.bound, S.Lam)
    plus = term.bound.body
    assert plus == S.App(S.App(S.Var("+"), S.Var("x")), S.Lit("int", 1))
    assert term.body == S.Var("incr")


def test_parse_single_variable():
    assert S.parse_term("x") == S.Var("x")


def test_parse_receive_application_spine():
    term = S.parse_term("let receive currency amount = scale (one currency) amount in receive")
    assert isinstance(term, S.Let)
    inner = term.bound
    assert isinstance(inner, S.Lam) and isinstance(inner.body, S.Lam)
    spine = inner.body.body
    assert spine == S.App(
        S.App(S.Var("scale"), S.App(S.Var("one"), S.Lit("currency", "USD")))
        if False
        else S.App(S.Var("scale"), S.App(S.Var("one"), S.Var("currency"))),
        S.Var("amount"),
    )


def test_option_program_parses_verbatim():
    term = S.parse_term(OPTION_PROGRAM)
    assert isinstance(term, S.Let)
    call = term.body.body
    assert isinstance(call, S.App)
    record = call.arg
    assert isinstance(record, S.RecordLit)
    labels = [l for l, _ in record.fields]
    assert labels == ["company", "call_or_put", "strike", "currency", "effective_date", "expiry_date"]
    assert record.fields[3][1] == S.Lit("currency", "USD")
    assert record.fields[4][1] == S.Lit("date", datetime.date(2021, 1, 17))
    assert record.fields[1][1] == S.Inject("Call", S.RecordLit(()))


def test_dyn_mul_program_parses_verbatim():
    term = S.parse_term(DYN_MUL_PROGRAM)
    assert isinstance(term, S.Let)
    annot = term.body
    assert isinstance(annot, S.Annot)
    assert annot.ty == S.TArrow(
        S.TCtor("Obs", (S.TCtor("Double"),)), S.TArrow(S.TDyn(), S.TDyn())
    )
    match = term.bound.body.body
    assert isinstance(match, S.Match)
    assert [(l, b) for l, b, _ in match.arms] == [("Obs", "Double"), ("Contract", None)]


def test_parse_type_dyn_arrow():
    assert S.parse_type("? -> Int") == S.TArrow(S.TDyn(), S.TCtor("Int"))


def test_parse_type_plain_ctor():
    assert S.parse_type("Int") == S.TCtor("Int")


def test_parse_type_obs_chain():
    assert S.parse_type("Obs Double -> ? -> ?") == S.TArrow(
        S.TCtor("Obs", (S.TCtor("Double"),)), S.TArrow(S.TDyn(), S.TDyn())
    )


def test_parse_type_rows_records_variants():
    assert S.parse_type("{ x : Int; y : String }") == S.TRecord(
        S.TRowField("x", S.TCtor("Int"), S.TRowField("y", S.TCtor("String"), S.TRowEmpty()))
    )
    assert S.parse_type("[ Call : {}; Put : {} ]") == S.TVariant(
        S.TRowField("Call", S.TRecord(S.TRowEmpty()), S.TRowField("Put", S.TRecord(S.TRowEmpty()), S.TRowEmpty()))
    )
    assert S.parse_type("{ x : Int; r }") == S.TRecord(
        S.TRowField("x", S.TCtor("Int"), S.TVar("r"))
    )
    # bare rows with an explicit empty tail
    assert S.parse_type("x : Int; ε") == S.TRowField("x", S.TCtor("Int"), S.TRowEmpty())


def test_parse_type_mu():
    ty = S.parse_type("mu a. [ Leaf : {}; Node : { next : a } ]")
    assert isinstance(ty, S.TMu)
    assert ty.var == "a"


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        S.parse_term("let = 3 in x")
    assert err.value.span.line == 1
    with pytest.raises(ParseError):
        S.parse_term("fun -> x")
    with pytest.raises(ParseError):
        S.parse_type("Int ->")


def test_duplicate_record_labels_rejected():
    with pytest.raises(ParseError):
        S.parse_term("{ x = 1, x = 2 }")


def test_duplicate_match_labels_rejected():
    with pytest.raises(ParseError):
        S.parse_term("match v with | A -> 1 | A -> 2")


def test_duplicate_row_labels_rejected():
    with pytest.raises(ParseError):
        S.parse_type("{ x : Int; x : String }")


def test_scope_check_flags_unbound():
    term = S.parse_term("fun x -> y")
    with pytest.raises(ScopeError):
        S.scope_check(term, frozenset())
    S.scope_check(term, frozenset({"y"}))


def test_scope_check_match_binders():
    term = S.parse_term("match v with | Some x -> x | None -> 0")
    S.scope_check(term, frozenset({"v"}))
    term2 = S.parse_term("match v with | Some x -> x | None -> x")
    with pytest.raises(ScopeError):
        S.scope_check(term2, frozenset({"v"}))


def test_annotated_param_sugar_annotates_uses():
    term = S.parse_term("fun (x : ?) -> x + x")
    assert isinstance(term, S.Lam)
    body = term.body
    wrapped = S.Annot(S.Var("x"), S.TDyn())
    assert body == S.App(S.App(S.Var("+"), wrapped), wrapped)


def test_operator_section_round_trip():
    term = S.parse_term("(+) 1")
    assert term == S.App(S.Var("+"), S.Lit("int", 1))
    assert S.parse_term(S.pretty_term(term)) == term


def test_option_program_round_trips():
    term = S.parse_term(OPTION_PROGRAM)
    assert S.parse_term(S.pretty_term(term)) == term


def test_dyn_mul_program_round_trips():
    term = S.parse_term(DYN_MUL_PROGRAM)
    assert S.parse_term(S.pretty_term(term)) == term


def test_pretty_type_examples():
    assert S.pretty_type(S.TArrow(S.TDyn(), S.TCtor("Int"))) == "? -> Int"
    assert S.pretty_type(S.TVar("x")) == "x"
    assert S.pretty_term(S.Var("x")) == "x"


# ---------------------------------------------------------------------------
# Structured round-trip properties

_names = st.sampled_from(["x", "y", "z", "f", "g", "acc"])
_labels = st.sampled_from(["a", "b", "head", "tail", "price"])
_arm_labels = st.sampled_from(["Call", "Put", "Some", "None", "Cons"])


def _types(depth):
    base = st.one_of(
        st.sampled_from([S.TCtor("Int"), S.TCtor("String"), S.TCtor("Double"), S.TDyn()]),
        st.builds(S.TVar, _names),
    )
    if depth == 0:
        return base

    sub = _types(depth - 1)

    def row(fields, tail_var):
        out = S.TVar(tail_var) if tail_var else S.TRowEmpty()
        for label, ty in fields:
            out = S.TRowField(label, ty, out)
        return out

    rows = st.builds(
        row,
        st.lists(st.tuples(_labels, sub), max_size=2, unique_by=lambda p: p[0]),
        st.one_of(st.none(), _names),
    )
    return st.one_of(
        base,
        st.builds(S.TArrow, sub, sub),
        st.builds(lambda a: S.TCtor("Obs", (a,)), sub),
        st.builds(S.TRecord, rows),
        st.builds(S.TVariant, rows),
    )


def _terms(depth):
    base = st.one_of(
        st.builds(S.Var, _names),
        st.builds(lambda n: S.Lit("int", n), st.integers(0, 999)),
        st.builds(lambda s: S.Lit("string", s), st.sampled_from(["", "hi", "a b"])),
        st.builds(lambda d: S.Lit("double", d), st.sampled_from([1.5, 0.25, 100.0])),
        st.builds(lambda c: S.Lit("currency", c), st.sampled_from(["USD", "EUR"])),
    )
    if depth == 0:
        return base
    sub = _terms(depth - 1)
    records = st.builds(
        lambda fields: S.RecordLit(tuple(fields)),
        st.lists(st.tuples(_labels, sub), max_size=3, unique_by=lambda p: p[0]),
    )
    matches = st.builds(
        lambda scrut, arms: S.Match(scrut, tuple(arms)),
        sub,
        st.lists(
            st.tuples(_arm_labels, st.one_of(st.none(), _names), sub),
            min_size=1,
            max_size=3,
            unique_by=lambda a: a[0],
        ),
    )
    return st.one_of(
        base,
        st.builds(S.Lam, _names, sub),
        st.builds(S.App, sub, sub),
        st.builds(S.Let, st.booleans(), _names, sub, sub),
        st.builds(S.Annot, sub, _types(1)),
        records,
        st.builds(S.Proj, sub, _labels),
        st.builds(S.Inject, _arm_labels, sub),
        matches,
        st.builds(
            lambda op, a, b: S.App(S.App(S.Var(op), a), b),
            st.sampled_from(["+", "-", "*", "/", "**", "<", "=="]),
            sub,
            sub,
        ),
    )


@settings(max_examples=200, deadline=None)
@given(_terms(3))
def test_term_round_trip(term):
    assert S.parse_term(S.pretty_term(term)) == term


@settings(max_examples=200, deadline=None)
@given(_types(2))
def test_type_round_trip(ty):
    assert S.parse_type(S.pretty_type(ty)) == ty


@settings(max_examples=100, deadline=None)
@given(_types(2))
def test_mu_type_round_trip(ty):
    wrapped = S.TMu("self", S.TArrow(ty, S.TVar("self")))
    assert S.parse_type(S.pretty_type(wrapped)) == wrapped
