"""Consistent-equal unification over the type graph.

Constraints are solved eagerly, one at a time, by case analysis on the two
representatives.  The numbered cases (reported by `--trace-unify`) are:

     1/2   variable vs anything        -> merge, the other side wins
     3/4   dynamic vs function type    -> unify each side with a fresh `?`
     5/6   dynamic vs anything else    -> merge, the other side wins
     7     function vs function        -> unify domains, unify codomains
     8     rows with equal head label  -> unify field types, unify tails
     9     rows with different labels  -> rotate via a fresh shared tail
    10/11  recursive type vs anything  -> mark visited, unify the unrolling
    12     empty row vs empty row      -> done

Applications of the record/variant operators to rows decompose under case 8,
other constructor applications under case 7.  Recursive types are cut off by
visit marks scoped to a single top-level constraint: once both
representatives have been seen the constraint already holds.

Before dispatch each side is passed through `maybe_copy_dyns`, which gives
every textual occurrence of `?` in the constraint its own node.  Copies are
not canonical, so re-entry through recursion (or through a representative
that a variable was merged into) never copies again; losing that property
would silently disconnect types that were already known equal.
"""

from __future__ import annotations

from . import syntax as S
from .diagnostics import ConstructorClash, KindClash, MissingRowField, UnifyError
from .typegraph import (
    ARROW_CTOR,
    RECORD_CTOR,
    VARIANT_CTOR,
    Node,
    PApp,
    PCtor,
    PDyn,
    PEmptyRow,
    PMu,
    PRow,
    PVar,
    TypeStore,
    copy_dyn,
    type_str,
)


def maybe_copy_dyns(store: TypeStore, left: Node, right: Node) -> tuple[Node, Node]:
    """Copy each side's canonical `?` occurrences at most once per constraint.

    `copy_dyn` only rewrites graphs that still reach the canonical node, so a
    side that was already copied comes back unchanged.
    """
    return copy_dyn(store, left), copy_dyn(store, right)


def unify(store: TypeStore, left: Node, right: Node) -> None:
    """Solve `left consistent-equal right`, mutating the union-find structure.

    Raises UnifyError if the statically known parts of the two types clash.
    Visit marks are scoped to this call and cleared on the way out.
    """
    store.visited = set()
    store.visited_pairs = set()
    try:
        _unify(store, left, right)
    finally:
        store.visited = set()
        store.visited_pairs = set()


def _trace(store: TypeStore, case: int, left: Node, right: Node) -> None:
    if store.trace is not None:
        store.trace(case, type_str(store, left), type_str(store, right))


def _is_dyn(p) -> bool:
    return isinstance(p, PDyn)


def _unify(store: TypeStore, left: Node, right: Node) -> None:
    t1 = store.find(left)
    t2 = store.find(right)
    if t1 is t2:
        return
    if t1.id in store.visited and t2.id in store.visited:
        _trace_cycle(store, t1, t2)
        return
    if (t1.id, t2.id) in store.visited_pairs or (t2.id, t1.id) in store.visited_pairs:
        _trace_cycle(store, t1, t2)
        return

    t1, t2 = maybe_copy_dyns(store, t1, t2)
    t1, t2 = store.find(t1), store.find(t2)
    p1, p2 = t1.payload, t2.payload

    # Cases 1 & 2: type variables lose to everything (the dynamic type
    # included, which is how `?` becomes a variable's representative).
    if isinstance(p1, PVar):
        _trace(store, 1, t1, t2)
        store.merge(t2, t1)
        return
    if isinstance(p2, PVar):
        _trace(store, 2, t1, t2)
        store.merge(t1, t2)
        return

    if _is_dyn(p1) or _is_dyn(p2):
        dyn, other = (t1, t2) if _is_dyn(p1) else (t2, t1)
        arrow = store.arrow_parts(other)
        if arrow is not None:
            # Cases 3 & 4: `?` against a function splits into `? -> ?`.
            _trace(store, 3 if _is_dyn(p1) else 4, t1, t2)
            _unify(store, arrow[0], store.new_dyn())
            _unify(store, arrow[1], store.new_dyn())
            return
        # Cases 5 & 6: the non-dynamic side becomes the representative.
        _trace(store, 5 if _is_dyn(p1) else 6, t1, t2)
        if _is_dyn(other.payload):
            store.merge(t1, t2)
        else:
            store.dyn_events.append((other, dyn))
            store.merge(other, dyn)
        return

    a1 = store.arrow_parts(t1)
    a2 = store.arrow_parts(t2)
    if a1 is not None and a2 is not None:
        _trace(store, 7, t1, t2)
        _unify(store, a1[0], a2[0])
        _unify(store, a1[1], a2[1])
        return

    if isinstance(p1, PApp) and isinstance(p2, PApp):
        # Generic constructor applications decompose pointwise.  Record and
        # variant wrappers show up as case 8 in traces since the real work
        # is row unification.
        h1 = store.spine_head(t1).payload
        h2 = store.spine_head(t2).payload
        wrapper = (
            isinstance(h1, PCtor)
            and isinstance(h2, PCtor)
            and h1.name == h2.name
            and h1.name in (RECORD_CTOR, VARIANT_CTOR)
        )
        _trace(store, 8 if wrapper else 7, t1, t2)
        _unify(store, p1.fn, p2.fn)
        _unify(store, p1.arg, p2.arg)
        return

    if isinstance(p1, PCtor) and isinstance(p2, PCtor):
        if p1.name == p2.name:
            return
        raise ConstructorClash(
            f"'{p1.name}' vs '{p2.name}'", type_str(store, t1), type_str(store, t2)
        )

    if isinstance(p1, PRow) and isinstance(p2, PRow):
        if p1.label == p2.label:
            _trace(store, 8, t1, t2)
            _unify(store, p1.ty, p2.ty)
            _unify(store, p1.tail, p2.tail)
            return
        # Case 9: rearrange both rows around a fresh common tail.
        _trace(store, 9, t1, t2)
        alpha = store.fresh_var()
        _unify(store, store.row(p1.label, p1.ty, alpha), p2.tail)
        _unify(store, store.row(p2.label, p2.ty, alpha), p1.tail)
        return

    if isinstance(p1, PMu) or isinstance(p2, PMu):
        case = 10 if isinstance(p1, PMu) else 11
        _trace(store, case, t1, t2)
        mu = t1 if isinstance(p1, PMu) else t2
        store.visited.add(store.find(mu).id)
        store.visited_pairs.add((t1.id, t2.id))
        if isinstance(p1, PMu):
            _unify(store, p1.body, t2)
        else:
            _unify(store, t1, p2.body)
        return

    if isinstance(p1, PEmptyRow) and isinstance(p2, PEmptyRow):
        _trace(store, 12, t1, t2)
        return

    _raise_clash(store, t1, t2)


def _trace_cycle(store: TypeStore, t1: Node, t2: Node) -> None:
    # The constraint is already being solved further up the stack; report
    # the case it would dispatch to so traces show the re-entry.
    if store.trace is None:
        return
    if isinstance(t1.payload, PMu):
        _trace(store, 10, t1, t2)
    elif isinstance(t2.payload, PMu):
        _trace(store, 11, t1, t2)


def _raise_clash(store: TypeStore, t1: Node, t2: Node) -> None:
    p1, p2 = t1.payload, t2.payload
    l, r = type_str(store, t1), type_str(store, t2)
    row_kinds = (PRow, PEmptyRow)
    if isinstance(p1, PRow) and isinstance(p2, PEmptyRow):
        raise MissingRowField(p1.label, l, r)
    if isinstance(p2, PRow) and isinstance(p1, PEmptyRow):
        raise MissingRowField(p2.label, l, r)
    if isinstance(p1, row_kinds) != isinstance(p2, row_kinds):
        raise KindClash("row used where a proper type was expected", l, r)
    raise ConstructorClash("incompatible type shapes", l, r)


# ---------------------------------------------------------------------------
# Test oracle

def consistent_oracle(t1: S.SurfaceType, t2: S.SurfaceType) -> bool:
    """Structural consistency on ground, finite, variable-free types.

    The dynamic type is consistent with everything; constructors must match
    with pairwise-consistent arguments; rows compare up to field order.
    Used only to validate `unify` on enumerated ground instances.
    """
    if isinstance(t1, S.TDyn) or isinstance(t2, S.TDyn):
        return True
    if isinstance(t1, S.TCtor) and isinstance(t2, S.TCtor):
        return (
            t1.name == t2.name
            and len(t1.args) == len(t2.args)
            and all(consistent_oracle(a, b) for a, b in zip(t1.args, t2.args))
        )
    if isinstance(t1, S.TArrow) and isinstance(t2, S.TArrow):
        return consistent_oracle(t1.dom, t2.dom) and consistent_oracle(t1.cod, t2.cod)
    if isinstance(t1, S.TRecord) and isinstance(t2, S.TRecord):
        return _rows_consistent(t1.row, t2.row)
    if isinstance(t1, S.TVariant) and isinstance(t2, S.TVariant):
        return _rows_consistent(t1.row, t2.row)
    if isinstance(t1, (S.TRowField, S.TRowEmpty)) and isinstance(t2, (S.TRowField, S.TRowEmpty)):
        return _rows_consistent(t1, t2)
    return False


def _rows_consistent(r1: S.SurfaceType, r2: S.SurfaceType) -> bool:
    f1 = _row_fields(r1)
    f2 = _row_fields(r2)
    if f1 is None or f2 is None or set(f1) != set(f2):
        return False
    return all(consistent_oracle(f1[label], f2[label]) for label in f1)


def _row_fields(row: S.SurfaceType) -> dict[str, S.SurfaceType] | None:
    fields: dict[str, S.SurfaceType] = {}
    while isinstance(row, S.TRowField):
        fields[row.label] = row.ty
        row = row.tail
    if not isinstance(row, S.TRowEmpty):
        return None  # open rows are outside the oracle's domain
    return fields
