"""Mutable type graph: union-find nodes, kind checking, interning, read-back.

Types live in a single-owner `TypeStore` as mutable nodes carrying a payload
and a union-find parent link.  `merge(keep, absorb)` always keeps the first
argument's payload as the class representative; the unifier chooses arguments
so that type variables lose to everything, the dynamic type beats variables,
and concrete types beat the dynamic type.

The dynamic type is special: one canonical node exists per store and is the
only node ever produced by interning a `?` annotation.  `copy_dyn` rebuilds
the spine of a graph replacing each reachable occurrence of the canonical
node with a fresh instance, sharing every subgraph that contains none.  That
gives every textual use of `?` its own union-find identity without ever
duplicating solved structure.

Recursive types are equi-recursive: a `mu` binder interns to a node whose
body points back at it, so unrolling is just following edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as S
from .diagnostics import KindError, OccursViolation

# ---------------------------------------------------------------------------
# Kinds

@dataclass(frozen=True)
class Kind:
    pass


@dataclass(frozen=True)
class KStar(Kind):
    def __str__(self):
        return "*"


@dataclass(frozen=True)
class KRow(Kind):
    def __str__(self):
        return "ρ"


@dataclass(frozen=True)
class KArrow(Kind):
    param: Kind
    result: Kind

    def __str__(self):
        return f"({self.param} => {self.result})"


STAR = KStar()
ROW = KRow()

RECORD_CTOR = "Π"
VARIANT_CTOR = "Σ"
ARROW_CTOR = "->"

# Kinds of the builtin type constructors; `List` is an alias expanded by
# intern, kept here so kind checking accepts it.
CTOR_KINDS: dict[str, Kind] = {
    "Int": STAR,
    "Double": STAR,
    "String": STAR,
    "Date": STAR,
    "Currency": STAR,
    "Contract": STAR,
    "Obs": KArrow(STAR, STAR),
    "List": KArrow(STAR, STAR),
    ARROW_CTOR: KArrow(STAR, KArrow(STAR, STAR)),
    RECORD_CTOR: KArrow(ROW, STAR),
    VARIANT_CTOR: KArrow(ROW, STAR),
}


# ---------------------------------------------------------------------------
# Node payloads

@dataclass(frozen=True)
class PVar:
    pass


@dataclass(frozen=True)
class PDyn:
    canonical: bool


@dataclass(frozen=True)
class PCtor:
    name: str
    kind: Kind


@dataclass(frozen=True)
class PApp:
    fn: "Node"
    arg: "Node"


@dataclass(frozen=True)
class PRow:
    label: str
    ty: "Node"
    tail: "Node"


@dataclass(frozen=True)
class PEmptyRow:
    pass


@dataclass(frozen=True)
class PMu:
    binder: "Node"
    body: "Node"


class Node:
    __slots__ = ("id", "payload", "parent")

    def __init__(self, node_id: int, payload):
        self.id = node_id
        self.payload = payload
        self.parent: Node | None = None

    def __repr__(self):
        return f"<node {self.id} {type(self.payload).__name__}>"


class TypeStore:
    """Arena of type nodes owned by one inference session."""

    def __init__(self, trace=None):
        self.nodes: list[Node] = []
        self._ctors: dict[str, Node] = {}
        self.canonical_dyn = self._new(PDyn(canonical=True))
        self.trace = trace  # callable(case:int, lhs:str, rhs:str) or None
        self.dyn_events: list[tuple[Node, Node]] = []
        self.visited: set[int] = set()
        self.visited_pairs: set[tuple[int, int]] = set()

    # -- node creation

    def _new(self, payload) -> Node:
        node = Node(len(self.nodes), payload)
        self.nodes.append(node)
        return node

    def fresh_var(self) -> Node:
        return self._new(PVar())

    def new_dyn(self) -> Node:
        return self._new(PDyn(canonical=False))

    def ctor(self, name: str) -> Node:
        if name not in self._ctors:
            if name not in CTOR_KINDS:
                raise KindError(f"unknown type constructor '{name}'")
            self._ctors[name] = self._new(PCtor(name, CTOR_KINDS[name]))
        return self._ctors[name]

    def app(self, fn: Node, arg: Node) -> Node:
        return self._new(PApp(fn, arg))

    def arrow(self, dom: Node, cod: Node) -> Node:
        return self.app(self.app(self.ctor(ARROW_CTOR), dom), cod)

    def row(self, label: str, ty: Node, tail: Node) -> Node:
        return self._new(PRow(label, ty, tail))

    def empty_row(self) -> Node:
        return self._new(PEmptyRow())

    def record(self, row: Node) -> Node:
        return self.app(self.ctor(RECORD_CTOR), row)

    def variant(self, row: Node) -> Node:
        return self.app(self.ctor(VARIANT_CTOR), row)

    # -- union-find

    def find(self, node: Node) -> Node:
        root = node
        while root.parent is not None:
            root = root.parent
        while node is not root:
            parent = node.parent
            node.parent = root
            node = parent
        return root

    def merge(self, keep: Node, absorb: Node) -> None:
        keep_root = self.find(keep)
        absorb_root = self.find(absorb)
        if keep_root is absorb_root:
            return
        absorb_root.parent = keep_root

    # -- structural helpers

    def arrow_parts(self, node: Node) -> tuple[Node, Node] | None:
        p = self.find(node).payload
        if not isinstance(p, PApp):
            return None
        inner = self.find(p.fn).payload
        if not isinstance(inner, PApp):
            return None
        head = self.find(inner.fn).payload
        if isinstance(head, PCtor) and head.name == ARROW_CTOR:
            return (inner.arg, p.arg)
        return None

    def spine_head(self, node: Node) -> Node:
        node = self.find(node)
        while isinstance(node.payload, PApp):
            node = self.find(node.payload.fn)
        return node

    def reaches_canonical(self, node: Node) -> bool:
        seen: set[int] = set()
        stack = [node]
        while stack:
            cur = self.find(stack.pop())
            if cur.id in seen:
                continue
            seen.add(cur.id)
            p = cur.payload
            if isinstance(p, PDyn) and p.canonical:
                return True
            if isinstance(p, PApp):
                stack.append(p.fn)
                stack.append(p.arg)
            elif isinstance(p, PRow):
                stack.append(p.ty)
                stack.append(p.tail)
            elif isinstance(p, PMu):
                stack.append(p.body)
        return False

    def contains_dyn(self, node: Node) -> bool:
        seen: set[int] = set()
        stack = [node]
        while stack:
            cur = self.find(stack.pop())
            if cur.id in seen:
                continue
            seen.add(cur.id)
            p = cur.payload
            if isinstance(p, PDyn):
                return True
            if isinstance(p, PApp):
                stack.append(p.fn)
                stack.append(p.arg)
            elif isinstance(p, PRow):
                stack.append(p.ty)
                stack.append(p.tail)
            elif isinstance(p, PMu):
                stack.append(p.body)
        return False


# ---------------------------------------------------------------------------
# Kind checking

def kind_check(ty: S.SurfaceType, ctor_kinds: dict[str, Kind] | None = None) -> Kind:
    """Return the kind of a surface type, or raise KindError.

    Type variables take their kind from the first position they appear in;
    the dynamic type has kind * only, so a `?` row tail is rejected here.
    """
    kinds = CTOR_KINDS if ctor_kinds is None else ctor_kinds
    var_kinds: dict[str, Kind] = {}

    def check(t: S.SurfaceType, expected: Kind) -> None:
        got = synth(t, expected)
        if got != expected:
            raise KindError(f"expected kind {expected}, got {got} for {S.pretty_type(t)}")

    def synth(t: S.SurfaceType, expected: Kind | None = None) -> Kind:
        if isinstance(t, S.TVar):
            if t.name in var_kinds:
                return var_kinds[t.name]
            var_kinds[t.name] = expected if expected is not None else STAR
            return var_kinds[t.name]
        if isinstance(t, S.TDyn):
            return STAR
        if isinstance(t, S.TArrow):
            check(t.dom, STAR)
            check(t.cod, STAR)
            return STAR
        if isinstance(t, S.TCtor):
            if t.name not in kinds:
                raise KindError(f"unknown type constructor '{t.name}'")
            k = kinds[t.name]
            for arg in t.args:
                if not isinstance(k, KArrow):
                    raise KindError(f"'{t.name}' applied to too many arguments")
                check(arg, k.param)
                k = k.result
            return k
        if isinstance(t, (S.TRecord, S.TVariant)):
            check(t.row, ROW)
            return STAR
        if isinstance(t, S.TRowField):
            check(t.ty, STAR)
            check(t.tail, ROW)
            return ROW
        if isinstance(t, S.TRowEmpty):
            return ROW
        if isinstance(t, S.TMu):
            shadowed = var_kinds.get(t.var)
            var_kinds[t.var] = STAR
            check(t.body, STAR)
            if shadowed is not None:
                var_kinds[t.var] = shadowed
            else:
                del var_kinds[t.var]
            return STAR
        raise KindError(f"unknown surface type {t!r}")

    return synth(ty)


# ---------------------------------------------------------------------------
# Interning

def _unguarded(name: str, body: S.SurfaceType) -> bool:
    # A mu binder must sit under at least one constructor; only a spine of
    # nested mu binders can violate that.
    if isinstance(body, S.TVar):
        return body.name == name
    if isinstance(body, S.TMu):
        if body.var == name:
            return False
        return _unguarded(name, body.body)
    return False


def intern(store: TypeStore, ty: S.SurfaceType, var_map: dict[str, Node] | None = None) -> Node:
    """Build graph nodes for a kind-checked surface type.

    Occurrences of a mu-bound variable are back-patched to the binder node,
    producing a cycle; every `?` maps to the store's canonical dynamic node;
    free type variables intern to fresh variable nodes shared by name within
    one call.
    """
    env: dict[str, Node] = {} if var_map is None else var_map

    def go(t: S.SurfaceType) -> Node:
        if isinstance(t, S.TDyn):
            return store.canonical_dyn
        if isinstance(t, S.TVar):
            if t.name not in env:
                env[t.name] = store.fresh_var()
            return env[t.name]
        if isinstance(t, S.TArrow):
            return store.arrow(go(t.dom), go(t.cod))
        if isinstance(t, S.TCtor):
            if t.name == "List":
                return _intern_list(store, go(t.args[0]))
            node = store.ctor(t.name)
            for arg in t.args:
                node = store.app(node, go(arg))
            return node
        if isinstance(t, S.TRecord):
            return store.record(go(t.row))
        if isinstance(t, S.TVariant):
            return store.variant(go(t.row))
        if isinstance(t, S.TRowField):
            return store.row(t.label, go(t.ty), go(t.tail))
        if isinstance(t, S.TRowEmpty):
            return store.empty_row()
        if isinstance(t, S.TMu):
            if _unguarded(t.var, t.body):
                raise OccursViolation(
                    f"degenerate recursive type mu {t.var}. {S.pretty_type(t.body)}"
                )
            binder = store.fresh_var()
            mu = store._new(PMu(binder, binder))  # body patched below
            shadowed = env.get(t.var)
            env[t.var] = mu
            body = go(t.body)
            mu.payload = PMu(binder, body)
            if shadowed is not None:
                env[t.var] = shadowed
            else:
                del env[t.var]
            return mu
        raise KindError(f"cannot intern {t!r}")

    return go(ty)


def _intern_list(store: TypeStore, elem: Node) -> Node:
    binder = store.fresh_var()
    mu = store._new(PMu(binder, binder))
    nil_payload = store.record(store.empty_row())
    cons_row = store.row("head", elem, store.row("tail", mu, store.empty_row()))
    cons_payload = store.record(cons_row)
    body_row = store.row("Nil", nil_payload, store.row("Cons", cons_payload, store.empty_row()))
    mu.payload = PMu(binder, store.variant(body_row))
    return mu


# ---------------------------------------------------------------------------
# copy_dyn

def copy_dyn(store: TypeStore, node: Node) -> Node:
    """Replace every reachable canonical `?` occurrence with a fresh instance.

    Subgraphs that do not reach the canonical node are shared untouched, so
    calling this on an already-copied constraint side is the identity; that
    is what bounds copying to once per top-level constraint.
    """
    if not store.reaches_canonical(node):
        return store.find(node)

    memo: dict[int, Node] = {}

    def go(n: Node) -> Node:
        cur = store.find(n)
        p = cur.payload
        if isinstance(p, PDyn):
            if p.canonical:
                return store.new_dyn()  # one fresh node per occurrence
            return cur
        if not store.reaches_canonical(cur):
            return cur
        if cur.id in memo:
            return memo[cur.id]
        if isinstance(p, PApp):
            fresh = store._new(PApp(cur, cur))
            memo[cur.id] = fresh
            fresh.payload = PApp(go(p.fn), go(p.arg))
            return fresh
        if isinstance(p, PRow):
            fresh = store._new(PRow(p.label, cur, cur))
            memo[cur.id] = fresh
            fresh.payload = PRow(p.label, go(p.ty), go(p.tail))
            return fresh
        if isinstance(p, PMu):
            fresh = store._new(PMu(p.binder, cur))
            memo[cur.id] = fresh
            fresh.payload = PMu(p.binder, go(p.body))
            return fresh
        return cur

    return go(node)


# ---------------------------------------------------------------------------
# Read-back

class _Namer:
    def __init__(self):
        self.names: dict[int, str] = {}

    def name_for(self, node_id: int) -> str:
        if node_id not in self.names:
            n = len(self.names)
            name = ""
            while True:
                name = chr(ord("a") + n % 26) + name
                n = n // 26 - 1
                if n < 0:
                    break
            self.names[node_id] = name
        return self.names[node_id]


def resolve(store: TypeStore, node: Node, max_depth: int | None = None) -> S.SurfaceType:
    """Read a surface type back out of the graph, following representatives.

    Cycles reintroduce mu binders with fresh names; unresolved variables
    print as named type variables; any dynamic node prints as `?`.
    """
    namer = _Namer()
    mu_names: dict[int, str] = {}
    active: set[int] = set()

    def go(n: Node, depth: int) -> S.SurfaceType:
        cur = store.find(n)
        if max_depth is not None and depth > max_depth:
            return S.TVar("...")
        if cur.id in active:
            mu_names.setdefault(cur.id, f"r{len(mu_names)}")
            return S.TVar(mu_names[cur.id])
        p = cur.payload
        if isinstance(p, PVar):
            return S.TVar(namer.name_for(cur.id))
        if isinstance(p, PDyn):
            return S.TDyn()
        if isinstance(p, PCtor):
            return S.TCtor(p.name, ())
        if isinstance(p, PEmptyRow):
            return S.TRowEmpty()
        active.add(cur.id)
        try:
            if isinstance(p, PMu):
                body = go(p.body, depth + 1)
            elif isinstance(p, PRow):
                body = S.TRowField(p.label, go(p.ty, depth + 1), go(p.tail, depth + 1))
            else:  # PApp: collect the application spine
                spine = []
                head = cur
                while isinstance(head.payload, PApp):
                    spine.append(head.payload.arg)
                    head = store.find(head.payload.fn)
                spine.reverse()
                head_p = head.payload
                if isinstance(head_p, PCtor) and head_p.name == ARROW_CTOR and len(spine) == 2:
                    body = S.TArrow(go(spine[0], depth + 1), go(spine[1], depth + 1))
                elif isinstance(head_p, PCtor) and head_p.name == RECORD_CTOR and len(spine) == 1:
                    body = S.TRecord(go(spine[0], depth + 1))
                elif isinstance(head_p, PCtor) and head_p.name == VARIANT_CTOR and len(spine) == 1:
                    body = S.TVariant(go(spine[0], depth + 1))
                else:
                    if isinstance(head_p, PCtor):
                        head_name = head_p.name
                    elif isinstance(head_p, PVar):
                        head_name = namer.name_for(head.id)
                    else:
                        head_name = "?"
                    body = S.TCtor(head_name, tuple(go(a, depth + 1) for a in spine))
        finally:
            active.discard(cur.id)
        if cur.id in mu_names:
            return S.TMu(mu_names[cur.id], body)
        return body

    return go(node, 0)


def type_str(store: TypeStore, node: Node, max_depth: int | None = 12) -> str:
    return S.pretty_type(resolve(store, node, max_depth=max_depth))
