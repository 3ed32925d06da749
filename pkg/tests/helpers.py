"""Shared test utilities: alpha-equivalence, the precision order, ground-type
enumeration, and small session helpers."""

from __future__ import annotations

import itertools

from gradlang import syntax as S


def alpha_normalize(ty: S.SurfaceType) -> S.SurfaceType:
    """Rename type variables and mu binders in first-traversal order."""
    free: dict[str, str] = {}

    def walk(t: S.SurfaceType, bound: dict[str, str]) -> S.SurfaceType:
        if isinstance(t, S.TVar):
            if t.name in bound:
                return S.TVar(bound[t.name])
            if t.name not in free:
                free[t.name] = f"v{len(free)}"
            return S.TVar(free[t.name])
        if isinstance(t, S.TCtor):
            return S.TCtor(t.name, tuple(walk(a, bound) for a in t.args))
        if isinstance(t, S.TArrow):
            return S.TArrow(walk(t.dom, bound), walk(t.cod, bound))
        if isinstance(t, S.TRecord):
            return S.TRecord(walk(t.row, bound))
        if isinstance(t, S.TVariant):
            return S.TVariant(walk(t.row, bound))
        if isinstance(t, S.TRowField):
            return S.TRowField(t.label, walk(t.ty, bound), walk(t.tail, bound))
        if isinstance(t, S.TMu):
            fresh = f"m{len(bound)}"
            return S.TMu(fresh, walk(t.body, {**bound, t.var: fresh}))
        return t

    return walk(ty, {})


def alpha_equal(t1: S.SurfaceType, t2: S.SurfaceType) -> bool:
    return alpha_normalize(t1) == alpha_normalize(t2)


def _row_parts(row: S.SurfaceType):
    fields = {}
    while isinstance(row, S.TRowField):
        fields[row.label] = row.ty
        row = row.tail
    return fields, row


def prec_le(t1: S.SurfaceType, t2: S.SurfaceType, vmap: dict | None = None) -> bool:
    """True when t1 is less precise than or equal to t2 (`?` below everything,
    lifted pointwise)."""
    if vmap is None:
        vmap = {}
    if isinstance(t1, S.TDyn):
        return True
    if isinstance(t1, S.TVar) and isinstance(t2, S.TVar):
        if t1.name in vmap:
            return vmap[t1.name] == t2.name
        vmap[t1.name] = t2.name
        return True
    if isinstance(t1, S.TCtor) and isinstance(t2, S.TCtor):
        return (
            t1.name == t2.name
            and len(t1.args) == len(t2.args)
            and all(prec_le(a, b, vmap) for a, b in zip(t1.args, t2.args))
        )
    if isinstance(t1, S.TArrow) and isinstance(t2, S.TArrow):
        return prec_le(t1.dom, t2.dom, vmap) and prec_le(t1.cod, t2.cod, vmap)
    if isinstance(t1, S.TRecord) and isinstance(t2, S.TRecord):
        return _rows_prec_le(t1.row, t2.row, vmap)
    if isinstance(t1, S.TVariant) and isinstance(t2, S.TVariant):
        return _rows_prec_le(t1.row, t2.row, vmap)
    if isinstance(t1, S.TMu) and isinstance(t2, S.TMu):
        inner = dict(vmap)
        inner[t1.var] = t2.var
        return prec_le(t1.body, t2.body, inner)
    if isinstance(t1, (S.TRowField, S.TRowEmpty)) and isinstance(t2, (S.TRowField, S.TRowEmpty)):
        return _rows_prec_le(t1, t2, vmap)
    return False


def _rows_prec_le(r1, r2, vmap) -> bool:
    f1, tail1 = _row_parts(r1)
    f2, tail2 = _row_parts(r2)
    if set(f1) != set(f2):
        return False
    if not all(prec_le(f1[l], f2[l], vmap) for l in f1):
        return False
    if isinstance(tail1, S.TRowEmpty) and isinstance(tail2, S.TRowEmpty):
        return True
    return prec_le(tail1, tail2, vmap)


def enum_ground_types(max_depth: int) -> list[S.SurfaceType]:
    """All ground types of bounded depth over Int, String, ?, arrows, and
    single-field record rows labelled x or y."""
    levels = {1: [S.TCtor("Int"), S.TCtor("String"), S.TDyn()]}
    for depth in range(2, max_depth + 1):
        prev = levels[depth - 1]
        out = list(levels[1])
        out.extend(S.TArrow(a, b) for a, b in itertools.product(prev, prev))
        for label in ("x", "y"):
            out.extend(S.TRecord(S.TRowField(label, a, S.TRowEmpty())) for a in prev)
        levels[depth] = out
    return levels[max_depth]


def is_dyn_free(ty: S.SurfaceType) -> bool:
    if isinstance(ty, S.TDyn):
        return False
    if isinstance(ty, S.TCtor):
        return all(is_dyn_free(a) for a in ty.args)
    if isinstance(ty, S.TArrow):
        return is_dyn_free(ty.dom) and is_dyn_free(ty.cod)
    if isinstance(ty, (S.TRecord, S.TVariant)):
        return is_dyn_free(ty.row)
    if isinstance(ty, S.TRowField):
        return is_dyn_free(ty.ty) and is_dyn_free(ty.tail)
    if isinstance(ty, S.TMu):
        return is_dyn_free(ty.body)
    return True


def ground_equal(t1: S.SurfaceType, t2: S.SurfaceType) -> bool:
    """Syntactic unifiability of ground, variable-free types: equality up to
    row-field permutation.  The textbook baseline for dyn-free inputs."""
    if isinstance(t1, S.TCtor) and isinstance(t2, S.TCtor):
        return (
            t1.name == t2.name
            and len(t1.args) == len(t2.args)
            and all(ground_equal(a, b) for a, b in zip(t1.args, t2.args))
        )
    if isinstance(t1, S.TArrow) and isinstance(t2, S.TArrow):
        return ground_equal(t1.dom, t2.dom) and ground_equal(t1.cod, t2.cod)
    if isinstance(t1, S.TRecord) and isinstance(t2, S.TRecord):
        f1, tail1 = _row_parts(t1.row)
        f2, tail2 = _row_parts(t2.row)
        if set(f1) != set(f2) or not isinstance(tail1, S.TRowEmpty) or not isinstance(tail2, S.TRowEmpty):
            return False
        return all(ground_equal(f1[l], f2[l]) for l in f1)
    return False
