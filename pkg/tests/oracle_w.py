"""Independent substitution-based Algorithm W used as a conservativity oracle.

Deliberately separate from the union-find implementation under test: types
are immutable surface trees, unification produces an explicit substitution,
and generalization works over free-variable sets.  It covers the dyn-free
core (literals, variables, lambdas, application, let and let rec, integer
operators, annotations); anything else raises OracleUnsupported.
"""

from __future__ import annotations

import itertools

from gradlang import syntax as S


class OracleUnsupported(Exception):
    pass


class OracleTypeError(Exception):
    pass


_counter = itertools.count()


def _fresh() -> S.TVar:
    return S.TVar(f"w{next(_counter)}")


def apply_subst(subst: dict[str, S.SurfaceType], ty: S.SurfaceType) -> S.SurfaceType:
    if isinstance(ty, S.TVar):
        seen = ty
        while isinstance(seen, S.TVar) and seen.name in subst:
            seen = subst[seen.name]
        if isinstance(seen, S.TVar):
            return seen
        return apply_subst(subst, seen)
    if isinstance(ty, S.TArrow):
        return S.TArrow(apply_subst(subst, ty.dom), apply_subst(subst, ty.cod))
    if isinstance(ty, S.TCtor):
        return S.TCtor(ty.name, tuple(apply_subst(subst, a) for a in ty.args))
    return ty


def free_vars(ty: S.SurfaceType, subst: dict[str, S.SurfaceType]) -> set[str]:
    ty = apply_subst(subst, ty)
    if isinstance(ty, S.TVar):
        return {ty.name}
    if isinstance(ty, S.TArrow):
        return free_vars(ty.dom, subst) | free_vars(ty.cod, subst)
    if isinstance(ty, S.TCtor):
        out: set[str] = set()
        for a in ty.args:
            out |= free_vars(a, subst)
        return out
    return set()


def unify_w(t1: S.SurfaceType, t2: S.SurfaceType, subst: dict[str, S.SurfaceType]) -> None:
    t1 = apply_subst(subst, t1)
    t2 = apply_subst(subst, t2)
    if isinstance(t1, S.TVar):
        if isinstance(t2, S.TVar) and t1.name == t2.name:
            return
        if t1.name in free_vars(t2, subst):
            raise OracleTypeError("occurs check")
        subst[t1.name] = t2
        return
    if isinstance(t2, S.TVar):
        unify_w(t2, t1, subst)
        return
    if isinstance(t1, S.TCtor) and isinstance(t2, S.TCtor):
        if t1.name != t2.name or len(t1.args) != len(t2.args):
            raise OracleTypeError(f"{t1.name} vs {t2.name}")
        for a, b in zip(t1.args, t2.args):
            unify_w(a, b, subst)
        return
    if isinstance(t1, S.TArrow) and isinstance(t2, S.TArrow):
        unify_w(t1.dom, t2.dom, subst)
        unify_w(t1.cod, t2.cod, subst)
        return
    raise OracleTypeError("shape mismatch")


_INT = S.TCtor("Int")
_INT_BINOP = S.TArrow(_INT, S.TArrow(_INT, _INT))

BUILTINS: dict[str, tuple[tuple[str, ...], S.SurfaceType]] = {
    "+": ((), _INT_BINOP),
    "*": ((), _INT_BINOP),
    "sub": ((), _INT_BINOP),
}

_LIT_TYPES = {
    "int": S.TCtor("Int"),
    "double": S.TCtor("Double"),
    "string": S.TCtor("String"),
    "date": S.TCtor("Date"),
    "currency": S.TCtor("Currency"),
}


def _instantiate(scheme: tuple[tuple[str, ...], S.SurfaceType]) -> S.SurfaceType:
    qvars, body = scheme
    mapping = {name: _fresh() for name in qvars}

    def go(ty: S.SurfaceType) -> S.SurfaceType:
        if isinstance(ty, S.TVar):
            return mapping.get(ty.name, ty)
        if isinstance(ty, S.TArrow):
            return S.TArrow(go(ty.dom), go(ty.cod))
        if isinstance(ty, S.TCtor):
            return S.TCtor(ty.name, tuple(go(a) for a in ty.args))
        return ty

    return go(body)


def _generalize(env, ty, subst) -> tuple[tuple[str, ...], S.SurfaceType]:
    env_free: set[str] = set()
    for scheme in env.values():
        env_free |= free_vars(scheme[1], subst) - set(scheme[0])
    qvars = tuple(sorted(free_vars(ty, subst) - env_free))
    return (qvars, apply_subst(subst, ty))


def _is_value(term: S.Term) -> bool:
    if isinstance(term, (S.Lam, S.Lit, S.Var)):
        return True
    if isinstance(term, S.Annot):
        return _is_value(term.term)
    if isinstance(term, S.RecordLit):
        return all(_is_value(t) for _, t in term.fields)
    if isinstance(term, S.Inject):
        return _is_value(term.payload)
    return False


def _check_static(ty: S.SurfaceType) -> None:
    if isinstance(ty, S.TDyn):
        raise OracleUnsupported("dynamic type")
    if isinstance(ty, S.TArrow):
        _check_static(ty.dom)
        _check_static(ty.cod)
    elif isinstance(ty, S.TCtor):
        for a in ty.args:
            _check_static(a)
    elif not isinstance(ty, S.TVar):
        raise OracleUnsupported(f"type {ty!r}")


def infer_w(term: S.Term) -> S.SurfaceType:
    """Infer the principal type of a dyn-free core term, or raise
    OracleTypeError; the result has the substitution fully applied."""
    subst: dict[str, S.SurfaceType] = {}
    env: dict[str, tuple[tuple[str, ...], S.SurfaceType]] = dict(BUILTINS)

    def go(env, term) -> S.SurfaceType:
        if isinstance(term, S.Var):
            if term.name not in env:
                raise OracleTypeError(f"unbound {term.name}")
            return _instantiate(env[term.name])
        if isinstance(term, S.Lit):
            return _LIT_TYPES[term.kind]
        if isinstance(term, S.Lam):
            param = _fresh()
            body = go({**env, term.param: ((), param)}, term.body)
            return S.TArrow(param, body)
        if isinstance(term, S.App):
            fn = go(env, term.fn)
            arg = go(env, term.arg)
            result = _fresh()
            unify_w(fn, S.TArrow(arg, result), subst)
            return result
        if isinstance(term, S.Let):
            if term.rec:
                rec_var = _fresh()
                bound = go({**env, term.name: ((), rec_var)}, term.bound)
                unify_w(rec_var, bound, subst)
            else:
                bound = go(env, term.bound)
            if _is_value(term.bound):
                scheme = _generalize(env, bound, subst)
            else:
                scheme = ((), apply_subst(subst, bound))
            return go({**env, term.name: scheme}, term.body)
        if isinstance(term, S.Annot):
            _check_static(term.ty)
            inferred = go(env, term.term)
            unify_w(inferred, term.ty, subst)
            return term.ty
        raise OracleUnsupported(f"term {type(term).__name__}")

    return apply_subst(subst, go(env, term))
