"""Name resolution: surface declarations to nameless core declarations.

The resolver is untyped but layer-aware: binder annotations decide whether a
λ binds a term variable or an interval coordinate, and application arguments
that are syntactically points become extension applications.  Telescopes are
folded into a closed type and body, so a declaration's interface is a single
Π/extension-type tower and references to it are plain constants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexer import Span
from . import surface as S
from .core import (
    Annot,
    App,
    BOT,
    Constant,
    Cube,
    CubePoint,
    CubeProd,
    CubeVar,
    Declaration,
    ExtApp,
    ExtLambda,
    ExtType,
    Fst,
    Id,
    IndPath,
    INTERVAL,
    Lambda,
    ONE,
    Pair,
    Pi,
    PointFst,
    PointPair,
    PointSnd,
    Refl,
    SHAPE_ENDPOINTS,
    SHAPE_INNER_HORN,
    SHAPE_TRIANGLE,
    Shape,
    Sigma,
    Snd,
    Split,
    STAR,
    TelescopeEntry,
    Term,
    Tope,
    TopeAnd,
    TopeEq,
    TopeLeq,
    TopeOr,
    TOP,
    UNIT,
    Universe,
    Var,
    ZERO,
    term_in_scope,
    weaken,
)


class ResolveError(Exception):
    def __init__(self, code: str, message: str, span: Span | None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.span = span


FAILED = object()  # env marker for declarations that did not check


@dataclass
class _Entry:
    layer: str  # "term" | "cube"
    names: tuple[str, ...]  # one name, or the two coordinates of a pair


class Resolver:
    def __init__(self, env: dict[str, object]):
        self.env = env
        self.scope: list[_Entry] = []

    # -- scope -------------------------------------------------------------

    def _lookup(self, name: str) -> tuple[str, int, int] | None:
        """(layer, de Bruijn index, coordinate position) for a bound name."""
        term_depth = 0
        cube_depth = 0
        for entry in reversed(self.scope):
            if name in entry.names:
                if entry.layer == "term":
                    return ("term", term_depth, 0)
                return ("cube", cube_depth, entry.names.index(name))
            if entry.layer == "term":
                term_depth += 1
            else:
                cube_depth += 1
        return None

    def _push(self, layer: str, names: tuple[str, ...]) -> None:
        self.scope.append(_Entry(layer, names))

    def _pop(self) -> None:
        self.scope.pop()

    def _is_cube_name(self, name: str) -> bool:
        hit = self._lookup(name)
        return hit is not None and hit[0] == "cube"

    # -- layer classification ------------------------------------------------

    def is_point_expr(self, e: S.SExpr) -> bool:
        match e:
            case S.SNat(_, text):
                return text in ("0", "1")
            case S.SStar(_):
                return True
            case S.SName(_, name):
                return self._is_cube_name(name)
            case S.SPair(_, a, b):
                return self.is_point_expr(a) and self.is_point_expr(b)
            case S.SP1(_, a) | S.SP2(_, a):
                return self.is_point_expr(a)
        return False

    @staticmethod
    def is_cube_expr(e: S.SExpr) -> bool:
        match e:
            case S.SNat(_, text):
                return text in ("1", "2")
            case S.SShapeName(_, "Delta1"):
                return True
            case S.STimes(_, a, b):
                return Resolver.is_cube_expr(a) and Resolver.is_cube_expr(b)
        return False

    # -- cubes, points, topes ------------------------------------------------

    def resolve_cube(self, e: S.SExpr) -> Cube:
        match e:
            case S.SNat(_, "1"):
                return UNIT
            case S.SNat(_, "2"):
                return INTERVAL
            case S.SShapeName(_, "Delta1"):
                return INTERVAL
            case S.STimes(_, a, b):
                return CubeProd(self.resolve_cube(a), self.resolve_cube(b))
        raise ResolveError("E-RESOLVE", "expected a cube (1, 2, or a product)", e.span)

    def resolve_point(self, e: S.SExpr) -> CubePoint:
        match e:
            case S.SNat(_, "0"):
                return ZERO
            case S.SNat(_, "1"):
                return ONE
            case S.SStar(_):
                return STAR
            case S.SName(_, name):
                hit = self._lookup(name)
                if hit is None or hit[0] != "cube":
                    raise ResolveError(
                        "E-RESOLVE", f"'{name}' is not an interval coordinate", e.span
                    )
                _, index, coord = hit
                base: CubePoint = CubeVar(index)
                entry_names = self._cube_entry_names(index)
                if len(entry_names) == 2:
                    return PointFst(base) if coord == 0 else PointSnd(base)
                return base
            case S.SPair(_, a, b):
                return PointPair(self.resolve_point(a), self.resolve_point(b))
            case S.SP1(_, a):
                return PointFst(self.resolve_point(a))
            case S.SP2(_, a):
                return PointSnd(self.resolve_point(a))
        raise ResolveError("E-RESOLVE", "expected an interval point", e.span)

    def _cube_entry_names(self, index: int) -> tuple[str, ...]:
        depth = 0
        for entry in reversed(self.scope):
            if entry.layer == "cube":
                if depth == index:
                    return entry.names
                depth += 1
        raise AssertionError("cube index out of scope")

    def resolve_tope(self, e: S.SExpr) -> Tope:
        match e:
            case S.STop(_):
                return TOP
            case S.SBot(_):
                return BOT
            case S.SLeq(_, l, r):
                return TopeLeq(self.resolve_point(l), self.resolve_point(r))
            case S.SEq(_, l, r):
                return TopeEq(self.resolve_point(l), self.resolve_point(r))
            case S.SAnd(_, l, r):
                return TopeAnd(self.resolve_tope(l), self.resolve_tope(r))
            case S.SOr(_, l, r):
                return TopeOr(self.resolve_tope(l), self.resolve_tope(r))
            case S.SShapeName(_, "dDelta1"):
                # both endpoints of the innermost bound coordinate
                return TopeOr(TopeEq(CubeVar(0), ZERO), TopeEq(CubeVar(0), ONE))
        raise ResolveError("E-RESOLVE", "expected a tope", e.span)

    # -- terms ----------------------------------------------------------------

    def resolve_term(self, e: S.SExpr) -> Term:
        match e:
            case S.SName(_, name):
                hit = self._lookup(name)
                if hit is not None:
                    layer, index, _ = hit
                    if layer == "term":
                        return Var(index)
                    raise ResolveError(
                        "E-RESOLVE",
                        f"interval coordinate '{name}' used as a term",
                        e.span,
                    )
                target = self.env.get(name)
                if target is None:
                    raise ResolveError("E-UNBOUND-NAME", f"unbound name '{name}'", e.span)
                if target is FAILED:
                    raise ResolveError(
                        "E-DEPENDS-ON-FAILED",
                        f"'{name}' did not check; cannot be referenced",
                        e.span,
                    )
                return Constant(name)
            case S.SUniv(_, level):
                return Universe(level)
            case S.SArrow(_, l, r):
                dom = self.resolve_term(l)
                cod = self.resolve_term(r)
                return Pi(dom, weaken(cod, 1))
            case S.STimes(_, l, r):
                if self.is_cube_expr(e):
                    raise ResolveError("E-RESOLVE", "cube used as a term", e.span)
                a = self.resolve_term(l)
                b = self.resolve_term(r)
                return Sigma(a, weaken(b, 1))
            case S.SSim(_, l, r):
                return Id(None, self.resolve_term(l), self.resolve_term(r))
            case S.SId(_, ty, l, r):
                return Id(
                    self.resolve_term(ty), self.resolve_term(l), self.resolve_term(r)
                )
            case S.SApp(_, f, x):
                fn = self.resolve_term(f)
                if self.is_point_expr(x):
                    return ExtApp(fn, self.resolve_point(x))
                return App(fn, self.resolve_term(x))
            case S.SPair(_, a, b):
                return Pair(self.resolve_term(a), self.resolve_term(b))
            case S.SAnnot(_, t, ty):
                return Annot(self.resolve_term(t), self.resolve_term(ty))
            case S.SFst(_, a):
                return Fst(self.resolve_term(a))
            case S.SSnd(_, a):
                return Snd(self.resolve_term(a))
            case S.SRefl(_, a):
                return Refl(self.resolve_term(a))
            case S.SIndPath(_, m, d, p):
                motive = self._binder_body(m, 3, "ind-path motive")
                base = self._binder_body(d, 1, "ind-path base case")
                return IndPath(motive, base, self.resolve_term(p))
            case S.SLam(_, binders, body):
                return self._resolve_lam(list(binders), body)
            case S.SExt(_, shape, cod, tope, boundary):
                return self._resolve_ext(shape, cod, tope, boundary, e.span)
            case S.SSplit(_, branches):
                resolved = []
                for tope_e, value_e in branches:
                    if tope_e is None:
                        raise ResolveError(
                            "E-RESOLVE",
                            "positional split branches are only allowed in an "
                            "extension-type boundary",
                            value_e.span,
                        )
                    tope = self.resolve_tope(tope_e)
                    resolved.append((tope, self.resolve_term(value_e)))
                return Split(tuple(resolved))
            case S.SNat(_, _):
                raise ResolveError(
                    "E-RESOLVE", "numeral is only meaningful as an interval point", e.span
                )
            case S.SP1(_, _) | S.SP2(_, _):
                raise ResolveError(
                    "E-RESOLVE", "point projection used in term position", e.span
                )
            case S.SPi(_, groups, body):
                return self._resolve_quantifier(groups, body, is_pi=True)
            case S.SSigma(_, groups, body):
                return self._resolve_quantifier(groups, body, is_pi=False)
            case S.STop(_) | S.SBot(_) | S.SLeq(_, _, _) | S.SEq(_, _, _) | S.SAnd(
                _, _, _
            ) | S.SOr(_, _, _):
                raise ResolveError("E-RESOLVE", "tope syntax in term position", e.span)
            case S.SShapeName(_, name):
                raise ResolveError(
                    "E-RESOLVE", f"shape '{name}' cannot be used as a term", e.span
                )
            case S.SStar(_):
                raise ResolveError("E-RESOLVE", "point '⋆' used in term position", e.span)
        raise ResolveError("E-RESOLVE", "cannot resolve expression", e.span)

    def _resolve_quantifier(
        self, groups: tuple[S.SGroup, ...], body: S.SExpr, is_pi: bool
    ) -> Term:
        binders: list[tuple[str, Term]] = []
        pushed = 0
        for g in groups:
            if self.is_cube_expr(g.annot):
                raise ResolveError(
                    "E-RESOLVE",
                    "Π/Σ cannot bind interval coordinates; use an extension type",
                    g.span,
                )
            ty = self.resolve_term(g.annot)
            for i, name in enumerate(g.names):
                binders.append((name, weaken(ty, i)))
                self._push("term", (name,))
                pushed += 1
        result = self.resolve_term(body)
        for _ in range(pushed):
            self._pop()
        ctor = Pi if is_pi else Sigma
        for _, ty in reversed(binders):
            result = ctor(ty, result)
        return result

    def _binder_body(self, e: S.SExpr, arity: int, what: str) -> Term:
        names: list[str] = []
        node = e
        while len(names) < arity:
            if isinstance(node, S.SLam):
                for b in node.binders:
                    if len(names) == arity:
                        raise ResolveError(
                            "E-RESOLVE", f"{what} must bind exactly {arity} variables", e.span
                        )
                    if b.annot is not None or isinstance(b.pattern, tuple):
                        raise ResolveError(
                            "E-RESOLVE", f"{what} binders must be plain names", e.span
                        )
                    names.append(b.pattern)
                node = node.body
            else:
                raise ResolveError(
                    "E-RESOLVE", f"{what} must be a λ binding {arity} variables", e.span
                )
        for n in names:
            self._push("term", (n,))
        body = self.resolve_term(node)
        for _ in names:
            self._pop()
        return body

    def _resolve_lam(self, binders: list[S.SLamBinder], body: S.SExpr) -> Term:
        if not binders:
            return self.resolve_term(body)
        b = binders[0]
        if b.annot is not None and not self.is_cube_expr(b.annot):
            raise ResolveError(
                "E-RESOLVE",
                "λ binder annotations must be cubes; term binders are typed by "
                "the expected Π type",
                b.annot.span,
            )
        is_cube = b.annot is not None or isinstance(b.pattern, tuple)
        if is_cube:
            names = b.pattern if isinstance(b.pattern, tuple) else (b.pattern,)
            self._push("cube", tuple(names))
            inner = self._resolve_lam(binders[1:], body)
            self._pop()
            return ExtLambda(inner)
        self._push("term", (b.pattern,))
        inner = self._resolve_lam(binders[1:], body)
        self._pop()
        return Lambda(inner)

    def _resolve_ext(
        self,
        shape_e: S.SExpr,
        cod_e: S.SExpr,
        tope_e: S.SExpr | None,
        boundary_e: S.SExpr | None,
        span: Span,
    ) -> Term:
        match shape_e:
            case S.SShape(_, binder, cube_e, constraint_e):
                cube = self.resolve_cube(cube_e)
                names = binder if isinstance(binder, tuple) else (binder,)
                self._push("cube", tuple(names))
                constraint = self.resolve_tope(constraint_e)
            case S.SShapeName(_, "Delta2"):
                cube = SHAPE_TRIANGLE.cube
                self._push("cube", ("_",))
                constraint = SHAPE_TRIANGLE.constraint
            case S.SShapeName(_, "Lambda21"):
                cube = SHAPE_INNER_HORN.cube
                self._push("cube", ("_",))
                constraint = SHAPE_INNER_HORN.constraint
            case S.SShapeName(_, "dDelta1"):
                cube = SHAPE_ENDPOINTS.cube
                self._push("cube", ("_",))
                constraint = SHAPE_ENDPOINTS.constraint
            case _:
                cube = self.resolve_cube(shape_e)
                self._push("cube", ("_",))
                constraint = TOP
        try:
            codomain = self.resolve_term(cod_e)
            if tope_e is None:
                boundary_tope: Tope = BOT
                boundary: Term = Split(())
            else:
                boundary_tope = self.resolve_tope(tope_e)
                boundary = self._resolve_boundary(boundary_e, boundary_tope)
        finally:
            self._pop()
        return ExtType(Shape(cube, constraint), codomain, boundary_tope, boundary)

    def _resolve_boundary(self, e: S.SExpr, boundary_tope: Tope) -> Term:
        if isinstance(e, S.SSplit) and any(t is None for t, _ in e.branches):
            if not all(t is None for t, _ in e.branches):
                raise ResolveError(
                    "E-RESOLVE", "mixed positional and guarded split branches", e.span
                )
            disjuncts = _flatten_or(boundary_tope)
            if len(disjuncts) != len(e.branches):
                raise ResolveError(
                    "E-RESOLVE",
                    f"positional boundary has {len(e.branches)} branches but the "
                    f"tope has {len(disjuncts)} disjuncts",
                    e.span,
                )
            return Split(
                tuple(
                    (tope, self.resolve_term(value))
                    for tope, (_, value) in zip(disjuncts, e.branches)
                )
            )
        return self.resolve_term(e)


def _flatten_or(t: Tope) -> list[Tope]:
    if isinstance(t, TopeOr):
        return _flatten_or(t.lhs) + _flatten_or(t.rhs)
    return [t]


def resolve(decl: S.SurfaceDecl, env: dict[str, object]) -> Declaration:
    """Resolve one surface declaration against previously checked names."""
    if decl.name in env:
        raise ResolveError(
            "E-DUPLICATE-NAME", f"duplicate declaration name '{decl.name}'", decl.name_span
        )
    r = Resolver(env)
    telescope: list[TelescopeEntry] = []
    folds: list[tuple[str, object]] = []  # ("term", type) | ("cube", cube) | ("tope", tope)
    for p in decl.params:
        if isinstance(p, S.SGroup):
            if Resolver.is_cube_expr(p.annot):
                cube = r.resolve_cube(p.annot)
                for name in p.names:
                    telescope.append(TelescopeEntry("cube", name, cube))
                    folds.append(("cube", cube))
                    r._push("cube", (name,))
            else:
                ty = r.resolve_term(p.annot)
                for i, name in enumerate(p.names):
                    entry_ty = weaken(ty, i)
                    telescope.append(TelescopeEntry("term", name, entry_ty))
                    folds.append(("term", entry_ty))
                    r._push("term", (name,))
        else:
            # a tope hypothesis binds an anonymous unit coordinate
            r._push("cube", ("_",))
            tope = r.resolve_tope(p.tope)
            telescope.append(TelescopeEntry("tope", "_", tope))
            folds.append(("tope", tope))
    ty = r.resolve_term(decl.type)
    body = r.resolve_term(decl.body) if decl.body is not None else None
    for kind, payload in reversed(folds):
        if kind == "term":
            ty = Pi(payload, ty)
            if body is not None:
                body = Lambda(body)
        elif kind == "cube":
            ty = ExtType(Shape(payload, TOP), ty, BOT, Split(()))
            if body is not None:
                body = ExtLambda(body)
        else:
            ty = ExtType(Shape(UNIT, payload), ty, BOT, Split(()))
            if body is not None:
                body = ExtLambda(body)
    if not term_in_scope(ty, 0, 0) or (body is not None and not term_in_scope(body, 0, 0)):
        raise ResolveError(
            "E-SCOPE", f"resolved declaration '{decl.name}' escapes its scope", decl.span
        )
    return Declaration(decl.name, tuple(telescope), ty, body, decl.span)
