"""Bidirectional type checking and definitional equality.

Equality is judged under the tope constraints in force: an inconsistent
constraint zone identifies everything, disjunctive constraints are split
before structural comparison, and extension applications reduce to their
boundary values wherever the constraints force the boundary tope.  Weak-head
normalization performs beta, projections, identity elimination on constant
paths, constant unfolding up to a depth limit, and the boundary rule.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .diagnostics import Diagnostic
from .core import (
    Annot,
    App,
    BOT,
    Constant,
    Context,
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
    Pair,
    Pi,
    Refl,
    Sigma,
    Snd,
    Split,
    Term,
    Tope,
    TopeEq,
    TopeOr,
    Universe,
    Var,
    subst_cube,
    subst_tope_point,
    substitute,
    weaken,
    weaken_cube,
)
from . import topes as T
from .core_printer import print_term, print_tope


class CheckFailure(Exception):
    def __init__(self, diag: Diagnostic):
        super().__init__(diag.message)
        self.diag = diag


class UnfoldDepthExceeded(Exception):
    pass


@dataclass
class CheckEnv:
    """Append-only table of accepted declarations plus per-run settings."""

    decls: dict[str, Declaration] = field(default_factory=dict)
    axioms: set[str] = field(default_factory=set)
    axiom_usage: dict[str, frozenset[str]] = field(default_factory=dict)
    max_unfold: int = 10_000
    flags: set[str] = field(default_factory=set)
    j_fired: int = 0  # identity-eliminator computation counter
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def snapshot(self) -> "CheckEnv":
        env = CheckEnv(
            decls=dict(self.decls),
            axioms=set(self.axioms),
            axiom_usage=dict(self.axiom_usage),
            max_unfold=self.max_unfold,
            flags=set(self.flags),
        )
        return env


def _fail(code: str, message: str, **kw) -> CheckFailure:
    return CheckFailure(Diagnostic("error", code, message, **kw))


def _atom_name(atom: T.Atom) -> str:
    pos, path = atom
    return f"x{pos}" + "".join("." + ("1" if c == 0 else "2") for c in path)


def _simplify_tope(t: Tope) -> Tope:
    """Collapse projection-of-pair redexes in displayed topes."""
    from .core import TopeAnd, TopeEq, TopeLeq, TopeOr

    match t:
        case TopeLeq(l, r):
            return TopeLeq(T.norm_point(l), T.norm_point(r))
        case TopeEq(l, r):
            return TopeEq(T.norm_point(l), T.norm_point(r))
        case TopeAnd(l, r):
            return TopeAnd(_simplify_tope(l), _simplify_tope(r))
        case TopeOr(l, r):
            return TopeOr(_simplify_tope(l), _simplify_tope(r))
        case _:
            return t


def _countermodel_map(model: T.WeakOrderModel) -> dict[str, str]:
    return {_atom_name(a): v for a, v in model.value_strings().items()}


class Checker:
    def __init__(self, env: CheckEnv):
        self.env = env

    # ------------------------------------------------------------------
    # weak-head normalization

    def whnf(self, ctx: Context, t: Term) -> Term:
        return self._whnf(ctx, t, [0])

    def _budget(self, steps: list[int]) -> None:
        steps[0] += 1
        if steps[0] > self.env.max_unfold:
            raise UnfoldDepthExceeded()

    def _whnf(self, ctx: Context, t: Term, steps: list[int]) -> Term:
        while True:
            match t:
                case Annot(a, _):
                    t = a
                case Constant(name):
                    decl = self.env.decls.get(name)
                    if decl is None or decl.body is None:
                        return t
                    self._budget(steps)
                    t = decl.body
                case Var(i):
                    d = ctx.term_def(i) if i < len(ctx.terms) else None
                    if d is None:
                        return t
                    self._budget(steps)
                    t = d
                case App(f, a):
                    fw = self._whnf(ctx, f, steps)
                    match fw:
                        case Lambda(b):
                            self._budget(steps)
                            t = substitute(b, 0, a)
                        case Split(brs):
                            t = Split(tuple((tp, App(b, a)) for tp, b in brs))
                        case _:
                            return App(fw, a)
                case Fst(p):
                    pw = self._whnf(ctx, p, steps)
                    match pw:
                        case Pair(a, _):
                            self._budget(steps)
                            t = a
                        case Split(brs):
                            t = Split(tuple((tp, Fst(b)) for tp, b in brs))
                        case _:
                            return Fst(pw)
                case Snd(p):
                    pw = self._whnf(ctx, p, steps)
                    match pw:
                        case Pair(_, b):
                            self._budget(steps)
                            t = b
                        case Split(brs):
                            t = Split(tuple((tp, Snd(b)) for tp, b in brs))
                        case _:
                            return Snd(pw)
                case IndPath(m, d, tgt):
                    tw = self._whnf(ctx, tgt, steps)
                    match tw:
                        case Refl(a):
                            self._budget(steps)
                            self.env.j_fired += 1
                            t = substitute(d, 0, a)
                        case Split(brs):
                            t = Split(tuple((tp, IndPath(m, d, b)) for tp, b in brs))
                        case _:
                            return IndPath(m, d, tw)
                case ExtApp(f, p):
                    fw = self._whnf(ctx, f, steps)
                    match fw:
                        case ExtLambda(b):
                            self._budget(steps)
                            t = subst_cube(b, 0, p)
                        case Split(brs):
                            t = Split(tuple((tp, ExtApp(b, p)) for tp, b in brs))
                        case _:
                            red = self._boundary_reduce(ctx, fw, p, steps)
                            if red is None:
                                return ExtApp(fw, p)
                            self._budget(steps)
                            t = red
                case Split(brs):
                    for tp, b in brs:
                        if T.tope_entails(ctx.cubes, list(ctx.topes), tp):
                            self._budget(steps)
                            t = b
                            break
                    else:
                        return t
                case _:
                    return t

    def _boundary_reduce(
        self, ctx: Context, neutral: Term, p, steps: list[int]
    ) -> Term | None:
        """The boundary rule: f p reduces to the boundary value at p when the
        constraints in force entail the boundary tope at p."""
        ty = self._neutral_type(ctx, neutral, steps)
        if ty is None:
            return None
        tyw = self._whnf(ctx, ty, steps)
        if not isinstance(tyw, ExtType):
            return None
        bt_at_p = subst_tope_point(tyw.boundary_tope, 0, p)
        if T.tope_entails(ctx.cubes, list(ctx.topes), bt_at_p):
            return subst_cube(tyw.boundary, 0, p)
        return None

    def _neutral_type(self, ctx: Context, t: Term, steps: list[int]) -> Term | None:
        """Type of a weak-head-stuck term, or None when unknowable."""
        match t:
            case Var(i):
                return ctx.term_type(i) if i < len(ctx.terms) else None
            case Constant(name):
                decl = self.env.decls.get(name)
                return decl.type if decl is not None else None
            case App(f, a):
                fty = self._neutral_type(ctx, f, steps)
                if fty is None:
                    return None
                ftyw = self._whnf(ctx, fty, steps)
                if isinstance(ftyw, Pi):
                    return substitute(ftyw.codomain, 0, a)
                return None
            case ExtApp(f, p):
                fty = self._neutral_type(ctx, f, steps)
                if fty is None:
                    return None
                ftyw = self._whnf(ctx, fty, steps)
                if isinstance(ftyw, ExtType):
                    return subst_cube(ftyw.codomain, 0, p)
                return None
            case Fst(pr):
                pty = self._neutral_type(ctx, pr, steps)
                if pty is None:
                    return None
                ptyw = self._whnf(ctx, pty, steps)
                return ptyw.first if isinstance(ptyw, Sigma) else None
            case Snd(pr):
                pty = self._neutral_type(ctx, pr, steps)
                if pty is None:
                    return None
                ptyw = self._whnf(ctx, pty, steps)
                if isinstance(ptyw, Sigma):
                    return substitute(ptyw.second, 0, Fst(pr))
                return None
            case IndPath(m, _, tgt):
                tty = self._neutral_type(ctx, tgt, steps)
                if tty is None:
                    return None
                ttyw = self._whnf(ctx, tty, steps)
                if isinstance(ttyw, Id):
                    return _inst_motive(m, ttyw.lhs, ttyw.rhs, tgt)
                return None
            case Annot(_, ty):
                return ty
        return None

    # ------------------------------------------------------------------
    # definitional equality

    def def_equal(self, ctx: Context, t: Term, u: Term, ty: Term | None = None) -> bool:
        try:
            return self._equal(ctx, t, u, ty)
        except UnfoldDepthExceeded:
            return False

    def _split_or_hypothesis(self, ctx: Context) -> list[Context] | None:
        for i, h in enumerate(ctx.topes):
            if isinstance(h, TopeOr):
                rest = ctx.topes[:i] + ctx.topes[i + 1 :]
                return [
                    Context(ctx.cubes, rest + (h.lhs,), ctx.terms),
                    Context(ctx.cubes, rest + (h.rhs,), ctx.terms),
                ]
        return None

    def _equal(self, ctx: Context, t: Term, u: Term, ty: Term | None) -> bool:
        if not T.tope_consistent(ctx.cubes, list(ctx.topes)):
            return True
        branches = self._split_or_hypothesis(ctx)
        if branches is not None:
            return all(self._equal(c, t, u, ty) for c in branches)

        steps = [0]
        if ty is not None:
            tyw = self._whnf(ctx, ty, steps)
            match tyw:
                case Pi(dom, cod):
                    ctx2 = ctx.extend_term(dom)
                    return self._equal(
                        ctx2, App(weaken(t, 1), Var(0)), App(weaken(u, 1), Var(0)), cod
                    )
                case Sigma(a, b):
                    if not self._equal(ctx, Fst(t), Fst(u), a):
                        return False
                    return self._equal(ctx, Snd(t), Snd(u), substitute(b, 0, Fst(t)))
                case ExtType(sh, cod, _, _):
                    ctx2 = ctx.extend_cube(sh.cube).extend_tope(sh.constraint)
                    return self._equal(
                        ctx2,
                        ExtApp(weaken_cube(t, 1, 0), CubeVar(0)),
                        ExtApp(weaken_cube(u, 1, 0), CubeVar(0)),
                        cod,
                    )
        return self._equal_whnf(ctx, t, u, ty)

    def _split_branches(self, ctx: Context, brs, t: Term, u: Term, ty: Term | None) -> bool:
        # branch topes cover the zone by typing, so casing on them is sound
        return all(self._equal(ctx.extend_tope(tp), t, u, ty) for tp, _ in brs)

    def _equal_whnf(self, ctx: Context, t: Term, u: Term, ty: Term | None) -> bool:
        steps = [0]
        tw = self._whnf(ctx, t, steps)
        uw = self._whnf(ctx, u, steps)
        if tw == uw:
            return True
        if isinstance(tw, Split) and tw.branches:
            return self._split_branches(ctx, tw.branches, tw, uw, ty)
        if isinstance(uw, Split) and uw.branches:
            return self._split_branches(ctx, uw.branches, tw, uw, ty)

        match (tw, uw):
            case (Universe(l1), Universe(l2)):
                return l1 == l2
            case (Pi(a1, b1), Pi(a2, b2)):
                return self._equal(ctx, a1, a2, None) and self._equal(
                    ctx.extend_term(a1), b1, b2, None
                )
            case (Sigma(a1, b1), Sigma(a2, b2)):
                return self._equal(ctx, a1, a2, None) and self._equal(
                    ctx.extend_term(a1), b1, b2, None
                )
            case (Id(t1, l1, r1), Id(t2, l2, r2)):
                if t1 is not None and t2 is not None:
                    if not self._equal(ctx, t1, t2, None):
                        return False
                at = t1 if t1 is not None else t2
                return self._equal(ctx, l1, l2, at) and self._equal(ctx, r1, r2, at)
            case (Refl(a1), Refl(a2)):
                return self._equal(ctx, a1, a2, None)
            case (ExtType(sh1, c1, bt1, bd1), ExtType(sh2, c2, bt2, bd2)):
                if sh1.cube != sh2.cube:
                    return False
                cubes = list(ctx.cubes) + [sh1.cube]
                if not T.tope_iff(cubes, sh1.constraint, sh2.constraint):
                    return False
                ctx2 = ctx.extend_cube(sh1.cube)
                if not self._equal(ctx2.extend_tope(sh1.constraint), c1, c2, None):
                    return False
                if not T.tope_iff(cubes, bt1, bt2):
                    return False
                ctxb = ctx2.extend_tope(bt1)
                return self._equal(ctxb, bd1, bd2, c1)
            case (Lambda(b1), Lambda(b2)):
                return self._equal(ctx.extend_term(_OPAQUE), b1, b2, None)
            case (Lambda(b1), _):
                ctx2 = ctx.extend_term(_OPAQUE)
                return self._equal(ctx2, b1, App(weaken(uw, 1), Var(0)), None)
            case (_, Lambda(b2)):
                ctx2 = ctx.extend_term(_OPAQUE)
                return self._equal(ctx2, App(weaken(tw, 1), Var(0)), b2, None)
            case (Pair(a1, b1), Pair(a2, b2)):
                return self._equal(ctx, a1, a2, None) and self._equal(ctx, b1, b2, None)
            case (Pair(a1, b1), _):
                return self._equal(ctx, a1, Fst(uw), None) and self._equal(
                    ctx, b1, Snd(uw), None
                )
            case (_, Pair(a2, b2)):
                return self._equal(ctx, Fst(tw), a2, None) and self._equal(
                    ctx, Snd(tw), b2, None
                )
            case (ExtLambda(b1), ExtLambda(b2)):
                return self._equal(ctx.extend_cube(INTERVAL), b1, b2, None)
            case (ExtLambda(b1), _):
                ctx2 = ctx.extend_cube(INTERVAL)
                return self._equal(
                    ctx2, b1, ExtApp(weaken_cube(uw, 1, 0), CubeVar(0)), None
                )
            case (_, ExtLambda(b2)):
                ctx2 = ctx.extend_cube(INTERVAL)
                return self._equal(
                    ctx2, ExtApp(weaken_cube(tw, 1, 0), CubeVar(0)), b2, None
                )
            case _:
                return self._equal_neutral(ctx, tw, uw) is not None

    def _equal_neutral(self, ctx: Context, t: Term, u: Term) -> Term | None:
        """Spine-directed comparison of stuck terms; returns their common
        type when equal (best effort), the opaque marker when untypeable."""
        steps = [0]
        match (t, u):
            case (Var(i), Var(j)):
                if i != j:
                    return None
                return ctx.term_type(i) if i < len(ctx.terms) else _OPAQUE
            case (Constant(n), Constant(m)):
                if n != m:
                    return None
                decl = self.env.decls.get(n)
                return decl.type if decl is not None else _OPAQUE
            case (App(f1, a1), App(f2, a2)):
                fty = self._equal_neutral(ctx, f1, f2)
                if fty is None:
                    return None
                ftyw = self._whnf(ctx, fty, steps)
                if isinstance(ftyw, Pi):
                    if not self._equal(ctx, a1, a2, ftyw.domain):
                        return None
                    return substitute(ftyw.codomain, 0, a1)
                if not self._equal(ctx, a1, a2, None):
                    return None
                return _OPAQUE
            case (ExtApp(f1, p1), ExtApp(f2, p2)):
                fty = self._equal_neutral(ctx, f1, f2)
                if fty is None:
                    return None
                if not T.tope_entails(ctx.cubes, list(ctx.topes), TopeEq(p1, p2)):
                    return None
                ftyw = self._whnf(ctx, fty, steps)
                if isinstance(ftyw, ExtType):
                    return subst_cube(ftyw.codomain, 0, p1)
                return _OPAQUE
            case (Fst(p1), Fst(p2)):
                pty = self._equal_neutral(ctx, p1, p2)
                if pty is None:
                    return None
                ptyw = self._whnf(ctx, pty, steps)
                return ptyw.first if isinstance(ptyw, Sigma) else _OPAQUE
            case (Snd(p1), Snd(p2)):
                pty = self._equal_neutral(ctx, p1, p2)
                if pty is None:
                    return None
                ptyw = self._whnf(ctx, pty, steps)
                if isinstance(ptyw, Sigma):
                    return substitute(ptyw.second, 0, Fst(p1))
                return _OPAQUE
            case (IndPath(m1, d1, t1), IndPath(m2, d2, t2)):
                tty = self._equal_neutral(ctx, t1, t2)
                if tty is None:
                    return None
                ctx3 = ctx.extend_term(_OPAQUE).extend_term(_OPAQUE).extend_term(_OPAQUE)
                if not self._equal(ctx3, m1, m2, None):
                    return None
                if not self._equal(ctx.extend_term(_OPAQUE), d1, d2, None):
                    return None
                ttyw = self._whnf(ctx, tty, steps)
                if isinstance(ttyw, Id):
                    return _inst_motive(m1, ttyw.lhs, ttyw.rhs, t1)
                return _OPAQUE
            case (Refl(a1), Refl(a2)):
                return _OPAQUE if self._equal(ctx, a1, a2, None) else None
        return None

    # ------------------------------------------------------------------
    # inference and checking

    def infer(self, ctx: Context, t: Term) -> Term:
        match t:
            case Var(i):
                if i >= len(ctx.terms):
                    raise _fail("E-SCOPE", f"term index {i} out of scope")
                return ctx.term_type(i)
            case Constant(name):
                decl = self.env.decls.get(name)
                if decl is None:
                    raise _fail("E-UNBOUND-NAME", f"unknown constant '{name}'")
                return decl.type
            case Universe(0):
                return Universe(1)
            case Universe(_):
                raise _fail("E-CANNOT-INFER", "U₁ has no type in this theory")
            case Pi(a, b) | Sigma(a, b):
                la = self.type_level(ctx, a)
                lb = self.type_level(ctx.extend_term(a), b)
                return Universe(max(la, lb))
            case Lambda(_):
                raise _fail("E-CANNOT-INFER", "unannotated λ only checks against a Π type")
            case App(f, a):
                try:
                    fty = self.whnf(ctx, self.infer(ctx, f))
                except CheckFailure as e:
                    return self._infer_after_reduction(ctx, t, e)
                if not isinstance(fty, Pi):
                    raise _fail(
                        "E-NOT-A-FUNCTION",
                        "application head is not a function",
                        actual=print_term(fty, ctx),
                    )
                self.check(ctx, a, fty.domain)
                return substitute(fty.codomain, 0, a)
            case Pair(_, _):
                raise _fail("E-CANNOT-INFER", "a pair only checks against a Σ type")
            case Fst(p):
                try:
                    pty = self.whnf(ctx, self.infer(ctx, p))
                except CheckFailure as e:
                    return self._infer_after_reduction(ctx, t, e)
                if not isinstance(pty, Sigma):
                    raise _fail(
                        "E-NOT-A-PAIR",
                        "projection target is not a pair",
                        actual=print_term(pty, ctx),
                    )
                return pty.first
            case Snd(p):
                try:
                    pty = self.whnf(ctx, self.infer(ctx, p))
                except CheckFailure as e:
                    return self._infer_after_reduction(ctx, t, e)
                if not isinstance(pty, Sigma):
                    raise _fail(
                        "E-NOT-A-PAIR",
                        "projection target is not a pair",
                        actual=print_term(pty, ctx),
                    )
                return substitute(pty.second, 0, Fst(p))
            case Id(ty, l, r):
                if ty is None:
                    ty = self.infer(ctx, l)
                    level = self.type_level(ctx, ty)
                    self.check(ctx, r, ty)
                else:
                    level = self.type_level(ctx, ty)
                    self.check(ctx, l, ty)
                    self.check(ctx, r, ty)
                return Universe(level)
            case Refl(_):
                raise _fail("E-CANNOT-INFER", "refl only checks against an Id type")
            case IndPath(m, d, tgt):
                tty = self.whnf(ctx, self.infer(ctx, tgt))
                if not isinstance(tty, Id):
                    raise _fail(
                        "E-TYPE-MISMATCH",
                        "ind-path target is not an identity proof",
                        actual=print_term(tty, ctx),
                    )
                a_ty = tty.type if tty.type is not None else self.infer(ctx, tty.lhs)
                ctx_m = (
                    ctx.extend_term(a_ty)
                    .extend_term(weaken(a_ty, 1))
                    .extend_term(Id(weaken(a_ty, 2), Var(1), Var(0)))
                )
                self.type_level(ctx_m, m)
                ctx_d = ctx.extend_term(a_ty)
                m_lifted = weaken(m, 1, 3)  # move under the base-case binder
                base_goal = _inst_motive(m_lifted, Var(0), Var(0), Refl(Var(0)))
                self.check(ctx_d, d, base_goal)
                return _inst_motive(m, tty.lhs, tty.rhs, tgt)
            case ExtType(sh, cod, bt, bd):
                cubes = list(ctx.cubes) + [sh.cube]
                if not T.tope_entails(cubes, [bt], sh.constraint):
                    raise _fail(
                        "E-BOUNDARY",
                        "boundary tope does not carve a sub-shape of the domain shape",
                    )
                ctx2 = ctx.extend_cube(sh.cube)
                level = self.type_level(ctx2.extend_tope(sh.constraint), cod)
                self.check(ctx2.extend_tope(bt), bd, cod)
                return Universe(level)
            case ExtLambda(_):
                raise _fail(
                    "E-CANNOT-INFER", "a shape λ only checks against an extension type"
                )
            case ExtApp(f, p):
                try:
                    fty = self.whnf(ctx, self.infer(ctx, f))
                except CheckFailure as e:
                    return self._infer_after_reduction(ctx, t, e)
                if not isinstance(fty, ExtType):
                    raise _fail(
                        "E-NOT-A-FUNCTION",
                        "extension application head has no extension type",
                        actual=print_term(fty, ctx),
                    )
                sort = T.sort_of_point(ctx.cubes, p)
                if sort != fty.shape.cube:
                    raise _fail(
                        "E-POINT-SORT",
                        "point sort does not match the shape's cube",
                        expected=str(fty.shape.cube),
                        actual=str(sort),
                    )
                constraint_at_p = subst_tope_point(fty.shape.constraint, 0, p)
                if not T.tope_entails(ctx.cubes, list(ctx.topes), constraint_at_p):
                    cm = T.countermodel(ctx.cubes, list(ctx.topes), constraint_at_p)
                    raise _fail(
                        "E-TOPE-FALSE",
                        "point is not constrained into the shape",
                        expected=print_tope(_simplify_tope(constraint_at_p), len(ctx.cubes)),
                        countermodel=_countermodel_map(cm) if cm else None,
                    )
                return subst_cube(fty.codomain, 0, p)
            case Split(_):
                raise _fail("E-CANNOT-INFER", "a split only checks against a type")
            case Annot(a, ty):
                self.type_level_or_top(ctx, ty)
                self.check(ctx, a, ty)
                return ty
        raise _fail("E-CANNOT-INFER", f"cannot infer a type for {type(t).__name__}")

    def _infer_after_reduction(self, ctx: Context, t: Term, e: CheckFailure) -> Term:
        # substitution inside unfolded definitions leaves redexes whose heads
        # are literal λs or pairs; reduce and retry before giving up
        if e.diag.code not in ("E-CANNOT-INFER",):
            raise e
        red = self.whnf(ctx, t)
        if red == t:
            raise e
        return self.infer(ctx, red)

    def type_level(self, ctx: Context, t: Term) -> int:
        """Universe level of a term used as a type; U itself has level 1."""
        tw = self.whnf(ctx, t)
        if isinstance(tw, Universe):
            if tw.level == 0:
                return 1
            raise _fail("E-NOT-A-TYPE", "U₁ cannot appear inside a type at this level")
        ty = self.whnf(ctx, self.infer(ctx, tw))
        if isinstance(ty, Universe):
            return ty.level
        raise _fail(
            "E-NOT-A-TYPE", "expected a type", actual=print_term(ty, ctx)
        )

    def type_level_or_top(self, ctx: Context, t: Term) -> None:
        """Well-formedness for declaration types.

        Beyond the small types this accepts the sorts themselves and towers
        of Π/extension types landing in a sort, so constants may classify
        families of large types even though such towers live in no universe.
        """
        tw = self.whnf(ctx, t)
        match tw:
            case Universe(_):
                return
            case Pi(a, b):
                self.type_level(ctx, a)
                self.type_level_or_top(ctx.extend_term(a), b)
                return
            case ExtType(sh, cod, bt, bd):
                cubes = list(ctx.cubes) + [sh.cube]
                if not T.tope_entails(cubes, [bt], sh.constraint):
                    raise _fail(
                        "E-BOUNDARY",
                        "boundary tope does not carve a sub-shape of the domain shape",
                    )
                ctx2 = ctx.extend_cube(sh.cube)
                self.type_level_or_top(ctx2.extend_tope(sh.constraint), cod)
                self.check(ctx2.extend_tope(bt), bd, cod)
                return
        self.type_level(ctx, tw)

    def check(self, ctx: Context, t: Term, ty: Term) -> None:
        # glue: under unsatisfiable constraints everything checks
        if ctx.topes and not T.tope_consistent(ctx.cubes, list(ctx.topes)):
            return
        tyw = self.whnf(ctx, ty)
        match t:
            case Lambda(body):
                if not isinstance(tyw, Pi):
                    raise _fail(
                        "E-TYPE-MISMATCH",
                        "λ against a non-Π type",
                        expected=print_term(tyw, ctx),
                    )
                self.check(ctx.extend_term(tyw.domain), body, tyw.codomain)
                return
            case ExtLambda(body):
                if not isinstance(tyw, ExtType):
                    raise _fail(
                        "E-TYPE-MISMATCH",
                        "shape λ against a non-extension type",
                        expected=print_term(tyw, ctx),
                    )
                sh = tyw.shape
                ctx2 = ctx.extend_cube(sh.cube)
                self.check(ctx2.extend_tope(sh.constraint), body, tyw.codomain)
                ctxb = ctx2.extend_tope(tyw.boundary_tope)
                if not self.def_equal(ctxb, body, tyw.boundary, tyw.codomain):
                    cm = None
                    model = T.countermodel(ctxb.cubes, list(ctxb.topes), BOT)
                    if model is not None:
                        cm = _countermodel_map(model)
                    raise _fail(
                        "E-BOUNDARY",
                        "body disagrees with the required boundary value",
                        expected=print_term(tyw.boundary, ctxb),
                        actual=print_term(body, ctxb),
                        countermodel=cm,
                    )
                return
            case Pair(a, b):
                if not isinstance(tyw, Sigma):
                    raise _fail(
                        "E-TYPE-MISMATCH",
                        "pair against a non-Σ type",
                        expected=print_term(tyw, ctx),
                    )
                self.check(ctx, a, tyw.first)
                self.check(ctx, b, substitute(tyw.second, 0, a))
                return
            case Refl(a):
                if not isinstance(tyw, Id):
                    raise _fail(
                        "E-TYPE-MISMATCH",
                        "refl against a non-Id type",
                        expected=print_term(tyw, ctx),
                    )
                at = tyw.type if tyw.type is not None else self.infer(ctx, tyw.lhs)
                self.check(ctx, a, at)
                if not self.def_equal(ctx, a, tyw.lhs, at) or not self.def_equal(
                    ctx, a, tyw.rhs, at
                ):
                    raise _fail(
                        "E-TYPE-MISMATCH",
                        "refl endpoints are not definitionally equal",
                        expected=print_term(tyw, ctx),
                        actual=print_term(Refl(a), ctx),
                    )
                return
            case Split(brs):
                cover: Tope = BOT
                for tp, _ in brs:
                    cover = TopeOr(cover, tp)
                if not T.tope_entails(ctx.cubes, list(ctx.topes), cover):
                    cm = T.countermodel(ctx.cubes, list(ctx.topes), cover)
                    raise _fail(
                        "E-SPLIT",
                        "split branches do not cover the constraints in force",
                        countermodel=_countermodel_map(cm) if cm else None,
                    )
                for tp, b in brs:
                    self.check(ctx.extend_tope(tp), b, ty)
                for i in range(len(brs)):
                    for j in range(i + 1, len(brs)):
                        ctx_ij = ctx.extend_tope(brs[i][0]).extend_tope(brs[j][0])
                        if not self.def_equal(ctx_ij, brs[i][1], brs[j][1], ty):
                            raise _fail(
                                "E-SPLIT",
                                "split branches disagree on an overlap",
                                expected=print_term(brs[i][1], ctx_ij),
                                actual=print_term(brs[j][1], ctx_ij),
                            )
                return
            case _:
                inferred = self.infer(ctx, t)
                if not self.def_equal(ctx, inferred, ty, None):
                    raise _fail(
                        "E-TYPE-MISMATCH",
                        "inferred type does not match the expected type",
                        expected=print_term(ty, ctx),
                        actual=print_term(inferred, ctx),
                    )
                return


_OPAQUE = Constant("%opaque")


def _inst_motive(m: Term, a: Term, b: Term, q: Term) -> Term:
    """m[x := a, y := b, p := q] for a motive binding x, y, p."""
    step1 = substitute(m, 2, weaken(a, 2))
    step2 = substitute(step1, 1, weaken(b, 1))
    return substitute(step2, 0, q)


# ---------------------------------------------------------------------------
# module-level entry points

def whnf(env: CheckEnv, ctx: Context, t: Term) -> Term:
    return Checker(env).whnf(ctx, t)


def def_equal(env: CheckEnv, ctx: Context, t: Term, u: Term, ty: Term | None = None) -> bool:
    return Checker(env).def_equal(ctx, t, u, ty)


def infer(env: CheckEnv, ctx: Context, t: Term) -> Term:
    return Checker(env).infer(ctx, t)


def check(env: CheckEnv, ctx: Context, t: Term, ty: Term) -> Diagnostic | None:
    try:
        Checker(env).check(ctx, t, ty)
        return None
    except CheckFailure as e:
        return e.diag
    except UnfoldDepthExceeded:
        return Diagnostic("error", "E-UNFOLD-DEPTH", "unfold depth limit exceeded")


def _constants_of(t: Term | None, acc: set[str]) -> set[str]:
    if t is None:
        return acc
    match t:
        case Constant(name):
            acc.add(name)
        case Pi(a, b) | Sigma(a, b) | App(a, b) | Pair(a, b):
            _constants_of(a, acc)
            _constants_of(b, acc)
        case Lambda(b) | ExtLambda(b) | Fst(b) | Snd(b) | Refl(b):
            _constants_of(b, acc)
        case Id(ty, l, r):
            _constants_of(ty, acc)
            _constants_of(l, acc)
            _constants_of(r, acc)
        case IndPath(m, d, p):
            _constants_of(m, acc)
            _constants_of(d, acc)
            _constants_of(p, acc)
        case ExtType(_, cod, _, bd):
            _constants_of(cod, acc)
            _constants_of(bd, acc)
        case ExtApp(f, _):
            _constants_of(f, acc)
        case Split(brs):
            for _, b in brs:
                _constants_of(b, acc)
        case Annot(a, ty):
            _constants_of(a, acc)
            _constants_of(ty, acc)
    return acc


def check_declaration(env: CheckEnv, decl: Declaration) -> list[Diagnostic]:
    """Check one resolved declaration; on success append it to the env."""
    checker = Checker(env)
    try:
        checker.type_level_or_top(Context(), decl.type)
        if decl.body is not None:
            checker.check(Context(), decl.body, decl.type)
    except CheckFailure as e:
        d = e.diag
        d.decl = decl.name
        if d.span is None:
            d.span = decl.span
        return [d]
    except UnfoldDepthExceeded:
        return [
            Diagnostic(
                "error",
                "E-UNFOLD-DEPTH",
                "unfold depth limit exceeded",
                span=decl.span,
                decl=decl.name,
            )
        ]
    refs = _constants_of(decl.type, set())
    _constants_of(decl.body, refs)
    usage: set[str] = set()
    for r in refs:
        usage |= env.axiom_usage.get(r, frozenset())
        if r in env.axioms:
            usage.add(r)
    with env.lock:
        env.decls[decl.name] = decl
        if decl.body is None:
            env.axioms.add(decl.name)
        env.axiom_usage[decl.name] = frozenset(usage)
    return []


def check_module(
    env: CheckEnv, decls: list
) -> tuple[CheckEnv, list[Diagnostic], dict[str, frozenset[str]]]:
    """Sequentially resolve and check surface declarations.

    A failed declaration is recorded so later references to it produce one
    E-DEPENDS-ON-FAILED diagnostic rather than an error cascade.
    """
    from .resolve import FAILED, ResolveError, resolve

    diags: list[Diagnostic] = []
    name_table: dict[str, object] = dict(env.decls)
    for sdecl in decls:
        try:
            declaration = resolve(sdecl, name_table)
        except ResolveError as e:
            diags.append(
                Diagnostic(
                    "error", e.code, e.message, span=e.span or sdecl.span, decl=sdecl.name
                )
            )
            name_table[sdecl.name] = FAILED
            continue
        errs = check_declaration(env, declaration)
        if errs:
            diags.extend(errs)
            name_table[sdecl.name] = FAILED
        else:
            name_table[sdecl.name] = env.decls[sdecl.name]
    return env, diags, dict(env.axiom_usage)
