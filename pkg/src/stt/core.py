"""Nameless core syntax: interval points, topes, shapes, terms, contexts.

Terms use de Bruijn indices, with two independent namespaces: term variables
index into the term zone of the context and cube variables index into the
cube zone.  Index 0 is always the most recently bound variable of its layer.
Extending the cube zone re-scopes the tope and term zones, so every entry
stored in a context is valid in that whole context.
"""

from __future__ import annotations

from dataclasses import dataclass


# ---------------------------------------------------------------------------
# Cubes and points

@dataclass(frozen=True)
class CubeUnit:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class CubeInterval:
    def __str__(self) -> str:
        return "2"


@dataclass(frozen=True)
class CubeProd:
    fst: "Cube"
    snd: "Cube"

    def __str__(self) -> str:
        return f"{self.fst} * {self.snd}"


Cube = CubeUnit | CubeInterval | CubeProd

UNIT = CubeUnit()
INTERVAL = CubeInterval()


@dataclass(frozen=True)
class CubeVar:
    index: int


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Star:
    """The unique point of the terminal cube."""


@dataclass(frozen=True)
class PointPair:
    fst: "CubePoint"
    snd: "CubePoint"


@dataclass(frozen=True)
class PointFst:
    point: "CubePoint"


@dataclass(frozen=True)
class PointSnd:
    point: "CubePoint"


CubePoint = CubeVar | Zero | One | Star | PointPair | PointFst | PointSnd

ZERO = Zero()
ONE = One()
STAR = Star()


# ---------------------------------------------------------------------------
# Topes

@dataclass(frozen=True)
class TopeTop:
    pass


@dataclass(frozen=True)
class TopeBottom:
    pass


@dataclass(frozen=True)
class TopeLeq:
    lhs: CubePoint
    rhs: CubePoint


@dataclass(frozen=True)
class TopeEq:
    lhs: CubePoint
    rhs: CubePoint


@dataclass(frozen=True)
class TopeAnd:
    lhs: "Tope"
    rhs: "Tope"


@dataclass(frozen=True)
class TopeOr:
    lhs: "Tope"
    rhs: "Tope"


Tope = TopeTop | TopeBottom | TopeLeq | TopeEq | TopeAnd | TopeOr

TOP = TopeTop()
BOT = TopeBottom()


@dataclass(frozen=True)
class Shape:
    """A cube restricted by a tope; the constraint sees the bound coordinate
    as cube index 0 (outer cube variables keep their shifted indices)."""

    cube: Cube
    constraint: Tope


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Universe:
    level: int  # 0 or 1


@dataclass(frozen=True)
class Pi:
    domain: "Term"
    codomain: "Term"  # binds one term variable


@dataclass(frozen=True)
class Lambda:
    body: "Term"  # binds one term variable


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Sigma:
    first: "Term"
    second: "Term"  # binds one term variable


@dataclass(frozen=True)
class Pair:
    fst: "Term"
    snd: "Term"


@dataclass(frozen=True)
class Fst:
    pair: "Term"


@dataclass(frozen=True)
class Snd:
    pair: "Term"


@dataclass(frozen=True)
class Id:
    type: "Term | None"  # None: recovered from the left endpoint when checked
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class Refl:
    term: "Term"


@dataclass(frozen=True)
class IndPath:
    """Identity eliminator.  ``motive`` binds three term variables (both
    endpoints and the path), ``base`` binds one (the diagonal point)."""

    motive: "Term"
    base: "Term"
    target: "Term"


@dataclass(frozen=True)
class ExtType:
    """Functions out of a shape with a judgmentally fixed boundary.

    ``codomain`` and ``boundary`` bind one cube variable; ``boundary_tope``
    is scoped the same way and must carve a sub-shape of ``shape``.
    """

    shape: Shape
    codomain: "Term"
    boundary_tope: Tope
    boundary: "Term"


@dataclass(frozen=True)
class ExtLambda:
    body: "Term"  # binds one cube variable


@dataclass(frozen=True)
class ExtApp:
    fn: "Term"
    point: CubePoint


@dataclass(frozen=True)
class Split:
    """Case tree over topes: well typed when the branch topes cover the
    current constraints and the branches agree on overlaps.  An empty split
    is the canonical term under an unsatisfiable tope zone."""

    branches: tuple[tuple[Tope, "Term"], ...]


@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class Annot:
    term: "Term"
    type: "Term"


Term = (
    Var
    | Universe
    | Pi
    | Lambda
    | App
    | Sigma
    | Pair
    | Fst
    | Snd
    | Id
    | Refl
    | IndPath
    | ExtType
    | ExtLambda
    | ExtApp
    | Split
    | Constant
    | Annot
)

U0 = Universe(0)
U1 = Universe(1)


# ---------------------------------------------------------------------------
# Context and declarations

@dataclass(frozen=True)
class Context:
    """Three-zone typing context: cube sorts, tope constraints, term types.

    Tuples grow on the right; de Bruijn index i of a layer refers to entry
    ``zone[len(zone) - 1 - i]``.
    """

    cubes: tuple[Cube, ...] = ()
    topes: tuple[Tope, ...] = ()
    terms: tuple[tuple["Term", "Term | None"], ...] = ()

    def extend_cube(self, cube: Cube) -> "Context":
        # existing tope and term entries gain a fresh cube variable at index 0
        topes = tuple(weaken_tope_cube(t, 1, 0) for t in self.topes)
        terms = tuple(
            (weaken_cube(ty, 1, 0), weaken_cube(d, 1, 0) if d is not None else None)
            for ty, d in self.terms
        )
        return Context(self.cubes + (cube,), topes, terms)

    def extend_tope(self, tope: Tope) -> "Context":
        return Context(self.cubes, self.topes + (tope,), self.terms)

    def extend_term(self, ty: "Term", defn: "Term | None" = None) -> "Context":
        return Context(self.cubes, self.topes, self.terms + ((ty, defn),))

    def cube_sort(self, index: int) -> Cube:
        return self.cubes[len(self.cubes) - 1 - index]

    def term_type(self, index: int) -> "Term":
        ty = self.terms[len(self.terms) - 1 - index][0]
        return weaken(ty, index + 1, 0)

    def term_def(self, index: int) -> "Term | None":
        d = self.terms[len(self.terms) - 1 - index][1]
        return weaken(d, index + 1, 0) if d is not None else None


@dataclass(frozen=True)
class TelescopeEntry:
    layer: str  # "term" | "cube" | "tope"
    name: str
    # the resolved annotation: a Term for term params, a Cube for cube
    # params, a Tope for tope params
    annot: object


@dataclass
class Declaration:
    name: str
    telescope: tuple[TelescopeEntry, ...]
    type: "Term"  # closed: telescope already folded in
    body: "Term | None"  # None marks a postulate
    span: object = None

    @property
    def is_postulate(self) -> bool:
        return self.body is None


# ---------------------------------------------------------------------------
# Weakening and substitution, term layer

def weaken(t: Term, by: int, frm: int = 0) -> Term:
    """Shift term indices >= ``frm`` up by ``by``."""
    if by == 0:
        return t
    match t:
        case Var(i):
            return Var(i + by) if i >= frm else t
        case Universe() | Constant():
            return t
        case Pi(a, b):
            return Pi(weaken(a, by, frm), weaken(b, by, frm + 1))
        case Lambda(b):
            return Lambda(weaken(b, by, frm + 1))
        case App(f, a):
            return App(weaken(f, by, frm), weaken(a, by, frm))
        case Sigma(a, b):
            return Sigma(weaken(a, by, frm), weaken(b, by, frm + 1))
        case Pair(a, b):
            return Pair(weaken(a, by, frm), weaken(b, by, frm))
        case Fst(p):
            return Fst(weaken(p, by, frm))
        case Snd(p):
            return Snd(weaken(p, by, frm))
        case Id(ty, l, r):
            return Id(
                weaken(ty, by, frm) if ty is not None else None,
                weaken(l, by, frm),
                weaken(r, by, frm),
            )
        case Refl(a):
            return Refl(weaken(a, by, frm))
        case IndPath(m, d, p):
            return IndPath(weaken(m, by, frm + 3), weaken(d, by, frm + 1), weaken(p, by, frm))
        case ExtType(sh, cod, bt, bd):
            return ExtType(sh, weaken(cod, by, frm), bt, weaken(bd, by, frm))
        case ExtLambda(b):
            return ExtLambda(weaken(b, by, frm))
        case ExtApp(f, p):
            return ExtApp(weaken(f, by, frm), p)
        case Split(brs):
            return Split(tuple((tp, weaken(b, by, frm)) for tp, b in brs))
        case Annot(a, ty):
            return Annot(weaken(a, by, frm), weaken(ty, by, frm))
    raise AssertionError(f"weaken: {t!r}")


def substitute(t: Term, level: int, value: Term) -> Term:
    """Capture-avoiding substitution of ``value`` for term index ``level``;
    indices above the level are decremented."""
    match t:
        case Var(i):
            if i == level:
                return value
            return Var(i - 1) if i > level else t
        case Universe() | Constant():
            return t
        case Pi(a, b):
            return Pi(
                substitute(a, level, value),
                substitute(b, level + 1, weaken(value, 1)),
            )
        case Lambda(b):
            return Lambda(substitute(b, level + 1, weaken(value, 1)))
        case App(f, a):
            return App(substitute(f, level, value), substitute(a, level, value))
        case Sigma(a, b):
            return Sigma(
                substitute(a, level, value),
                substitute(b, level + 1, weaken(value, 1)),
            )
        case Pair(a, b):
            return Pair(substitute(a, level, value), substitute(b, level, value))
        case Fst(p):
            return Fst(substitute(p, level, value))
        case Snd(p):
            return Snd(substitute(p, level, value))
        case Id(ty, l, r):
            return Id(
                substitute(ty, level, value) if ty is not None else None,
                substitute(l, level, value),
                substitute(r, level, value),
            )
        case Refl(a):
            return Refl(substitute(a, level, value))
        case IndPath(m, d, p):
            return IndPath(
                substitute(m, level + 3, weaken(value, 3)),
                substitute(d, level + 1, weaken(value, 1)),
                substitute(p, level, value),
            )
        case ExtType(sh, cod, bt, bd):
            cv = weaken_cube(value, 1, 0)
            return ExtType(sh, substitute(cod, level, cv), bt, substitute(bd, level, cv))
        case ExtLambda(b):
            return ExtLambda(substitute(b, level, weaken_cube(value, 1, 0)))
        case ExtApp(f, p):
            return ExtApp(substitute(f, level, value), p)
        case Split(brs):
            return Split(tuple((tp, substitute(b, level, value)) for tp, b in brs))
        case Annot(a, ty):
            return Annot(substitute(a, level, value), substitute(ty, level, value))
    raise AssertionError(f"substitute: {t!r}")


# ---------------------------------------------------------------------------
# Weakening and substitution, cube layer

def weaken_point(p: CubePoint, by: int, frm: int) -> CubePoint:
    match p:
        case CubeVar(i):
            return CubeVar(i + by) if i >= frm else p
        case Zero() | One() | Star():
            return p
        case PointPair(a, b):
            return PointPair(weaken_point(a, by, frm), weaken_point(b, by, frm))
        case PointFst(q):
            return PointFst(weaken_point(q, by, frm))
        case PointSnd(q):
            return PointSnd(weaken_point(q, by, frm))
    raise AssertionError(f"weaken_point: {p!r}")


def subst_point(p: CubePoint, level: int, value: CubePoint) -> CubePoint:
    match p:
        case CubeVar(i):
            if i == level:
                return value
            return CubeVar(i - 1) if i > level else p
        case Zero() | One() | Star():
            return p
        case PointPair(a, b):
            return PointPair(subst_point(a, level, value), subst_point(b, level, value))
        case PointFst(q):
            return PointFst(subst_point(q, level, value))
        case PointSnd(q):
            return PointSnd(subst_point(q, level, value))
    raise AssertionError(f"subst_point: {p!r}")


def weaken_tope_cube(t: Tope, by: int, frm: int) -> Tope:
    match t:
        case TopeTop() | TopeBottom():
            return t
        case TopeLeq(l, r):
            return TopeLeq(weaken_point(l, by, frm), weaken_point(r, by, frm))
        case TopeEq(l, r):
            return TopeEq(weaken_point(l, by, frm), weaken_point(r, by, frm))
        case TopeAnd(l, r):
            return TopeAnd(weaken_tope_cube(l, by, frm), weaken_tope_cube(r, by, frm))
        case TopeOr(l, r):
            return TopeOr(weaken_tope_cube(l, by, frm), weaken_tope_cube(r, by, frm))
    raise AssertionError(f"weaken_tope_cube: {t!r}")


def subst_tope_point(t: Tope, level: int, value: CubePoint) -> Tope:
    match t:
        case TopeTop() | TopeBottom():
            return t
        case TopeLeq(l, r):
            return TopeLeq(subst_point(l, level, value), subst_point(r, level, value))
        case TopeEq(l, r):
            return TopeEq(subst_point(l, level, value), subst_point(r, level, value))
        case TopeAnd(l, r):
            return TopeAnd(subst_tope_point(l, level, value), subst_tope_point(r, level, value))
        case TopeOr(l, r):
            return TopeOr(subst_tope_point(l, level, value), subst_tope_point(r, level, value))
    raise AssertionError(f"subst_tope_point: {t!r}")


def weaken_cube(t: Term, by: int, frm: int) -> Term:
    """Shift cube indices >= ``frm`` up by ``by`` throughout a term."""
    if by == 0:
        return t
    match t:
        case Var() | Universe() | Constant():
            return t
        case Pi(a, b):
            return Pi(weaken_cube(a, by, frm), weaken_cube(b, by, frm))
        case Lambda(b):
            return Lambda(weaken_cube(b, by, frm))
        case App(f, a):
            return App(weaken_cube(f, by, frm), weaken_cube(a, by, frm))
        case Sigma(a, b):
            return Sigma(weaken_cube(a, by, frm), weaken_cube(b, by, frm))
        case Pair(a, b):
            return Pair(weaken_cube(a, by, frm), weaken_cube(b, by, frm))
        case Fst(p):
            return Fst(weaken_cube(p, by, frm))
        case Snd(p):
            return Snd(weaken_cube(p, by, frm))
        case Id(ty, l, r):
            return Id(
                weaken_cube(ty, by, frm) if ty is not None else None,
                weaken_cube(l, by, frm),
                weaken_cube(r, by, frm),
            )
        case Refl(a):
            return Refl(weaken_cube(a, by, frm))
        case IndPath(m, d, p):
            return IndPath(
                weaken_cube(m, by, frm), weaken_cube(d, by, frm), weaken_cube(p, by, frm)
            )
        case ExtType(sh, cod, bt, bd):
            return ExtType(
                Shape(sh.cube, weaken_tope_cube(sh.constraint, by, frm + 1)),
                weaken_cube(cod, by, frm + 1),
                weaken_tope_cube(bt, by, frm + 1),
                weaken_cube(bd, by, frm + 1),
            )
        case ExtLambda(b):
            return ExtLambda(weaken_cube(b, by, frm + 1))
        case ExtApp(f, p):
            return ExtApp(weaken_cube(f, by, frm), weaken_point(p, by, frm))
        case Split(brs):
            return Split(
                tuple((weaken_tope_cube(tp, by, frm), weaken_cube(b, by, frm)) for tp, b in brs)
            )
        case Annot(a, ty):
            return Annot(weaken_cube(a, by, frm), weaken_cube(ty, by, frm))
    raise AssertionError(f"weaken_cube: {t!r}")


def subst_cube(t: Term, level: int, value: CubePoint) -> Term:
    """Substitute a point for cube index ``level`` throughout a term."""
    match t:
        case Var() | Universe() | Constant():
            return t
        case Pi(a, b):
            return Pi(subst_cube(a, level, value), subst_cube(b, level, value))
        case Lambda(b):
            return Lambda(subst_cube(b, level, value))
        case App(f, a):
            return App(subst_cube(f, level, value), subst_cube(a, level, value))
        case Sigma(a, b):
            return Sigma(subst_cube(a, level, value), subst_cube(b, level, value))
        case Pair(a, b):
            return Pair(subst_cube(a, level, value), subst_cube(b, level, value))
        case Fst(p):
            return Fst(subst_cube(p, level, value))
        case Snd(p):
            return Snd(subst_cube(p, level, value))
        case Id(ty, l, r):
            return Id(
                subst_cube(ty, level, value) if ty is not None else None,
                subst_cube(l, level, value),
                subst_cube(r, level, value),
            )
        case Refl(a):
            return Refl(subst_cube(a, level, value))
        case IndPath(m, d, p):
            return IndPath(
                subst_cube(m, level, value),
                subst_cube(d, level, value),
                subst_cube(p, level, value),
            )
        case ExtType(sh, cod, bt, bd):
            v = weaken_point(value, 1, 0)
            return ExtType(
                Shape(sh.cube, subst_tope_point(sh.constraint, level + 1, v)),
                subst_cube(cod, level + 1, v),
                subst_tope_point(bt, level + 1, v),
                subst_cube(bd, level + 1, v),
            )
        case ExtLambda(b):
            return ExtLambda(subst_cube(b, level + 1, weaken_point(value, 1, 0)))
        case ExtApp(f, p):
            return ExtApp(subst_cube(f, level, value), subst_point(p, level, value))
        case Split(brs):
            return Split(
                tuple(
                    (subst_tope_point(tp, level, value), subst_cube(b, level, value))
                    for tp, b in brs
                )
            )
        case Annot(a, ty):
            return Annot(subst_cube(a, level, value), subst_cube(ty, level, value))
    raise AssertionError(f"subst_cube: {t!r}")


# ---------------------------------------------------------------------------
# Scope validation

def point_in_scope(p: CubePoint, cube_depth: int) -> bool:
    match p:
        case CubeVar(i):
            return 0 <= i < cube_depth
        case Zero() | One() | Star():
            return True
        case PointPair(a, b):
            return point_in_scope(a, cube_depth) and point_in_scope(b, cube_depth)
        case PointFst(q) | PointSnd(q):
            return point_in_scope(q, cube_depth)
    return False


def tope_in_scope(t: Tope, cube_depth: int) -> bool:
    match t:
        case TopeTop() | TopeBottom():
            return True
        case TopeLeq(l, r) | TopeEq(l, r):
            return point_in_scope(l, cube_depth) and point_in_scope(r, cube_depth)
        case TopeAnd(l, r) | TopeOr(l, r):
            return tope_in_scope(l, cube_depth) and tope_in_scope(r, cube_depth)
    return False


def term_in_scope(t: Term, cube_depth: int, term_depth: int) -> bool:
    """Full index-bounds check; every resolver output must satisfy it."""
    match t:
        case Var(i):
            return 0 <= i < term_depth
        case Universe() | Constant():
            return True
        case Pi(a, b) | Sigma(a, b):
            return term_in_scope(a, cube_depth, term_depth) and term_in_scope(
                b, cube_depth, term_depth + 1
            )
        case Lambda(b):
            return term_in_scope(b, cube_depth, term_depth + 1)
        case App(f, a) | Pair(f, a):
            return term_in_scope(f, cube_depth, term_depth) and term_in_scope(
                a, cube_depth, term_depth
            )
        case Fst(p) | Snd(p) | Refl(p):
            return term_in_scope(p, cube_depth, term_depth)
        case Id(ty, l, r):
            ok = ty is None or term_in_scope(ty, cube_depth, term_depth)
            return (
                ok
                and term_in_scope(l, cube_depth, term_depth)
                and term_in_scope(r, cube_depth, term_depth)
            )
        case IndPath(m, d, p):
            return (
                term_in_scope(m, cube_depth, term_depth + 3)
                and term_in_scope(d, cube_depth, term_depth + 1)
                and term_in_scope(p, cube_depth, term_depth)
            )
        case ExtType(sh, cod, bt, bd):
            return (
                tope_in_scope(sh.constraint, cube_depth + 1)
                and term_in_scope(cod, cube_depth + 1, term_depth)
                and tope_in_scope(bt, cube_depth + 1)
                and term_in_scope(bd, cube_depth + 1, term_depth)
            )
        case ExtLambda(b):
            return term_in_scope(b, cube_depth + 1, term_depth)
        case ExtApp(f, p):
            return term_in_scope(f, cube_depth, term_depth) and point_in_scope(p, cube_depth)
        case Split(brs):
            return all(
                tope_in_scope(tp, cube_depth) and term_in_scope(b, cube_depth, term_depth)
                for tp, b in brs
            )
        case Annot(a, ty):
            return term_in_scope(a, cube_depth, term_depth) and term_in_scope(
                ty, cube_depth, term_depth
            )
    return False


# ---------------------------------------------------------------------------
# Canonical shapes

def _v0() -> CubePoint:
    return CubeVar(0)


SQUARE = CubeProd(INTERVAL, INTERVAL)

# Constraints are over the single bound coordinate of the shape's cube.
SHAPE_ARROW = Shape(INTERVAL, TOP)  # the walking arrow
SHAPE_TRIANGLE = Shape(SQUARE, TopeLeq(PointSnd(_v0()), PointFst(_v0())))
SHAPE_INNER_HORN = Shape(
    SQUARE, TopeOr(TopeEq(PointSnd(_v0()), ZERO), TopeEq(PointFst(_v0()), ONE))
)
SHAPE_ENDPOINTS = Shape(INTERVAL, TopeOr(TopeEq(_v0(), ZERO), TopeEq(_v0(), ONE)))
SHAPE_SQUARE = Shape(SQUARE, TOP)

CANONICAL_SHAPES: dict[str, Shape] = {
    "Delta1": SHAPE_ARROW,
    "Delta2": SHAPE_TRIANGLE,
    "Lambda21": SHAPE_INNER_HORN,
    "dDelta1": SHAPE_ENDPOINTS,
    "Delta1xDelta1": SHAPE_SQUARE,
}
