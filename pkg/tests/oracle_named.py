"""Independent named-variable calculus used as the substitution oracle.

Terms here carry explicit names; substitution is capture-avoiding via fresh
renaming.  Conversions to and from the nameless core let the tests compare
the production de Bruijn operations against this implementation without
sharing any index arithmetic with them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from stt import core as C


@dataclass(frozen=True)
class NVar:
    name: str


@dataclass(frozen=True)
class NConst:
    name: str


@dataclass(frozen=True)
class NUniv:
    level: int


@dataclass(frozen=True)
class NLam:
    name: str
    body: object


@dataclass(frozen=True)
class NPi:
    name: str
    domain: object
    codomain: object


@dataclass(frozen=True)
class NSigma:
    name: str
    first: object
    second: object


@dataclass(frozen=True)
class NApp:
    fn: object
    arg: object


@dataclass(frozen=True)
class NPair:
    fst: object
    snd: object


@dataclass(frozen=True)
class NFst:
    arg: object


@dataclass(frozen=True)
class NSnd:
    arg: object


@dataclass(frozen=True)
class NId:
    type: object
    lhs: object
    rhs: object


@dataclass(frozen=True)
class NRefl:
    arg: object


@dataclass(frozen=True)
class NIndPath:
    x: str
    y: str
    p: str
    motive: object
    a: str
    base: object
    target: object


_fresh_counter = itertools.count()


def fresh(stem: str = "v") -> str:
    return f"{stem}%{next(_fresh_counter)}"


def free_vars(t) -> set[str]:
    match t:
        case NVar(n):
            return {n}
        case NConst(_) | NUniv(_):
            return set()
        case NLam(n, b):
            return free_vars(b) - {n}
        case NPi(n, d, c) | NSigma(n, d, c):
            return free_vars(d) | (free_vars(c) - {n})
        case NApp(f, a) | NPair(f, a):
            return free_vars(f) | free_vars(a)
        case NFst(a) | NSnd(a) | NRefl(a):
            return free_vars(a)
        case NId(ty, l, r):
            return free_vars(ty) | free_vars(l) | free_vars(r)
        case NIndPath(x, y, p, m, a, d, tgt):
            return (
                (free_vars(m) - {x, y, p}) | (free_vars(d) - {a}) | free_vars(tgt)
            )
    raise AssertionError(t)


def subst(t, name: str, value):
    """Capture-avoiding substitution t[name := value]."""

    def bind1(n, body):
        if n == name:
            return n, body, True  # shadowed: substitution stops
        if n in free_vars(value):
            n2 = fresh(n.split("%")[0])
            body = subst(body, n, NVar(n2))
            return n2, body, False
        return n, body, False

    match t:
        case NVar(n):
            return value if n == name else t
        case NConst(_) | NUniv(_):
            return t
        case NLam(n, b):
            n2, b2, stop = bind1(n, b)
            return NLam(n2, b2 if stop else subst(b2, name, value))
        case NPi(n, d, c):
            d2 = subst(d, name, value)
            n2, c2, stop = bind1(n, c)
            return NPi(n2, d2, c2 if stop else subst(c2, name, value))
        case NSigma(n, d, c):
            d2 = subst(d, name, value)
            n2, c2, stop = bind1(n, c)
            return NSigma(n2, d2, c2 if stop else subst(c2, name, value))
        case NApp(f, a):
            return NApp(subst(f, name, value), subst(a, name, value))
        case NPair(f, a):
            return NPair(subst(f, name, value), subst(a, name, value))
        case NFst(a):
            return NFst(subst(a, name, value))
        case NSnd(a):
            return NSnd(subst(a, name, value))
        case NRefl(a):
            return NRefl(subst(a, name, value))
        case NId(ty, l, r):
            return NId(
                subst(ty, name, value) if ty is not None else None,
                subst(l, name, value),
                subst(r, name, value),
            )
        case NIndPath(x, y, p, m, a, d, tgt):
            tgt2 = subst(tgt, name, value)
            # rename motive binders apart, one at a time
            m2 = m
            xs = []
            for n in (x, y, p):
                if n == name:
                    xs.append((n, True))
                    continue
                if n in free_vars(value):
                    n2 = fresh(n.split("%")[0])
                    m2 = subst(m2, n, NVar(n2))
                    xs.append((n2, False))
                else:
                    xs.append((n, False))
            if not any(stop for _, stop in xs):
                m2 = subst(m2, name, value)
            (x2, _), (y2, _), (p2, _) = xs
            a2, d2, stop = (a, d, True) if a == name else (a, d, False)
            if not stop and a in free_vars(value):
                a2 = fresh(a.split("%")[0])
                d2 = subst(d, a, NVar(a2))
            if not stop:
                d2 = subst(d2, name, value)
            return NIndPath(x2, y2, p2, m2, a2, d2, tgt2)
    raise AssertionError(t)


def to_named(t: C.Term, stack: list[str]):
    """Convert a nameless term to the named calculus; index i refers to
    stack[-1 - i]."""
    match t:
        case C.Var(i):
            return NVar(stack[len(stack) - 1 - i])
        case C.Constant(n):
            return NConst(n)
        case C.Universe(l):
            return NUniv(l)
        case C.Lambda(b):
            n = fresh("x")
            return NLam(n, to_named(b, stack + [n]))
        case C.Pi(d, c):
            n = fresh("x")
            return NPi(n, to_named(d, stack), to_named(c, stack + [n]))
        case C.Sigma(d, c):
            n = fresh("x")
            return NSigma(n, to_named(d, stack), to_named(c, stack + [n]))
        case C.App(f, a):
            return NApp(to_named(f, stack), to_named(a, stack))
        case C.Pair(f, a):
            return NPair(to_named(f, stack), to_named(a, stack))
        case C.Fst(a):
            return NFst(to_named(a, stack))
        case C.Snd(a):
            return NSnd(to_named(a, stack))
        case C.Refl(a):
            return NRefl(to_named(a, stack))
        case C.Id(ty, l, r):
            return NId(
                to_named(ty, stack) if ty is not None else None,
                to_named(l, stack),
                to_named(r, stack),
            )
        case C.IndPath(m, d, tgt):
            x, y, p, a = fresh("x"), fresh("y"), fresh("p"), fresh("a")
            return NIndPath(
                x,
                y,
                p,
                to_named(m, stack + [x, y, p]),
                a,
                to_named(d, stack + [a]),
                to_named(tgt, stack),
            )
    raise AssertionError(t)


def from_named(t, stack: list[str]) -> C.Term:
    match t:
        case NVar(n):
            return C.Var(len(stack) - 1 - _last(stack, n))
        case NConst(n):
            return C.Constant(n)
        case NUniv(l):
            return C.Universe(l)
        case NLam(n, b):
            return C.Lambda(from_named(b, stack + [n]))
        case NPi(n, d, c):
            return C.Pi(from_named(d, stack), from_named(c, stack + [n]))
        case NSigma(n, d, c):
            return C.Sigma(from_named(d, stack), from_named(c, stack + [n]))
        case NApp(f, a):
            return C.App(from_named(f, stack), from_named(a, stack))
        case NPair(f, a):
            return C.Pair(from_named(f, stack), from_named(a, stack))
        case NFst(a):
            return C.Fst(from_named(a, stack))
        case NSnd(a):
            return C.Snd(from_named(a, stack))
        case NRefl(a):
            return C.Refl(from_named(a, stack))
        case NId(ty, l, r):
            return C.Id(
                from_named(ty, stack) if ty is not None else None,
                from_named(l, stack),
                from_named(r, stack),
            )
        case NIndPath(x, y, p, m, a, d, tgt):
            return C.IndPath(
                from_named(m, stack + [x, y, p]),
                from_named(d, stack + [a]),
                from_named(tgt, stack),
            )
    raise AssertionError(t)


def _last(stack: list[str], name: str) -> int:
    for i in range(len(stack) - 1, -1, -1):
        if stack[i] == name:
            return i
    raise KeyError(name)
