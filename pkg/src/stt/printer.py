"""Pretty-printer for surface declarations.

Prints canonical Unicode spellings with minimal parenthesization, chosen so
that reparsing the output yields a structurally identical declaration.  The
output is deterministic and printing is idempotent.
"""

from __future__ import annotations

from . import surface as S

# Precedence levels, loosest to tightest; must mirror the parser.
_ARROW, _OR, _AND, _CMP, _TIMES, _APP, _ATOM = range(7)

_SHAPE_GLYPH = {"Delta1": "Δ¹", "Delta2": "Δ²", "Lambda21": "Λ²₁", "dDelta1": "∂Δ¹"}


def _parens(s: str, need: bool) -> str:
    return f"({s})" if need else s


def _pattern(p: S.Pattern) -> str:
    if isinstance(p, tuple):
        return f"({p[0]} , {p[1]})"
    return p


def print_expr(e: S.SExpr, prec: int = _ARROW) -> str:
    match e:
        case S.SName(_, text):
            return text
        case S.SNat(_, text):
            return text
        case S.SUniv(_, 0):
            return "U"
        case S.SUniv(_, _):
            return "U₁"
        case S.SShapeName(_, name):
            return _SHAPE_GLYPH[name]
        case S.STop(_):
            return "⊤"
        case S.SBot(_):
            return "⊥"
        case S.SStar(_):
            return "⋆"
        case S.SArrow(_, l, r):
            s = f"{print_expr(l, _OR)} → {print_expr(r, _ARROW)}"
            return _parens(s, prec > _ARROW)
        case S.SOr(_, l, r):
            s = f"{print_expr(l, _AND)} ∨ {print_expr(r, _OR)}"
            return _parens(s, prec > _OR)
        case S.SAnd(_, l, r):
            s = f"{print_expr(l, _CMP)} ∧ {print_expr(r, _AND)}"
            return _parens(s, prec > _AND)
        case S.SLeq(_, l, r):
            s = f"{print_expr(l, _TIMES)} ≤ {print_expr(r, _TIMES)}"
            return _parens(s, prec > _CMP)
        case S.SEq(_, l, r):
            s = f"{print_expr(l, _TIMES)} ≡ {print_expr(r, _TIMES)}"
            return _parens(s, prec > _CMP)
        case S.SSim(_, l, r):
            s = f"{print_expr(l, _TIMES)} ∼ {print_expr(r, _TIMES)}"
            return _parens(s, prec > _CMP)
        case S.STimes(_, l, r):
            s = f"{print_expr(l, _APP)} × {print_expr(r, _TIMES)}"
            return _parens(s, prec > _TIMES)
        case S.SApp(_, f, a):
            s = f"{print_expr(f, _APP)} {print_expr(a, _ATOM)}"
            return _parens(s, prec > _APP)
        case S.SPair(_, a, b):
            return f"({print_expr(a)} , {print_expr(b)})"
        case S.SAnnot(_, t, ty):
            return f"({print_expr(t)} : {print_expr(ty)})"
        case S.SFst(_, a):
            return _parens(f"fst {print_expr(a, _ATOM)}", prec > _APP)
        case S.SSnd(_, a):
            return _parens(f"snd {print_expr(a, _ATOM)}", prec > _APP)
        case S.SP1(_, a):
            return _parens(f"π₁ {print_expr(a, _ATOM)}", prec > _APP)
        case S.SP2(_, a):
            return _parens(f"π₂ {print_expr(a, _ATOM)}", prec > _APP)
        case S.SRefl(_, a):
            return _parens(f"refl {print_expr(a, _ATOM)}", prec > _APP)
        case S.SId(_, ty, l, r):
            s = f"Id {print_expr(ty, _ATOM)} {print_expr(l, _ATOM)} {print_expr(r, _ATOM)}"
            return _parens(s, prec > _APP)
        case S.SIndPath(_, m, d, p):
            s = (
                f"ind-path {print_expr(m, _ATOM)} {print_expr(d, _ATOM)} "
                f"{print_expr(p, _ATOM)}"
            )
            return _parens(s, prec > _APP)
        case S.SLam(_, binders, body):
            bs = " ".join(_lam_binder(b) for b in binders)
            return _parens(f"λ {bs} ↦ {print_expr(body, _ARROW)}", prec > _ARROW)
        case S.SPi(_, groups, body):
            gs = " ".join(_group(g) for g in groups)
            return _parens(f"Π {gs}, {print_expr(body, _ARROW)}", prec > _ARROW)
        case S.SSigma(_, groups, body):
            gs = " ".join(_group(g) for g in groups)
            return _parens(f"Σ {gs}, {print_expr(body, _ARROW)}", prec > _ARROW)
        case S.SShape(_, binder, cube, tope):
            return f"{{{_pattern(binder)} : {print_expr(cube, _TIMES)} | {print_expr(tope)}}}"
        case S.SExt(_, shape, cod, tope, boundary):
            head = f"⟨{print_expr(shape, _TIMES)} → {print_expr(cod, _OR)}"
            if tope is None:
                return head + "⟩"
            return f"{head} | {print_expr(tope, _OR)} ↦ {print_expr(boundary, _OR)}⟩"
        case S.SSplit(_, branches):
            parts = []
            for tope, value in branches:
                if tope is None:
                    parts.append(print_expr(value))
                else:
                    parts.append(f"{print_expr(tope, _OR)} ↦ {print_expr(value, _OR)}")
            return "[" + " , ".join(parts) + "]"
    raise AssertionError(f"print_expr: {e!r}")


def _lam_binder(b: S.SLamBinder) -> str:
    if b.annot is None:
        if isinstance(b.pattern, tuple):
            return f"({_pattern(b.pattern)})"
        return b.pattern
    return f"({_pattern(b.pattern)} : {print_expr(b.annot)})"


def _group(g: S.SGroup) -> str:
    return f"({' '.join(g.names)} : {print_expr(g.annot)})"


def pretty_print(decl: S.SurfaceDecl) -> str:
    """Render one declaration on a single logical line."""
    parts = ["postulate" if decl.is_postulate else "def", decl.name]
    for p in decl.params:
        if isinstance(p, S.SGroup):
            parts.append(_group(p))
        else:
            parts.append(f"[{print_expr(p.tope)}]")
    parts.append(":")
    parts.append(print_expr(decl.type))
    if not decl.is_postulate:
        parts.append(":=")
        parts.append(print_expr(decl.body))
    return " ".join(parts)


def print_module(decls: list[S.SurfaceDecl]) -> str:
    return "\n".join(pretty_print(d) for d in decls) + ("\n" if decls else "")
