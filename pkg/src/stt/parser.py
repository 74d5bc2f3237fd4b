"""Recursive-descent parser for the surface language.

Top-level forms are ``def`` and ``postulate`` declarations plus ``#import``
directives; ``#section`` markers are skipped.  A malformed declaration
produces one diagnostic and the parser resynchronizes at the next top-level
keyword, so one bad declaration never takes the rest of the file with it.

Operator precedence, loosest to tightest: ``→`` (right associative), ``∨``,
``∧``, the comparisons ``≤ ≡ ∼`` (non-associative), ``×``, application.
``λ``, ``Π`` and ``Σ`` extend as far right as possible.
"""

from __future__ import annotations

from .diagnostics import Diagnostic
from .lexer import LexError, Span, Token, TokenKind, tokenize
from . import surface as S


class ParseFailure(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(message)
        self.message = message
        self.span = span


_DECL_KEYWORDS = {"def", "postulate", "#import", "#section"}

# Tokens that may begin an atom, used to drive application parsing.
_ATOM_KEYWORDS = {
    "U",
    "U1",
    "TOP",
    "BOT",
    "star",
    "fst",
    "snd",
    "pi1",
    "pi2",
    "refl",
    "Id",
    "ind-path",
    "Delta1",
    "Delta2",
    "Lambda21",
    "dDelta1",
}
_ATOM_SYMBOLS = {"(", "[", "⟨"}


class _Parser:
    def __init__(self, tokens: list[Token], eof_span: Span):
        self.tokens = tokens
        self.pos = 0
        self.eof_span = eof_span

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, canon: str) -> bool:
        t = self.peek()
        return t is not None and t.canon == canon

    def at_kind(self, kind: TokenKind) -> bool:
        t = self.peek()
        return t is not None and t.kind == kind

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise ParseFailure("unexpected end of input", self.eof_span)
        self.pos += 1
        return t

    def expect(self, canon: str, what: str | None = None) -> Token:
        t = self.peek()
        if t is None or t.canon != canon:
            want = what or f"'{canon}'"
            got = f"'{t.lexeme}'" if t else "end of input"
            raise ParseFailure(f"expected {want}, found {got}", self._here())
        return self.next()

    def expect_ident(self, what: str = "identifier") -> Token:
        t = self.peek()
        if t is None or t.kind != TokenKind.IDENT:
            got = f"'{t.lexeme}'" if t else "end of input"
            raise ParseFailure(f"expected {what}, found {got}", self._here())
        return self.next()

    def _here(self) -> Span:
        t = self.peek()
        return t.span if t is not None else self.eof_span

    # -- expressions -------------------------------------------------------

    def expr(self) -> S.SExpr:
        t = self.peek()
        if t is not None and t.canon == "lambda":
            return self.lam()
        if t is not None and t.canon in ("Pi", "Sigma"):
            return self.quantifier(t.canon)
        return self.arrow()

    def lam(self) -> S.SExpr:
        start = self.next().span
        binders: list[S.SLamBinder] = []
        while not self.at("|->"):
            binders.append(self.lam_binder())
        self.expect("|->")
        body = self.expr()
        if not binders:
            raise ParseFailure("λ needs at least one binder", start)
        return S.SLam(start.cover(body.span), tuple(binders), body)

    def lam_binder(self) -> S.SLamBinder:
        if self.at_kind(TokenKind.IDENT):
            return S.SLamBinder(self.next().lexeme, None)
        if self.at("("):
            self.next()
            pat = self.pattern()
            annot = None
            if self.at(":"):
                self.next()
                annot = self.expr()
            self.expect(")")
            return S.SLamBinder(pat, annot)
        raise ParseFailure("expected λ binder", self._here())

    def pattern(self) -> S.Pattern:
        if self.at("("):
            self.next()
            a = self.expect_ident().lexeme
            self.expect(",")
            b = self.expect_ident().lexeme
            self.expect(")")
            return (a, b)
        return self.expect_ident("binder name").lexeme

    def quantifier(self, which: str) -> S.SExpr:
        start = self.next().span
        groups: list[S.SGroup] = []
        while self.at("("):
            groups.append(self.group())
        if not groups:
            raise ParseFailure(f"{which} needs at least one (name : type) group", start)
        self.expect(",")
        body = self.expr()
        span = start.cover(body.span)
        if which == "Pi":
            return S.SPi(span, tuple(groups), body)
        return S.SSigma(span, tuple(groups), body)

    def group(self) -> S.SGroup:
        start = self.expect("(").span
        names = [self.expect_ident("parameter name").lexeme]
        while self.at_kind(TokenKind.IDENT):
            names.append(self.next().lexeme)
        self.expect(":")
        annot = self.expr()
        end = self.expect(")").span
        return S.SGroup(tuple(names), annot, start.cover(end))

    def arrow(self) -> S.SExpr:
        lhs = self.disj()
        if self.at("->"):
            self.next()
            rhs = self.expr()
            return S.SArrow(lhs.span.cover(rhs.span), lhs, rhs)
        return lhs

    def disj(self) -> S.SExpr:
        lhs = self.conj()
        if self.at("\\/"):
            self.next()
            rhs = self.disj()
            return S.SOr(lhs.span.cover(rhs.span), lhs, rhs)
        return lhs

    def conj(self) -> S.SExpr:
        lhs = self.cmp()
        if self.at("/\\"):
            self.next()
            rhs = self.conj()
            return S.SAnd(lhs.span.cover(rhs.span), lhs, rhs)
        return lhs

    def cmp(self) -> S.SExpr:
        lhs = self.times()
        t = self.peek()
        if t is not None and t.canon in ("<=", "===", "~"):
            self.next()
            rhs = self.times()
            span = lhs.span.cover(rhs.span)
            if t.canon == "<=":
                return S.SLeq(span, lhs, rhs)
            if t.canon == "===":
                return S.SEq(span, lhs, rhs)
            return S.SSim(span, lhs, rhs)
        return lhs

    def times(self) -> S.SExpr:
        lhs = self.app()
        if self.at("*"):
            self.next()
            rhs = self.times()
            return S.STimes(lhs.span.cover(rhs.span), lhs, rhs)
        return lhs

    def _starts_atom(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind == TokenKind.IDENT or t.kind == TokenKind.NAT:
            return True
        if t.kind == TokenKind.KEYWORD:
            return t.canon in _ATOM_KEYWORDS
        return t.canon in _ATOM_SYMBOLS

    def app(self) -> S.SExpr:
        head = self.atom()
        while self._starts_atom():
            arg = self.atom()
            head = S.SApp(head.span.cover(arg.span), head, arg)
        return head

    def atom(self) -> S.SExpr:
        t = self.peek()
        if t is None:
            raise ParseFailure("expected expression", self.eof_span)
        if t.kind == TokenKind.IDENT:
            self.next()
            return S.SName(t.span, t.lexeme)
        if t.kind == TokenKind.NAT:
            self.next()
            return S.SNat(t.span, t.lexeme)
        if t.kind == TokenKind.KEYWORD:
            c = t.canon
            if c == "U":
                self.next()
                return S.SUniv(t.span, 0)
            if c == "U1":
                self.next()
                return S.SUniv(t.span, 1)
            if c == "TOP":
                self.next()
                return S.STop(t.span)
            if c == "BOT":
                self.next()
                return S.SBot(t.span)
            if c == "star":
                self.next()
                return S.SStar(t.span)
            if c in ("Delta1", "Delta2", "Lambda21", "dDelta1"):
                self.next()
                return S.SShapeName(t.span, c)
            if c in ("fst", "snd", "pi1", "pi2", "refl"):
                self.next()
                arg = self.atom()
                span = t.span.cover(arg.span)
                node = {"fst": S.SFst, "snd": S.SSnd, "pi1": S.SP1, "pi2": S.SP2, "refl": S.SRefl}[c]
                return node(span, arg)
            if c == "Id":
                self.next()
                ty = self.atom()
                lhs = self.atom()
                rhs = self.atom()
                return S.SId(t.span.cover(rhs.span), ty, lhs, rhs)
            if c == "ind-path":
                self.next()
                motive = self.atom()
                base = self.atom()
                target = self.atom()
                return S.SIndPath(t.span.cover(target.span), motive, base, target)
            if c in ("lambda", "Pi", "Sigma"):
                return self.expr()
            raise ParseFailure(f"unexpected keyword '{t.lexeme}'", t.span)
        if t.canon == "(":
            self.next()
            inner = self.expr()
            if self.at(","):
                self.next()
                second = self.expr()
                end = self.expect(")").span
                return S.SPair(t.span.cover(end), inner, second)
            if self.at(":"):
                self.next()
                ty = self.expr()
                end = self.expect(")").span
                return S.SAnnot(t.span.cover(end), inner, ty)
            end = self.expect(")").span
            return _respan(inner, t.span.cover(end))
        if t.canon == "[":
            return self.split()
        if t.canon == "⟨":
            return self.ext_type()
        raise ParseFailure(f"unexpected token '{t.lexeme}'", t.span)

    def split(self) -> S.SExpr:
        start = self.expect("[").span
        branches: list[tuple[S.SExpr | None, S.SExpr]] = []
        if not self.at("]"):
            while True:
                first = self.expr()
                if self.at("|->"):
                    self.next()
                    value = self.expr()
                    branches.append((first, value))
                else:
                    branches.append((None, first))
                if self.at(","):
                    self.next()
                    continue
                break
        end = self.expect("]").span
        return S.SSplit(start.cover(end), tuple(branches))

    def ext_type(self) -> S.SExpr:
        start = self.expect("⟨").span
        shape = self.shape()
        self.expect("->")
        codomain = self.expr()
        tope = None
        boundary = None
        if self.at("|"):
            self.next()
            tope = self.expr()
            self.expect("|->")
            boundary = self.expr()
        end = self.expect("⟩").span
        return S.SExt(start.cover(end), shape, codomain, tope, boundary)

    def shape(self) -> S.SExpr:
        if self.at("{"):
            start = self.next().span
            binder = self.pattern()
            self.expect(":")
            cube = self.times()
            self.expect("|")
            tope = self.expr()
            end = self.expect("}").span
            return S.SShape(start.cover(end), binder, cube, tope)
        # a bare cube expression or canonical shape name
        return self.times()

    # -- declarations ------------------------------------------------------

    def declaration(self) -> S.SurfaceDecl:
        kw = self.next()
        is_def = kw.canon == "def"
        name_tok = self.expect_ident("declaration name")
        params: list[S.SParam] = []
        while True:
            if self.at("("):
                params.append(self.group())
            elif self.at("["):
                start = self.next().span
                tope = self.expr()
                end = self.expect("]").span
                params.append(S.STopeParam(tope, start.cover(end)))
            else:
                break
        self.expect(":")
        ty = self.expr()
        body = None
        end_span = ty.span
        if is_def:
            self.expect(":=")
            body = self.expr()
            end_span = body.span
        seen: set[str] = set()
        for p in params:
            if isinstance(p, S.SGroup):
                for n in p.names:
                    if n in seen:
                        raise ParseFailure(
                            f"duplicate parameter name '{n}' in declaration", p.span
                        )
                    seen.add(n)
        return S.SurfaceDecl(
            name=name_tok.lexeme,
            name_span=name_tok.span,
            params=tuple(params),
            type=ty,
            body=body,
            span=kw.span.cover(end_span),
        )


def _respan(e: S.SExpr, span: Span):
    # parenthesized expressions keep their widened span
    import dataclasses

    return dataclasses.replace(e, span=span)


def _filter_code_tokens(tokens: list[Token]) -> list[Token]:
    return [t for t in tokens if t.kind != TokenKind.LAYOUT]


def parse_module(source: str) -> tuple[list[S.SurfaceDecl], list[Diagnostic]]:
    """Parse all declarations, reporting one diagnostic per malformed one."""
    decls: list[S.SurfaceDecl] = []
    diags: list[Diagnostic] = []
    try:
        tokens = tokenize(source)
    except LexError as e:
        diags.append(Diagnostic("error", e.code, e.message, e.span))
        return decls, diags

    eof_span = tokens[-1].span if tokens else Span(0, 0, 1, 1, 1, 1)
    p = _Parser(tokens, eof_span)
    while p.peek() is not None:
        t = p.peek()
        if t.canon in ("#import", "#section"):
            p.next()
            continue
        if t.canon not in ("def", "postulate"):
            diags.append(
                Diagnostic(
                    "error",
                    "E-PARSE",
                    f"expected a declaration, found '{t.lexeme}'",
                    t.span,
                )
            )
            _resync(p)
            continue
        try:
            decls.append(p.declaration())
        except ParseFailure as e:
            diags.append(Diagnostic("error", "E-PARSE", e.message, e.span))
            _resync(p)
    return decls, diags


def _resync(p: _Parser) -> None:
    while p.peek() is not None and p.peek().canon not in ("def", "postulate", "#import"):
        p.next()


def imports_of(source: str) -> list[tuple[str, Span]]:
    """Paths of the ``#import "..."`` directives, in source order."""
    out = []
    try:
        tokens = tokenize(source)
    except LexError:
        return out
    for t in tokens:
        if t.canon == "#import":
            rest = t.lexeme[len("#import") :].strip()
            if rest.startswith('"') and rest.endswith('"') and len(rest) >= 2:
                out.append((rest[1:-1], t.span))
    return out


def parse_expr(source: str) -> S.SExpr:
    """Parse a single expression; convenience entry point for tests."""
    tokens = tokenize(source)
    eof_span = tokens[-1].span if tokens else Span(0, 0, 1, 1, 1, 1)
    p = _Parser(tokens, eof_span)
    e = p.expr()
    if p.peek() is not None:
        raise ParseFailure(f"trailing input '{p.peek().lexeme}'", p.peek().span)
    return e
