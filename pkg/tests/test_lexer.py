"""Token-level contracts: alias equivalence, span coverage, error cases."""

from __future__ import annotations

import pytest

from stt.lexer import LexError, Token, TokenKind, tokenize


def kinds(src: str):
    return [(t.kind, t.canon) for t in tokenize(src)]


def test_empty_input():
    assert tokenize("") == []


def test_basic_classes():
    toks = tokenize("0 ≤ x")
    assert [t.kind for t in toks] == [TokenKind.NAT, TokenKind.SYMBOL, TokenKind.IDENT]
    assert [t.lexeme for t in toks] == ["0", "≤", "x"]


ALIASES = [
    ("Σ", "Sigma"),
    ("Π", "Pi"),
    ("0 ≤ x", "0 <= x"),
    ("x ≡ y", "x === y"),
    ("a ∧ b", "a /\\ b"),
    ("a ∨ b", "a \\/ b"),
    ("⊤", "TOP"),
    ("⊥", "BOT"),
    ("x ∼ y", "x ~ y"),
    ("A → B", "A -> B"),
    ("λ a ↦ a", "\\ a |-> a"),
    ("2 × 2", "2 * 2"),
    ("U₁", "U1"),
    ("π₁ p", "pi1 p"),
    ("π₂ p", "pi2 p"),
    ("Δ¹", "Delta1"),
    ("Δ²", "Delta2"),
    ("Λ²₁", "Lambda21"),
    ("∂Δ¹", "dDelta1"),
    ("⋆", "star"),
]


@pytest.mark.parametrize("glyph,ascii_", ALIASES, ids=[a for _, a in ALIASES])
def test_alias_table_produces_identical_kind_sequences(glyph, ascii_):
    assert kinds(glyph) == kinds(ascii_)


def test_spans_cover_input_modulo_trivia():
    src = "def f (A : U) : A → A := λ a ↦ a -- tail\n{- block {- nested -} -} x"
    toks = tokenize(src, keep_trivia=True)
    # exact coverage, in order, no overlaps
    pos = 0
    for t in toks:
        assert t.span.start == pos
        pos = t.span.end
    assert pos == len(src.encode("utf-8"))
    # concatenating lexemes reproduces the source exactly
    assert "".join(t.lexeme for t in toks) == src
    # without trivia, the same tokens minus layout
    code = tokenize(src)
    assert code == [t for t in toks if t.kind != TokenKind.LAYOUT]


def test_line_and_column_positions():
    toks = tokenize("def f\n  : U")
    by_lex = {t.lexeme: t.span for t in toks}
    assert (by_lex["def"].line, by_lex["def"].col) == (1, 1)
    assert (by_lex["f"].line, by_lex["f"].col) == (1, 5)
    assert (by_lex[":"].line, by_lex[":"].col) == (2, 3)


def test_invalid_character():
    with pytest.raises(LexError) as e:
        tokenize("def f : U := €")
    assert e.value.code == "E-INVALID-CHARACTER"
    assert e.value.span.start == 13


def test_unterminated_comment():
    with pytest.raises(LexError) as e:
        tokenize("{- {- -}")
    assert e.value.code == "E-UNTERMINATED-COMMENT"


def test_hyphenated_identifiers_do_not_eat_operators():
    toks = tokenize("path-inv x->y a --c")
    assert [t.lexeme for t in toks] == ["path-inv", "x", "->", "y", "a"]


def test_directives_are_single_tokens():
    toks = tokenize('#import "lib/core.stt"\n#section arrows\ndef')
    assert toks[0].canon == "#import"
    assert toks[1].canon == "#section"
    assert toks[2].canon == "def"


def test_determinism():
    src = "def f (A : U) : A → A := λ a ↦ a"
    assert tokenize(src) == tokenize(src)
