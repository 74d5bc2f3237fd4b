"""Structured diagnostics shared by the parser, resolver, and checker."""

from __future__ import annotations

from dataclasses import dataclass

from .lexer import Span


@dataclass
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str  # stable, e.g. E-TYPE-MISMATCH
    message: str
    span: Span | None = None
    file: str | None = None
    expected: str | None = None  # pretty-printed expected term
    actual: str | None = None  # pretty-printed actual term
    countermodel: dict[str, str] | None = None  # atom name -> value
    decl: str | None = None  # enclosing declaration, when known

    def sort_key(self) -> tuple:
        s = self.span
        return (
            self.file or "",
            s.start if s else -1,
            s.end if s else -1,
            self.code,
            self.message,
        )

    def render(self, source: str | None = None, explain_tope: bool = False) -> str:
        loc = ""
        if self.span is not None:
            loc = f"{self.span.line}:{self.span.col}: "
        head = f"{self.file + ':' if self.file else ''}{loc}{self.severity}[{self.code}]: {self.message}"
        lines = [head]
        if self.expected is not None:
            lines.append(f"  expected: {self.expected}")
        if self.actual is not None:
            lines.append(f"  actual:   {self.actual}")
        if source is not None and self.span is not None and self.span.line >= 1:
            src_lines = source.splitlines()
            if self.span.line <= len(src_lines):
                text = src_lines[self.span.line - 1]
                lines.append(f"  | {text}")
                width = 1
                if self.span.end_line == self.span.line and self.span.end_col > self.span.col:
                    width = self.span.end_col - self.span.col
                lines.append("  | " + " " * (self.span.col - 1) + "^" * max(1, width))
        if explain_tope and self.countermodel:
            vals = ", ".join(f"{k} = {v}" for k, v in sorted(self.countermodel.items()))
            lines.append(f"  countermodel: {vals}")
        return "\n".join(lines)
