"""Lightweight source-structure analysis for python, javascript, go, and cpp.

This is not a full grammar: it recovers exactly what excess-code labeling
needs from model-generated code -- function-definition nodes with line spans,
and call expressions with their callee identifier -- while tolerating
arbitrary trailing garbage (truncated lines, stray braces, prose).

Line indices are 0-based. Spans are inclusive. For brace languages the last
line of a function is its closing-brace line; for python it is the last line
of the suite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

SUPPORTED = ("python", "javascript", "go", "cpp")


class UnsupportedLanguageError(ValueError):
    pass


@dataclass(frozen=True)
class CallSite:
    """A call expression: bare callee identifier and the line it occurs on."""

    name: str
    line: int


@dataclass
class FunctionNode:
    """A function definition with its line span and the calls inside it."""

    name: str
    first_line: int
    last_line: int
    header_text: str
    top_level: bool = True
    calls: list[CallSite] = field(default_factory=list)

    def called_names(self) -> list[str]:
        seen = []
        for c in self.calls:
            if c.name not in seen:
                seen.append(c.name)
        return seen


@dataclass
class SourceTree:
    """Parse result: function nodes plus all call sites, garbage tolerated."""

    language: str
    text: str
    functions: list[FunctionNode]
    calls: list[CallSite]

    @property
    def line_count(self) -> int:
        return len(split_lines(self.text))

    def top_level_by_name(self) -> dict[str, list[FunctionNode]]:
        out: dict[str, list[FunctionNode]] = {}
        for fn in self.functions:
            if fn.top_level:
                out.setdefault(fn.name, []).append(fn)
        return out


def split_lines(text: str) -> list[str]:
    """Split on "\\n" only, keeping terminators. "".join round-trips exactly."""
    if not text:
        return []
    parts = text.split("\n")
    lines = [p + "\n" for p in parts[:-1]]
    if parts[-1] != "":
        lines.append(parts[-1])
    return lines


def parse_source(code: str, language: str) -> SourceTree:
    """Parse ``code`` into a SourceTree of function and call nodes."""
    if language == "python":
        from genstop.parsing import _python

        return _python.parse(code)
    if language in ("javascript", "go", "cpp"):
        from genstop.parsing import _clike

        return _clike.parse(code, language)
    raise UnsupportedLanguageError(
        f"unsupported language {language!r}; expected one of {SUPPORTED}"
    )


def find_headers(code: str, language: str) -> list[tuple[str, int, str]]:
    """Locate function-definition headers, tolerating missing bodies.

    Returns (name, first_line, header_text) triples in source order. Used on
    partial-code prompts, where the target function has no body yet.
    """
    if language == "python":
        from genstop.parsing import _python

        return _python.find_headers(code)
    if language in ("javascript", "go", "cpp"):
        from genstop.parsing import _clike

        return _clike.find_headers(code, language)
    raise UnsupportedLanguageError(
        f"unsupported language {language!r}; expected one of {SUPPORTED}"
    )


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs to single spaces for header comparison."""
    return re.sub(r"\s+", " ", text).strip()


def mask_source(code: str, language: str) -> str:
    """The source with comments and string contents blanked out.

    Same length as the input; used to test whether a region carries any
    actual code (comment-only regions mask to whitespace).
    """
    if language == "python":
        from genstop.parsing import _python

        return _python.mask(code)[0]
    if language in ("javascript", "go", "cpp"):
        from genstop.parsing import _clike

        return _clike.mask(code, language)
    raise UnsupportedLanguageError(
        f"unsupported language {language!r}; expected one of {SUPPORTED}"
    )
