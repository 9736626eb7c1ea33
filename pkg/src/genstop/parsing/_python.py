"""Python-specific structure recovery: def headers, suite spans, calls."""

from __future__ import annotations

import re

from genstop.parsing import CallSite, FunctionNode, SourceTree

_DEF_RE = re.compile(r"^([ \t]*)(?:async[ \t]+)?def[ \t]+([A-Za-z_]\w*)[ \t]*\(")
_CALL_RE = re.compile(r"(?<![\w.])([A-Za-z_]\w*)[ \t]*\(")
_DEF_NAME_SUB = re.compile(r"\b(?:def|class)[ \t]+[A-Za-z_]\w*")

_KEYWORDS = frozenset(
    "and as assert async await break class continue def del elif else except "
    "finally for from global if import in is lambda nonlocal not or pass "
    "raise return try while with yield match case".split()
)


def mask(code: str) -> tuple[str, list[bool]]:
    """Blank out string contents and comments, keeping quote delimiters.

    Returns the masked text (same length, newlines preserved) and a per-line
    flag that is true when the line starts inside a multi-line string.
    """
    out = list(code)
    n = len(code)
    line_in_str: list[bool] = []
    i = 0
    delim: str | None = None
    at_line_start = True
    while i < n:
        if at_line_start:
            line_in_str.append(delim is not None)
            at_line_start = False
        c = code[i]
        if c == "\n":
            # unterminated single-quoted strings end at the line break
            if delim in ("'", '"'):
                delim = None
            at_line_start = True
            i += 1
            continue
        if delim is not None:
            if c == "\\":
                out[i] = " "
                if i + 1 < n and code[i + 1] != "\n":
                    out[i + 1] = " "
                i += 2
                continue
            if code.startswith(delim, i):
                i += len(delim)
                delim = None
                continue
            out[i] = " "
            i += 1
            continue
        if c == "#":
            while i < n and code[i] != "\n":
                out[i] = " "
                i += 1
            continue
        if c in "'\"":
            if code.startswith(c * 3, i):
                delim = c * 3
                i += 3
            else:
                delim = c
                i += 1
            continue
        i += 1
    return "".join(out), line_in_str


def _indent_width(line: str) -> int:
    expanded = line.expandtabs(8)
    return len(expanded) - len(expanded.lstrip(" "))


def _header_end(mlines: list[str], start: int) -> int:
    """Line index where a def header's parameter list closes with a colon."""
    depth = 0
    seen_paren = False
    for j in range(start, min(len(mlines), start + 200)):
        for ch in mlines[j]:
            if ch in "([{":
                depth += 1
                seen_paren = True
            elif ch in ")]}":
                depth = max(0, depth - 1)
            elif ch == ":" and seen_paren and depth == 0:
                return j
        if seen_paren and depth == 0 and j > start:
            return j
    return start


def find_headers(code: str) -> list[tuple[str, int, str]]:
    masked, _ = mask(code)
    lines = code.split("\n")
    mlines = masked.split("\n")
    headers = []
    for idx, ml in enumerate(mlines):
        m = _DEF_RE.match(ml)
        if not m:
            continue
        end = _header_end(mlines, idx)
        headers.append((m.group(2), idx, "\n".join(lines[idx : end + 1])))
    return headers


def parse(code: str) -> SourceTree:
    masked, line_in_str = mask(code)
    lines = code.split("\n")
    mlines = masked.split("\n")

    functions: list[FunctionNode] = []
    for idx, ml in enumerate(mlines):
        m = _DEF_RE.match(ml)
        if not m:
            continue
        indent = _indent_width(m.group(1))
        header_end = _header_end(mlines, idx)
        last = header_end
        j = header_end + 1
        while j < len(lines):
            if j < len(line_in_str) and line_in_str[j]:
                last = j
                j += 1
                continue
            if mlines[j].strip() == "":
                # blank or comment-only: neither extends nor ends the suite
                j += 1
                continue
            if _indent_width(lines[j]) > indent:
                last = j
                j += 1
                continue
            break
        functions.append(
            FunctionNode(
                name=m.group(2),
                first_line=idx,
                last_line=last,
                header_text="\n".join(lines[idx : header_end + 1]),
                top_level=indent == 0,
            )
        )

    calls: list[CallSite] = []
    for idx, ml in enumerate(mlines):
        scrubbed = _DEF_NAME_SUB.sub("", ml)
        for m in _CALL_RE.finditer(scrubbed):
            if m.group(1) not in _KEYWORDS:
                calls.append(CallSite(name=m.group(1), line=idx))

    for fn in functions:
        fn.calls = [c for c in calls if fn.first_line <= c.line <= fn.last_line]

    return SourceTree(language="python", text=code, functions=functions, calls=calls)
