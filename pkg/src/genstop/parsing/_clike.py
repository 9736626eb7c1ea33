"""Brace-language structure recovery shared by javascript, go, and cpp."""

from __future__ import annotations

import re
from bisect import bisect_right

from genstop.parsing import CallSite, FunctionNode, SourceTree

_JS_KEYWORDS = frozenset(
    "function if else for while do switch case break continue return var let "
    "const new delete typeof instanceof in of try catch finally throw class "
    "extends super this void yield async await static get set".split()
)
_GO_KEYWORDS = frozenset(
    "func if else for range switch case break continue return var const type "
    "struct interface map chan go defer select package import fallthrough "
    "goto default".split()
)
_CPP_KEYWORDS = frozenset(
    "if else for while do switch case break continue return sizeof new delete "
    "try catch throw class struct union enum template typename using namespace "
    "public private protected static const constexpr inline virtual operator "
    "alignof decltype noexcept static_assert typedef auto void int long short "
    "char bool float double unsigned signed defined".split()
)

KEYWORDS = {"javascript": _JS_KEYWORDS, "go": _GO_KEYWORDS, "cpp": _CPP_KEYWORDS}

_JS_DECL_RE = re.compile(r"\bfunction[ \t]*\*?[ \t]+([A-Za-z_$][\w$]*)[ \t]*\(")
_JS_EXPR_RE = re.compile(
    r"\b(?:const|let|var)[ \t]+([A-Za-z_$][\w$]*)[ \t]*=[ \t]*"
    r"(?:async[ \t]+)?(?:function\b|\(|[A-Za-z_$][\w$]*[ \t]*=>)"
)
_GO_FUNC_RE = re.compile(r"^[ \t]*func[ \t]+(?:\([^()\n]*\)[ \t]*)?([A-Za-z_]\w*)[ \t]*\(", re.M)
_CPP_ID_RE = re.compile(r"([A-Za-z_]\w*)[ \t]*\(")
_CPP_HDR_RE = re.compile(
    r"^[ \t]*(?:[A-Za-z_][\w:<>,]*[ \t*&]+)+([A-Za-z_]\w*)[ \t]*\(", re.M
)
_CALL_RE = re.compile(r"(?<![\w.$:>])([A-Za-z_$][\w$]*)[ \t]*\(")


def mask(code: str, language: str) -> str:
    """Blank comments and string contents, keeping delimiters and structure."""
    out = list(code)
    n = len(code)
    i = 0
    state: str | None = None  # "'", '"', '`', or "/*"
    while i < n:
        c = code[i]
        if c == "\n":
            if state in ("'", '"'):
                state = None  # resilience against unterminated quotes
            i += 1
            continue
        if state == "/*":
            if code.startswith("*/", i):
                out[i] = out[i + 1] = " "
                state = None
                i += 2
                continue
            out[i] = " "
            i += 1
            continue
        if state is not None:
            # go raw strings have no escapes; everything else does
            if c == "\\" and not (state == "`" and language == "go"):
                out[i] = " "
                if i + 1 < n and code[i + 1] != "\n":
                    out[i + 1] = " "
                i += 2
                continue
            if c == state:
                state = None
                i += 1
                continue
            out[i] = " "
            i += 1
            continue
        if code.startswith("//", i):
            while i < n and code[i] != "\n":
                out[i] = " "
                i += 1
            continue
        if code.startswith("/*", i):
            out[i] = out[i + 1] = " "
            state = "/*"
            i += 2
            continue
        if c in "'\"`":
            state = c
            i += 1
            continue
        i += 1
    return "".join(out)


class _Scanner:
    """Masked text with precomputed line starts and brace depths."""

    def __init__(self, code: str, language: str):
        self.code = code
        self.language = language
        self.masked = mask(code, language)
        self.line_starts = [0]
        for i, c in enumerate(code):
            if c == "\n":
                self.line_starts.append(i + 1)
        self.depth = [0] * (len(code) + 1)
        d = 0
        for i, c in enumerate(self.masked):
            self.depth[i] = d
            if c == "{":
                d += 1
            elif c == "}":
                d = max(0, d - 1)
        self.depth[len(code)] = d

    def line_of(self, pos: int) -> int:
        return bisect_right(self.line_starts, pos) - 1

    def lines_text(self, first: int, last: int) -> str:
        start = self.line_starts[first]
        end = (
            self.line_starts[last + 1] - 1
            if last + 1 < len(self.line_starts)
            else len(self.code)
        )
        return self.code[start:end]

    def match_paren(self, open_pos: int) -> int:
        """Position of the ')' matching the '(' at open_pos, or end of text."""
        d = 0
        for i in range(open_pos, len(self.masked)):
            c = self.masked[i]
            if c == "(":
                d += 1
            elif c == ")":
                d -= 1
                if d == 0:
                    return i
        return len(self.masked) - 1

    def match_brace(self, open_pos: int) -> int:
        """Position of the '}' matching the '{' at open_pos, or end of text."""
        d = 0
        for i in range(open_pos, len(self.masked)):
            c = self.masked[i]
            if c == "{":
                d += 1
            elif c == "}":
                d -= 1
                if d == 0:
                    return i
        return len(self.masked) - 1

    def body_open(self, after: int) -> int | None:
        """First '{' at paren depth 0 after ``after``; None at ';' or EOF."""
        d = 0
        for i in range(after, len(self.masked)):
            c = self.masked[i]
            if c == "(":
                d += 1
            elif c == ")":
                d = max(0, d - 1)
            elif d == 0:
                if c == "{":
                    return i
                if c == ";":
                    return None
        return None


def _cpp_defs(sc: _Scanner) -> list[tuple[str, int, int]]:
    """(name_pos, params_close, body_open) for depth-0 cpp definitions."""
    defs = []
    for m in _CPP_ID_RE.finditer(sc.masked):
        name = m.group(1)
        start = m.start(1)
        if name in _CPP_KEYWORDS or sc.depth[start] != 0:
            continue
        prev = sc.masked[start - 1] if start > 0 else " "
        if prev in ".:>" or prev.isalnum() or prev == "_":
            continue
        close = sc.match_paren(m.end(0) - 1)
        # between the params and the body only specifiers, a ctor init list,
        # or a trailing return type may appear
        i = close + 1
        body = None
        d = 0
        while i < len(sc.masked) and i - close < 500:
            c = sc.masked[i]
            if c == "(":
                d += 1
            elif c == ")":
                d = max(0, d - 1)
            elif d == 0:
                if c == "{":
                    body = i
                    break
                if c == ";" or c == "=":
                    break
                if not (c.isspace() or c.isalnum() or c in "_:,<>&*-[]"):
                    break
            i += 1
        if body is not None:
            defs.append((start, close, body))
    return defs


def parse(code: str, language: str) -> SourceTree:
    sc = _Scanner(code, language)
    functions: list[FunctionNode] = []
    def_name_positions: set[int] = set()

    def add(name: str, name_pos: int, params_close: int, body_open: int | None):
        first = sc.line_of(name_pos)
        header_last = sc.line_of(params_close)
        if body_open is None:
            last = header_last
        else:
            last = sc.line_of(sc.match_brace(body_open))
        def_name_positions.add(name_pos)
        functions.append(
            FunctionNode(
                name=name,
                first_line=first,
                last_line=last,
                header_text=sc.lines_text(first, header_last),
                top_level=sc.depth[name_pos] == 0,
            )
        )

    if language == "javascript":
        for m in _JS_DECL_RE.finditer(sc.masked):
            open_paren = m.end(0) - 1
            close = sc.match_paren(open_paren)
            add(m.group(1), m.start(1), close, sc.body_open(close + 1))
        for m in _JS_EXPR_RE.finditer(sc.masked):
            tail = sc.masked[m.end(0) - 1]
            if tail == "(":
                close = sc.match_paren(m.end(0) - 1)
            else:  # "function" keyword or bare-identifier arrow
                close = m.end(0) - 1
            arrow = re.compile(r"=>[ \t\n]*").match(sc.masked, _skip_ws(sc.masked, close + 1))
            if arrow:
                after = arrow.end()
                if after < len(sc.masked) and sc.masked[after] == "{":
                    add(m.group(1), m.start(1), close, after)
                else:
                    stmt_end = sc.masked.find(";", after)
                    end_line = sc.line_of(stmt_end if stmt_end != -1 else after)
                    add_expr(sc, functions, def_name_positions, m, close, end_line)
            else:
                add(m.group(1), m.start(1), close, sc.body_open(close + 1))
    elif language == "go":
        for m in _GO_FUNC_RE.finditer(sc.masked):
            open_paren = m.end(0) - 1
            close = sc.match_paren(open_paren)
            add(m.group(1), m.start(1), close, sc.body_open(close + 1))
    elif language == "cpp":
        for name_pos, close, body in _cpp_defs(sc):
            m = _CPP_ID_RE.match(sc.masked, name_pos)
            add(m.group(1), name_pos, close, body)

    keywords = KEYWORDS[language]
    calls: list[CallSite] = []
    for m in _CALL_RE.finditer(sc.masked):
        if m.group(1) in keywords or m.start(1) in def_name_positions:
            continue
        calls.append(CallSite(name=m.group(1), line=sc.line_of(m.start(1))))

    for fn in functions:
        fn.calls = [c for c in calls if fn.first_line <= c.line <= fn.last_line]

    return SourceTree(language=language, text=code, functions=functions, calls=calls)


def add_expr(sc, functions, def_name_positions, m, params_close, end_line):
    """Expression-bodied arrow function: span runs to the statement end."""
    first = sc.line_of(m.start(1))
    def_name_positions.add(m.start(1))
    functions.append(
        FunctionNode(
            name=m.group(1),
            first_line=first,
            last_line=max(end_line, first),
            header_text=sc.lines_text(first, sc.line_of(params_close)),
            top_level=sc.depth[m.start(1)] == 0,
        )
    )


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\n":
        pos += 1
    return pos


def find_headers(code: str, language: str) -> list[tuple[str, int, str]]:
    """Headers in source order, tolerating missing bodies (prompt parsing)."""
    sc = _Scanner(code, language)
    headers: list[tuple[int, str, int]] = []  # (name_pos, name, params_close)

    if language == "javascript":
        for m in _JS_DECL_RE.finditer(sc.masked):
            headers.append((m.start(1), m.group(1), sc.match_paren(m.end(0) - 1)))
        for m in _JS_EXPR_RE.finditer(sc.masked):
            tail_pos = m.end(0) - 1
            close = sc.match_paren(tail_pos) if sc.masked[tail_pos] == "(" else tail_pos
            headers.append((m.start(1), m.group(1), close))
    elif language == "go":
        for m in _GO_FUNC_RE.finditer(sc.masked):
            headers.append((m.start(1), m.group(1), sc.match_paren(m.end(0) - 1)))
    elif language == "cpp":
        for name_pos, close, _body in _cpp_defs(sc):
            m = _CPP_ID_RE.match(sc.masked, name_pos)
            headers.append((name_pos, m.group(1), close))
        for m in _CPP_HDR_RE.finditer(sc.masked):
            if m.group(1) in _CPP_KEYWORDS or sc.depth[m.start(1)] != 0:
                continue
            if any(h[0] == m.start(1) for h in headers):
                continue
            headers.append((m.start(1), m.group(1), sc.match_paren(m.end(0) - 1)))

    headers.sort(key=lambda h: h[0])
    return [
        (name, sc.line_of(pos), sc.lines_text(sc.line_of(pos), sc.line_of(close)))
        for pos, name, close in headers
    ]
