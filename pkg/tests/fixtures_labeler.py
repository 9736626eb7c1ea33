"""Hand-built labeling fixtures with manually recorded split oracles.

Each fixture states, line by line, which part of the document is prompt,
expected generation, blank separator, and excess. The oracle split index is
the position of the last expected line within the full prompt+output
document; it follows mechanically from the hand-made partition.

Fixtures with ``semantic_split`` set are the shapes the syntax analyzer
cannot split (no code body beyond the prompt); they must route to the
semantic client. ``semantic_split=None`` plus ``routed="semantic"`` marks
the fixture whose mock reply is unusable, so it must end up unlabeled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from genstop.corpus import GenerationRecord, PromptRecord, TokenStep

EXCESS_FUNCTIONS = "functions"
EXCESS_TESTS = "tests"
EXCESS_COMMENTS = "comments"


@dataclass
class LabelFixture:
    id: str
    language: str
    prompt_lines: list[str]
    expected_lines: list[str]  # generated lines the syntax oracle keeps
    excess_lines: list[str]  # first element is the first excess line
    blank_separator: int = 1  # blank lines between expected and excess
    excess_type: str = EXCESS_FUNCTIONS
    helpers: int = 0
    recursive: bool = False
    routed: str = "syntax"  # syntax | semantic | unlabeled
    semantic_split: Optional[int] = None  # mock split index (full-document lines)
    no_trailing_newline: bool = False

    @property
    def prompt_text(self) -> str:
        return "".join(l + "\n" for l in self.prompt_lines)

    @property
    def generation(self) -> str:
        body = "".join(l + "\n" for l in self.expected_lines)
        body += "\n" * self.blank_separator
        excess = "".join(l + "\n" for l in self.excess_lines)
        if self.no_trailing_newline and excess.endswith("\n"):
            excess = excess[:-1]
        return body + excess

    @property
    def full_text(self) -> str:
        return self.prompt_text + self.generation

    @property
    def oracle_split(self) -> Optional[int]:
        """Last expected line index in the full document (syntax fixtures)."""
        if self.routed != "syntax":
            return self.semantic_split
        return len(self.prompt_lines) + len(self.expected_lines) - 1

    @property
    def expected_text(self) -> str:
        """What the labeler should report as expected, blanks attached."""
        return (
            self.prompt_text
            + "".join(l + "\n" for l in self.expected_lines)
            + "\n" * (self.blank_separator if self.excess_lines else 0)
        )

    @property
    def first_excess_line(self) -> Optional[str]:
        if not self.excess_lines:
            return None
        line = self.excess_lines[0] + "\n"
        if self.no_trailing_newline and len(self.excess_lines) == 1:
            line = line[:-1]
        return line

    def prompt_record(self) -> PromptRecord:
        return PromptRecord(
            id=self.id, language=self.language,
            prompt_text=self.prompt_text, source="fixture",
        )

    def generation_record(self, token_chars: int = 4) -> GenerationRecord:
        text = self.generation
        steps = []
        pos = 0
        index = 0
        while pos < len(text):
            steps.append(TokenStep(index=index, text=text[pos : pos + token_chars]))
            pos += token_chars
            index += 1
        return GenerationRecord(
            prompt_id=self.id, model_name="fixture", steps=steps,
            max_new_tokens_used=max(len(steps), 1),
        )


FIXTURES: list[LabelFixture] = []


def _add(fx: LabelFixture) -> None:
    FIXTURES.append(fx)


# --------------------------------------------------------------------------
# python
# --------------------------------------------------------------------------

_PY_PROMPT = [
    "def min_cost(cost, m, n):",
    "    # Write a function to find the minimum cost path.",
    "    # >>> min_cost([[1, 2], [3, 4]], 1, 1)",
]

_add(LabelFixture(
    id="py_extra_function", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    total = cost[0][0] + cost[m][n]",
        "    return total",
    ],
    excess_lines=[
        "def unrelated(values):",
        "    return sum(values)",
    ],
    excess_type=EXCESS_FUNCTIONS,
))

_add(LabelFixture(
    id="py_trailing_tests", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    best = min(cost[0][0], cost[m][n])",
        "    return best",
    ],
    excess_lines=[
        "# Test cases",
        "print(min_cost([[1, 2], [3, 4]], 1, 1))",
        "print(min_cost([[5]], 0, 0))",
    ],
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="py_comments_after_code", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    return cost[m][n]",
    ],
    excess_lines=[
        "# The function returns the minimum cost.",
        "# The function returns the minimum cost.",
        "# The function returns the minimum cost.",
    ],
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="py_one_helper", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    grid = prepare(cost)",
        "    return grid[m][n]",
        "",
        "def prepare(cost):",
        "    return [row[:] for row in cost]",
    ],
    excess_lines=[
        "def unused(a):",
        "    return a",
    ],
    helpers=1,
))

_add(LabelFixture(
    id="py_two_helper_chain", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    return walk(cost, m, n)",
        "",
        "def walk(cost, m, n):",
        "    return cell(cost, m, n)",
        "",
        "def cell(cost, m, n):",
        "    return cost[m][n]",
    ],
    excess_lines=[
        "print(min_cost([[1]], 0, 0))",
    ],
    helpers=2,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="py_three_helpers", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    return first(cost) + second(m) + third(n)",
        "",
        "def first(cost):",
        "    return cost[0][0]",
        "",
        "def second(m):",
        "    return m",
        "",
        "def third(n):",
        "    return n",
    ],
    excess_lines=[
        "# All helper functions are defined above.",
    ],
    helpers=3,
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="py_recursive_helper", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    return descend(cost, m + n)",
        "",
        "def descend(cost, k):",
        "    if k <= 0:",
        "        return cost[0][0]",
        "    return descend(cost, k - 1)",
    ],
    excess_lines=[
        "def extra():",
        "    pass",
    ],
    helpers=1, recursive=True,
))

_add(LabelFixture(
    id="py_mutual_recursion", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    return even_step(m + n)",
        "",
        "def even_step(k):",
        "    return 0 if k == 0 else odd_step(k - 1)",
        "",
        "def odd_step(k):",
        "    return 1 if k == 0 else even_step(k - 1)",
    ],
    excess_lines=[
        "print(min_cost([[1]], 1, 1))",
    ],
    helpers=2, recursive=True,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="py_helper_in_prompt", language="python",
    prompt_lines=[
        "def clamp(v, lo, hi):",
        "    return max(lo, min(hi, v))",
        "",
        "def min_cost(cost, m, n):",
        "    # Write a function to find the minimum cost path.",
    ],
    expected_lines=[
        "    return clamp(cost[m][n], 0, 100)",
    ],
    excess_lines=[
        "def leftover():",
        "    return None",
    ],
    helpers=1,
))

_add(LabelFixture(
    id="py_nested_name_collision", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    def min_cost(inner):",
        "        return inner",
        "    return min_cost(cost[m][n])",
    ],
    excess_lines=[
        "# done",
    ],
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="py_endless_comments", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[],
    excess_lines=[
        "    # The cost is minimal when the path is minimal.",
        "    # The cost is minimal when the path is minimal.",
        "    # The cost is minimal when the path is minimal.",
    ],
    blank_separator=0,
    excess_type=EXCESS_COMMENTS,
    routed="semantic",
    semantic_split=3,  # mock keeps the first generated comment line
))

_add(LabelFixture(
    id="py_semantic_prompt_only", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[],
    excess_lines=[
        "    # no usable code at all",
        "    # no usable code at all",
    ],
    blank_separator=0,
    excess_type=EXCESS_COMMENTS,
    routed="unlabeled",
    semantic_split=None,  # mock replies with prose; no split recoverable
))

_add(LabelFixture(
    id="py_truncated_tail", language="python",
    prompt_lines=_PY_PROMPT,
    expected_lines=[
        "    return cost[m][n] + cost[0][0]",
    ],
    excess_lines=[
        "def chopped(arg",
    ],
    no_trailing_newline=True,
))

# --------------------------------------------------------------------------
# javascript
# --------------------------------------------------------------------------

_JS_PROMPT = [
    "// Write a function to find the minimum cost path.",
    "// minCost([[1, 2], [3, 4]], 1, 1) === 4",
    "function minCost(cost, m, n) {",
]

_add(LabelFixture(
    id="js_extra_function", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  const total = cost[0][0] + cost[m][n];",
        "  return total;",
        "}",
    ],
    excess_lines=[
        "function unrelated(values) {",
        "  return values.length;",
        "}",
    ],
))

_add(LabelFixture(
    id="js_trailing_tests", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "console.log(minCost([[1, 2], [3, 4]], 1, 1));",
        "console.log(minCost([[5]], 0, 0));",
    ],
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="js_comments_after_code", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "// The function returns the minimum cost.",
        "// The function returns the minimum cost.",
    ],
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="js_one_helper", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return lookup(cost, m, n);",
        "}",
        "",
        "function lookup(cost, m, n) {",
        "  return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "function unused(a) {",
        "  return a;",
        "}",
    ],
    helpers=1,
))

_add(LabelFixture(
    id="js_two_helper_chain", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return walk(cost, m, n);",
        "}",
        "",
        "function walk(cost, m, n) {",
        "  return cell(cost, m, n);",
        "}",
        "",
        "function cell(cost, m, n) {",
        "  return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "console.log(minCost([[1]], 0, 0));",
    ],
    helpers=2,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="js_three_helpers", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return first(cost) + second(m) + third(n);",
        "}",
        "",
        "function first(cost) {",
        "  return cost[0][0];",
        "}",
        "",
        "function second(m) {",
        "  return m;",
        "}",
        "",
        "function third(n) {",
        "  return n;",
        "}",
    ],
    excess_lines=[
        "// helpers all defined above",
    ],
    helpers=3,
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="js_recursive_helper", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return descend(cost, m + n);",
        "}",
        "",
        "function descend(cost, k) {",
        "  if (k <= 0) return cost[0][0];",
        "  return descend(cost, k - 1);",
        "}",
    ],
    excess_lines=[
        "function extra() {",
        "  return null;",
        "}",
    ],
    helpers=1, recursive=True,
))

_add(LabelFixture(
    id="js_mutual_recursion", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return evenStep(m + n);",
        "}",
        "",
        "function evenStep(k) {",
        "  return k === 0 ? 0 : oddStep(k - 1);",
        "}",
        "",
        "function oddStep(k) {",
        "  return k === 0 ? 1 : evenStep(k - 1);",
        "}",
    ],
    excess_lines=[
        "console.log(minCost([[1]], 1, 1));",
    ],
    helpers=2, recursive=True,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="js_arrow_helper", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return pick(cost, m, n);",
        "}",
        "",
        "const pick = (cost, m, n) => {",
        "  return cost[m][n];",
        "};",
    ],
    excess_lines=[
        "function leftovers() {",
        "  return 0;",
        "}",
    ],
    helpers=1,
))

_add(LabelFixture(
    id="js_endless_comments", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[],
    excess_lines=[
        "  // the minimum cost is the smallest possible cost",
        "  // the minimum cost is the smallest possible cost",
        "  // the minimum cost is the smallest possible cost",
    ],
    blank_separator=0,
    excess_type=EXCESS_COMMENTS,
    routed="semantic",
    semantic_split=3,
))

_add(LabelFixture(
    id="js_truncated_tail", language="javascript",
    prompt_lines=_JS_PROMPT,
    expected_lines=[
        "  return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "function chopped(arg",
    ],
    no_trailing_newline=True,
))

# --------------------------------------------------------------------------
# go
# --------------------------------------------------------------------------

_GO_PROMPT = [
    "package main",
    "",
    "// Write a function to find the minimum cost path.",
    "func minCost(cost [][]int, m int, n int) int {",
]

_add(LabelFixture(
    id="go_extra_function", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\ttotal := cost[0][0] + cost[m][n]",
        "\treturn total",
        "}",
    ],
    excess_lines=[
        "func unrelated(values []int) int {",
        "\treturn len(values)",
        "}",
    ],
))

_add(LabelFixture(
    id="go_trailing_main", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn cost[m][n]",
        "}",
    ],
    excess_lines=[
        "func main() {",
        "\tprintln(minCost([][]int{{1}}, 0, 0))",
        "}",
    ],
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="go_comments_after_code", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn cost[m][n]",
        "}",
    ],
    excess_lines=[
        "// The function returns the minimum cost.",
        "// The function returns the minimum cost.",
    ],
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="go_one_helper", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn lookup(cost, m, n)",
        "}",
        "",
        "func lookup(cost [][]int, m int, n int) int {",
        "\treturn cost[m][n]",
        "}",
    ],
    excess_lines=[
        "func unused(a int) int {",
        "\treturn a",
        "}",
    ],
    helpers=1,
))

_add(LabelFixture(
    id="go_two_helper_chain", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn walk(cost, m, n)",
        "}",
        "",
        "func walk(cost [][]int, m int, n int) int {",
        "\treturn cell(cost, m, n)",
        "}",
        "",
        "func cell(cost [][]int, m int, n int) int {",
        "\treturn cost[m][n]",
        "}",
    ],
    excess_lines=[
        "func main() {",
        "\tprintln(minCost(nil, 0, 0))",
        "}",
    ],
    helpers=2,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="go_three_helpers", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn first(cost) + second(m) + third(n)",
        "}",
        "",
        "func first(cost [][]int) int {",
        "\treturn cost[0][0]",
        "}",
        "",
        "func second(m int) int {",
        "\treturn m",
        "}",
        "",
        "func third(n int) int {",
        "\treturn n",
        "}",
    ],
    excess_lines=[
        "// helpers all defined above",
    ],
    helpers=3,
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="go_recursive_helper", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn descend(cost, m+n)",
        "}",
        "",
        "func descend(cost [][]int, k int) int {",
        "\tif k <= 0 {",
        "\t\treturn cost[0][0]",
        "\t}",
        "\treturn descend(cost, k-1)",
        "}",
    ],
    excess_lines=[
        "func extra() int {",
        "\treturn 0",
        "}",
    ],
    helpers=1, recursive=True,
))

_add(LabelFixture(
    id="go_mutual_recursion", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn evenStep(m + n)",
        "}",
        "",
        "func evenStep(k int) int {",
        "\tif k == 0 {",
        "\t\treturn 0",
        "\t}",
        "\treturn oddStep(k - 1)",
        "}",
        "",
        "func oddStep(k int) int {",
        "\tif k == 0 {",
        "\t\treturn 1",
        "\t}",
        "\treturn evenStep(k - 1)",
        "}",
    ],
    excess_lines=[
        "func main() {",
        "\tprintln(minCost(nil, 1, 1))",
        "}",
    ],
    helpers=2, recursive=True,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="go_method_excess", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn cost[m][n]",
        "}",
    ],
    excess_lines=[
        "type grid struct{ rows int }",
        "",
        "func (g grid) area() int {",
        "\treturn g.rows",
        "}",
    ],
))

_add(LabelFixture(
    id="go_endless_comments", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[],
    excess_lines=[
        "\t// the minimum cost is the smallest possible cost",
        "\t// the minimum cost is the smallest possible cost",
        "\t// the minimum cost is the smallest possible cost",
    ],
    blank_separator=0,
    excess_type=EXCESS_COMMENTS,
    routed="semantic",
    semantic_split=4,
))

_add(LabelFixture(
    id="go_truncated_tail", language="go",
    prompt_lines=_GO_PROMPT,
    expected_lines=[
        "\treturn cost[m][n]",
        "}",
    ],
    excess_lines=[
        "func chopped(arg",
    ],
    no_trailing_newline=True,
))

# --------------------------------------------------------------------------
# cpp
# --------------------------------------------------------------------------

_CPP_PROMPT = [
    "#include <bits/stdc++.h>",
    "using namespace std;",
    "",
    "// Write a function to find the minimum cost path.",
    "int min_cost(int cost[10][10], int m, int n) {",
]

_add(LabelFixture(
    id="cpp_extra_function", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    int total = cost[0][0] + cost[m][n];",
        "    return total;",
        "}",
    ],
    excess_lines=[
        "int unrelated(int values) {",
        "    return values;",
        "}",
    ],
))

_add(LabelFixture(
    id="cpp_trailing_main", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "int main() {",
        "    int cost[10][10] = {{1}};",
        "    cout << min_cost(cost, 0, 0) << endl;",
        "    return 0;",
        "}",
    ],
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="cpp_comments_after_code", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "// The function returns the minimum cost.",
        "// The function returns the minimum cost.",
    ],
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="cpp_one_helper", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return lookup(cost, m, n);",
        "}",
        "",
        "int lookup(int cost[10][10], int m, int n) {",
        "    return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "int unused(int a) {",
        "    return a;",
        "}",
    ],
    helpers=1,
))

_add(LabelFixture(
    id="cpp_two_helper_chain", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return walk(cost, m, n);",
        "}",
        "",
        "int walk(int cost[10][10], int m, int n) {",
        "    return cell(cost, m, n);",
        "}",
        "",
        "int cell(int cost[10][10], int m, int n) {",
        "    return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "int main() {",
        "    return 0;",
        "}",
    ],
    helpers=2,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="cpp_three_helpers", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return first(cost) + second(m) + third(n);",
        "}",
        "",
        "int first(int cost[10][10]) {",
        "    return cost[0][0];",
        "}",
        "",
        "int second(int m) {",
        "    return m;",
        "}",
        "",
        "int third(int n) {",
        "    return n;",
        "}",
    ],
    excess_lines=[
        "// helpers all defined above",
    ],
    helpers=3,
    excess_type=EXCESS_COMMENTS,
))

_add(LabelFixture(
    id="cpp_recursive_helper", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return descend(cost, m + n);",
        "}",
        "",
        "int descend(int cost[10][10], int k) {",
        "    if (k <= 0) return cost[0][0];",
        "    return descend(cost, k - 1);",
        "}",
    ],
    excess_lines=[
        "int extra() {",
        "    return 0;",
        "}",
    ],
    helpers=1, recursive=True,
))

_add(LabelFixture(
    id="cpp_mutual_recursion", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return even_step(m + n);",
        "}",
        "",
        "int even_step(int k) {",
        "    return k == 0 ? 0 : odd_step(k - 1);",
        "}",
        "",
        "int odd_step(int k) {",
        "    return k == 0 ? 1 : even_step(k - 1);",
        "}",
    ],
    excess_lines=[
        "int main() {",
        "    return 0;",
        "}",
    ],
    helpers=2, recursive=True,
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="cpp_vector_types", language="cpp",
    prompt_lines=[
        "#include <vector>",
        "",
        "// Write a function summing a vector.",
        "std::vector<int> scaled(std::vector<int>& v, int k) {",
    ],
    expected_lines=[
        "    std::vector<int> out;",
        "    for (int x : v) out.push_back(x * k);",
        "    return out;",
        "}",
    ],
    excess_lines=[
        "int main() {",
        "    return 0;",
        "}",
    ],
    excess_type=EXCESS_TESTS,
))

_add(LabelFixture(
    id="cpp_endless_comments", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[],
    excess_lines=[
        "    // the minimum cost is the smallest possible cost",
        "    // the minimum cost is the smallest possible cost",
        "    // the minimum cost is the smallest possible cost",
    ],
    blank_separator=0,
    excess_type=EXCESS_COMMENTS,
    routed="semantic",
    semantic_split=5,
))

_add(LabelFixture(
    id="cpp_truncated_tail", language="cpp",
    prompt_lines=_CPP_PROMPT,
    expected_lines=[
        "    return cost[m][n];",
        "}",
    ],
    excess_lines=[
        "int chopped(int arg",
    ],
    no_trailing_newline=True,
))


def syntax_fixtures() -> list[LabelFixture]:
    return [f for f in FIXTURES if f.routed == "syntax"]


def semantic_fixtures() -> list[LabelFixture]:
    return [f for f in FIXTURES if f.routed in ("semantic", "unlabeled")]
