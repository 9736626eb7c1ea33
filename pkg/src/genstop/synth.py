"""Synthetic desk-scale corpora with known expected/excess boundaries.

Each synthetic record is a real parseable program in one of the four
supported languages: a partial-code prompt, an expected completion
(optionally with transitively called or recursive helpers), and one of
three excess shapes (extra functions, trailing test code, repeated
comments). The generated text is chunked into small tokens and paired with
Gaussian stand-in hidden states drawn by ground-truth side, so the full
label -> train -> replay pipeline can run end to end with a known answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from genstop.corpus import GenerationRecord, PromptRecord, TokenStep
from genstop.simulate import SynthConfig, synth_features

EXCESS_FUNCTIONS = "functions"
EXCESS_TESTS = "tests"
EXCESS_COMMENTS = "comments"
EXCESS_TYPES = (EXCESS_FUNCTIONS, EXCESS_TESTS, EXCESS_COMMENTS)

LANGUAGES = ("python", "javascript", "go", "cpp")


@dataclass(frozen=True)
class SynthCorpusConfig:
    n_records: int = 40
    languages: tuple[str, ...] = ("python",)
    feature_dim: int = 32
    class_separation: float = 8.0
    noise_scale: float = 1.0
    seed: int = 0
    excess_char_ratio: float = 0.7  # excess chars / generated chars
    min_excess_chars: int = 0  # floor for long-stream scenarios
    eos_fraction: float = 0.0  # records that end cleanly with EOS, no excess
    max_token_chars: int = 6
    with_hidden: bool = True

    def __post_init__(self):
        if not 0 <= self.excess_char_ratio < 1:
            raise ValueError("excess_char_ratio must be in [0, 1)")
        for lang in self.languages:
            if lang not in LANGUAGES:
                raise ValueError(f"unknown language {lang!r}")


@dataclass
class SynthRecord:
    """One synthetic generation plus its ground truth."""

    prompt: PromptRecord
    record: GenerationRecord
    expected_generation: str  # past the prompt, attached blanks included
    first_excess_line: str  # "" when the record has no excess
    stop_token_indices: set[int] = field(default_factory=set)
    excess_type: Optional[str] = None

    @property
    def boundary(self) -> int:
        return len(self.expected_generation)


# --- program text templates ------------------------------------------------

def _python_parts(name: str, helpers: int, recursive: bool, body_lines: int):
    prompt = (
        f"def {name}(x):\n"
        f"    # Write a function returning the transformed value of x.\n"
        f"    # >>> {name}(3)\n"
    )
    body = [f"    v0 = x + {i + 1}\n" for i in range(body_lines)]
    last = f"v{body_lines - 1}" if body_lines else "x"
    helper_defs = []
    if helpers > 0:
        body.append(f"    return {name}_h0({last})\n")
        for h in range(helpers):
            callee = f"{name}_h{h + 1}" if h + 1 < helpers else None
            inner = (
                f"    return {callee}(a + {h})\n"
                if callee
                else (
                    f"    return {name}_h{h}(a - 1) if a > 0 else 0\n"
                    if recursive
                    else f"    return a * {h + 2}\n"
                )
            )
            helper_defs.append(f"\ndef {name}_h{h}(a):\n{inner}")
    else:
        body.append(f"    return {last}\n")
    expected = "".join(body) + "".join(helper_defs)
    excess = {
        EXCESS_FUNCTIONS: f"def {name}_extra(a):\n    return a - 1\n",
        EXCESS_TESTS: f"print({name}(1))\n",
        EXCESS_COMMENTS: "# The function returns the transformed value.\n",
    }
    return prompt, expected, excess


def _javascript_parts(name: str, helpers: int, recursive: bool, body_lines: int):
    prompt = (
        f"// Write a function returning the transformed value of x.\n"
        f"function {name}(x) {{\n"
    )
    body = [f"  const v0 = x + {i + 1};\n" for i in range(body_lines)]
    last = f"v{body_lines - 1}" if body_lines else "x"
    helper_defs = []
    if helpers > 0:
        body.append(f"  return {name}H0({last});\n}}\n")
        for h in range(helpers):
            callee = f"{name}H{h + 1}" if h + 1 < helpers else None
            inner = (
                f"  return {callee}(a + {h});\n"
                if callee
                else (
                    f"  return a > 0 ? {name}H{h}(a - 1) : 0;\n"
                    if recursive
                    else f"  return a * {h + 2};\n"
                )
            )
            helper_defs.append(f"\nfunction {name}H{h}(a) {{\n{inner}}}\n")
    else:
        body.append(f"  return {last};\n}}\n")
    expected = "".join(body) + "".join(helper_defs)
    excess = {
        EXCESS_FUNCTIONS: f"function {name}Extra(a) {{\n  return a - 1;\n}}\n",
        EXCESS_TESTS: f"console.log({name}(1));\n",
        EXCESS_COMMENTS: "// The function returns the transformed value.\n",
    }
    return prompt, expected, excess


def _go_parts(name: str, helpers: int, recursive: bool, body_lines: int):
    prompt = (
        "package main\n\n"
        f"// Write a function returning the transformed value of x.\n"
        f"func {name}(x int) int {{\n"
    )
    body = [f"\tv0 := x + {i + 1}\n" for i in range(body_lines)]
    last = f"v{body_lines - 1}" if body_lines else "x"
    helper_defs = []
    if helpers > 0:
        body.append(f"\treturn {name}H0({last})\n}}\n")
        for h in range(helpers):
            callee = f"{name}H{h + 1}" if h + 1 < helpers else None
            if callee:
                inner = f"\treturn {callee}(a + {h})\n"
            elif recursive:
                inner = f"\tif a > 0 {{\n\t\treturn {name}H{h}(a - 1)\n\t}}\n\treturn 0\n"
            else:
                inner = f"\treturn a * {h + 2}\n"
            helper_defs.append(f"\nfunc {name}H{h}(a int) int {{\n{inner}}}\n")
    else:
        body.append(f"\treturn {last}\n}}\n")
    expected = "".join(body) + "".join(helper_defs)
    excess = {
        EXCESS_FUNCTIONS: f"func {name}Extra(a int) int {{\n\treturn a - 1\n}}\n",
        EXCESS_TESTS: f"func main() {{\n\tprintln({name}(1))\n}}\n",
        EXCESS_COMMENTS: "// The function returns the transformed value.\n",
    }
    return prompt, expected, excess


def _cpp_parts(name: str, helpers: int, recursive: bool, body_lines: int):
    prompt = (
        "#include <iostream>\n\n"
        f"// Write a function returning the transformed value of x.\n"
        f"int {name}(int x) {{\n"
    )
    body = [f"    int v0 = x + {i + 1};\n" for i in range(body_lines)]
    last = f"v{body_lines - 1}" if body_lines else "x"
    helper_defs = []
    if helpers > 0:
        body.append(f"    return {name}_h0({last});\n}}\n")
        for h in range(helpers):
            callee = f"{name}_h{h + 1}" if h + 1 < helpers else None
            if callee:
                inner = f"    return {callee}(a + {h});\n"
            elif recursive:
                inner = f"    return a > 0 ? {name}_h{h}(a - 1) : 0;\n"
            else:
                inner = f"    return a * {h + 2};\n"
            helper_defs.append(f"\nint {name}_h{h}(int a) {{\n{inner}}}\n")
    else:
        body.append(f"    return {last};\n}}\n")
    expected = "".join(body) + "".join(helper_defs)
    excess = {
        EXCESS_FUNCTIONS: f"int {name}_extra(int a) {{\n    return a - 1;\n}}\n",
        EXCESS_TESTS: f"int main() {{\n    std::cout << {name}(1);\n    return 0;\n}}\n",
        EXCESS_COMMENTS: "// The function returns the transformed value.\n",
    }
    return prompt, expected, excess


_PARTS = {
    "python": _python_parts,
    "javascript": _javascript_parts,
    "go": _go_parts,
    "cpp": _cpp_parts,
}


def _chunk(text: str, rng: np.random.Generator, max_chars: int) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        size = int(rng.integers(1, max_chars + 1))
        tokens.append(text[pos : pos + size])
        pos += size
    return tokens


def generate_corpus(config: SynthCorpusConfig) -> list[SynthRecord]:
    rng = np.random.default_rng(config.seed)
    out: list[SynthRecord] = []
    for i in range(config.n_records):
        language = config.languages[i % len(config.languages)]
        name = f"task_{i}"
        helpers = int(rng.integers(0, 4))
        recursive = helpers > 0 and bool(rng.integers(0, 2))
        body_lines = int(rng.integers(1, 4))
        prompt_text, expected_core, excess_lines = _PARTS[language](
            name, helpers, recursive, body_lines
        )
        eos_record = bool(rng.random() < config.eos_fraction)
        excess_type = None if eos_record else EXCESS_TYPES[i % len(EXCESS_TYPES)]

        if eos_record:
            expected_gen = expected_core
            first_line = ""
            tail = ""
        else:
            unit = excess_lines[excess_type]
            blank = "\n"
            expected_gen = expected_core + blank
            first_line = unit[: unit.index("\n") + 1]
            tail = unit[len(first_line):]
            want = config.excess_char_ratio
            floor = max(
                want / (1 - want) * (len(expected_gen) + 1),
                config.min_excess_chars,
            )
            while (len(first_line) + len(tail)) < floor:
                tail += unit if excess_type == EXCESS_COMMENTS else "\n" + unit

        gen_text = expected_gen + first_line + tail
        texts = _chunk(gen_text, rng, config.max_token_chars)
        boundary = len(expected_gen)
        stop_end = boundary + len(first_line)

        steps = []
        stop_indices: set[int] = set()
        truth: list[int] = []
        offset = 0
        for tix, text in enumerate(texts):
            truth.append(0 if offset < boundary else 1)
            if boundary <= offset < stop_end:
                stop_indices.add(tix)
            steps.append(TokenStep(index=tix, text=text, is_eos=False))
            offset += len(text)
        if eos_record:
            truth.append(0)
            steps.append(TokenStep(index=len(steps), text="", is_eos=True))

        if config.with_hidden:
            feats = synth_features(
                truth,
                SynthConfig(
                    feature_dim=config.feature_dim,
                    class_separation=config.class_separation,
                    noise_scale=config.noise_scale,
                    seed=config.seed * 100003 + i,
                ),
            )
            steps = [
                TokenStep(index=s.index, text=s.text, hidden=feats[j], is_eos=s.is_eos)
                for j, s in enumerate(steps)
            ]

        prompt = PromptRecord(
            id=name, language=language, prompt_text=prompt_text, source="synthetic"
        )
        record = GenerationRecord(
            prompt_id=name,
            model_name="synthetic",
            steps=steps,
            max_new_tokens_used=max(len(steps), 1),
            pass_outcome=True,
        )
        out.append(
            SynthRecord(
                prompt=prompt,
                record=record,
                expected_generation=expected_gen,
                first_excess_line=first_line,
                stop_token_indices=stop_indices,
                excess_type=excess_type,
            )
        )
    return out
