"""Partition raw generations into expected and excess code.

The syntax path parses the prompt+output concatenation, locates the target
function from the prompt's signature, and takes everything up to the last
line reachable through the target's call graph as expected. When that leaves
nothing beyond the prompt (e.g. the model produced only comments), a
semantic fallback client may supply the split instead. Records neither path
can split are left unlabeled and excluded from training data.

Of the excess region only the first non-blank line is retained for labeling;
everything after it is discarded. Blank lines between the expected code and
that first excess line are attached to the expected side.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from genstop import corpus
from genstop.corpus import GenerationRecord, LabeledTokenDataset, PromptRecord
from genstop.parsing import (
    FunctionNode,
    SourceTree,
    find_headers,
    mask_source,
    normalize_ws,
    parse_source,
    split_lines,
)

log = logging.getLogger(__name__)

STATUS_SYNTAX = "syntax_labeled"
STATUS_SEMANTIC = "semantic_labeled"
STATUS_UNLABELED = "unlabeled"


class NoSignatureError(ValueError):
    """The prompt contains no function-definition header."""


class TargetNotFoundError(LookupError):
    """No function node in the tree matches the prompt signature."""


class AlignmentError(ValueError):
    """Token offsets do not line up with the labeled text regions."""


@dataclass(frozen=True)
class Signature:
    language: str
    function_name: str
    full_text: str

    def __post_init__(self):
        if not self.function_name:
            raise ValueError("empty function name")
        if self.function_name not in self.full_text:
            raise ValueError(
                f"signature text does not contain function name {self.function_name!r}"
            )


@dataclass(frozen=True)
class FunctionSpan:
    name: str
    first_line: int
    last_line: int

    def __post_init__(self):
        if self.first_line > self.last_line:
            raise ValueError(f"span {self.first_line}..{self.last_line} is inverted")


@dataclass
class LabelOutcome:
    """How one generation was split. Texts cover prompt+output jointly."""

    status: str
    expected_text: Optional[str] = None
    first_excess_line: Optional[str] = None
    split_line_index: Optional[int] = None
    prompt_length: int = 0
    diagnostic: str = ""

    @property
    def labeled(self) -> bool:
        return self.status != STATUS_UNLABELED

    @property
    def has_excess(self) -> bool:
        return bool(self.first_excess_line)

    def expected_generation(self) -> str:
        """The expected portion with the prompt prefix removed."""
        if self.expected_text is None:
            raise ValueError("outcome is unlabeled")
        return self.expected_text[self.prompt_length:]


def extract_signature(prompt_text: str, language: str) -> Signature:
    """The last function-definition header in the prompt (the target)."""
    headers = find_headers(prompt_text, language)
    if not headers:
        raise NoSignatureError(f"no function header found in prompt ({language})")
    name, _line, text = headers[-1]
    return Signature(language=language, function_name=name, full_text=text)


def locate_target_function(
    tree: SourceTree,
    sig: Signature,
    prompt_last_line: Optional[int] = None,
) -> FunctionSpan:
    """Find the function node matching the prompt signature.

    Whitespace-normalized full-text match wins over name-only match; the node
    must start within the prompt region when its extent is given.
    """

    def in_prompt(fn: FunctionNode) -> bool:
        return prompt_last_line is None or fn.first_line <= prompt_last_line

    want = normalize_ws(sig.full_text)
    exact = [f for f in tree.functions if normalize_ws(f.header_text) == want and in_prompt(f)]
    if exact:
        return _span(exact[-1])
    by_name = [f for f in tree.functions if f.name == sig.function_name and in_prompt(f)]
    if by_name:
        return _span(by_name[-1])
    raise TargetNotFoundError(f"no node matching signature {sig.function_name!r}")


def _span(fn: FunctionNode) -> FunctionSpan:
    return FunctionSpan(name=fn.name, first_line=fn.first_line, last_line=fn.last_line)


def reachable_last_line(tree: SourceTree, target: FunctionSpan) -> int:
    """Max last line over the target and everything it transitively calls.

    Callee names resolve against top-level definitions only; unresolved
    names (library calls, methods) are ignored. A visited set guarantees
    termination under recursion.
    """
    by_name = tree.top_level_by_name()
    target_nodes = [
        f
        for f in tree.functions
        if f.first_line == target.first_line and f.name == target.name
    ]
    worklist: list[FunctionNode] = list(target_nodes)
    visited = {id(f) for f in worklist}
    last = target.last_line
    while worklist:
        node = worklist.pop()
        last = max(last, node.last_line)
        for name in node.called_names():
            for callee in by_name.get(name, ()):
                if id(callee) not in visited:
                    visited.add(id(callee))
                    worklist.append(callee)
    return last


def split_output(raw_output: str, split_line_index: int) -> tuple[str, str]:
    """Split after line ``split_line_index``; parts rejoin byte-exactly."""
    lines = split_lines(raw_output)
    if not 0 <= split_line_index < len(lines):
        raise IndexError(
            f"split index {split_line_index} out of range for {len(lines)} lines"
        )
    expected = "".join(lines[: split_line_index + 1])
    return expected, raw_output[len(expected):]


def first_excess_line(excess: str) -> str:
    """First non-blank line of the excess, terminator included."""
    for line in split_lines(excess):
        if line.strip():
            return line
    return ""


def _prompt_last_line(prompt_text: str) -> int:
    return max(len(split_lines(prompt_text)) - 1, 0)


def _beyond_prompt_literal(expected: str, prompt_text: str) -> bool:
    """Does the expected portion add any content past the prompt?"""
    return (
        expected.startswith(prompt_text)
        and expected[len(prompt_text):].strip() != ""
    )


def _beyond_prompt_code(expected: str, prompt_text: str, language: str) -> bool:
    """Does the expected portion add real code past the prompt?

    Comments and string contents are masked out first, so a comments-only
    continuation (the endless-comments failure shape, which never closes a
    brace body) counts as nothing and routes to the semantic fallback in
    every language. The semantic analyzer's own split is held only to the
    literal test: it may legitimately keep a comment line.
    """
    if not expected.startswith(prompt_text):
        return False
    masked = mask_source(expected, language)
    return masked[len(prompt_text):].strip() != ""


def _finish(
    status: str, full_text: str, prompt_text: str, split_index: int
) -> LabelOutcome:
    expected, excess = split_output(full_text, split_index)
    first = first_excess_line(excess)
    if first:
        # leading blank lines carry no stop signal; attach them to expected
        blank_len = excess.index(first)
        expected += excess[:blank_len]
    else:
        expected = full_text
    return LabelOutcome(
        status=status,
        expected_text=expected,
        first_excess_line=first or None,
        split_line_index=split_index,
        prompt_length=len(prompt_text),
    )


def label_generation(
    prompt: PromptRecord,
    record: GenerationRecord,
    semantic=None,
) -> LabelOutcome:
    """Run the labeling pipeline for one generation.

    ``semantic`` is an optional callable ``(full_text, prompt_text) ->
    Optional[int]`` returning a split line index (see
    genstop.semantic.SemanticClient.truncate). Transport errors surface as
    an unlabeled outcome with a diagnostic, never as an exception.
    """
    full_text = prompt.prompt_text + record.output_text
    prompt_last = _prompt_last_line(prompt.prompt_text)
    n_lines = len(split_lines(full_text))

    split_index: Optional[int] = None
    try:
        sig = extract_signature(prompt.prompt_text, prompt.language)
        tree = parse_source(full_text, prompt.language)
        target = locate_target_function(tree, sig, prompt_last_line=prompt_last)
        split_index = reachable_last_line(tree, target)
    except (NoSignatureError, TargetNotFoundError) as exc:
        log.debug("syntax path failed for %s: %s", record.prompt_id, exc)

    if split_index is not None:
        expected, _ = split_output(full_text, split_index)
        if _beyond_prompt_code(expected, prompt.prompt_text, prompt.language):
            return _finish(STATUS_SYNTAX, full_text, prompt.prompt_text, split_index)

    if semantic is None:
        return LabelOutcome(
            status=STATUS_UNLABELED,
            prompt_length=len(prompt.prompt_text),
            diagnostic="syntax analysis found nothing beyond the prompt; no semantic client",
        )

    try:
        sem_index = semantic(full_text, prompt.prompt_text)
    except Exception as exc:
        return LabelOutcome(
            status=STATUS_UNLABELED,
            prompt_length=len(prompt.prompt_text),
            diagnostic=f"semantic client error: {exc}",
        )
    if sem_index is not None and 0 <= sem_index < n_lines:
        expected, _ = split_output(full_text, sem_index)
        if _beyond_prompt_literal(expected, prompt.prompt_text):
            return _finish(STATUS_SEMANTIC, full_text, prompt.prompt_text, sem_index)
    return LabelOutcome(
        status=STATUS_UNLABELED,
        prompt_length=len(prompt.prompt_text),
        diagnostic="semantic analysis also found nothing beyond the prompt",
    )


LabeledEntry = tuple[np.ndarray, int, str, int]  # feature, label, record_id, token_index


def build_token_labels(
    outcome: LabelOutcome, record: GenerationRecord
) -> list[LabeledEntry]:
    """Map generated tokens to continue/stop labels by character offset.

    Tokens inside the expected region (past the prompt) label continue,
    tokens inside the first excess line label stop, later tokens are
    discarded. A token straddling a boundary follows its first character.
    """
    if not outcome.labeled:
        raise ValueError("cannot build labels from an unlabeled outcome")
    if record.feature_dim is None:
        raise ValueError(f"record {record.prompt_id!r} has no hidden vectors")

    expected_end = len(outcome.expected_text)
    stop_end = expected_end + len(outcome.first_excess_line or "")
    full_len = outcome.prompt_length + len(record.output_text)
    if stop_end > full_len or not (
        outcome.prompt_length <= expected_end <= full_len
    ):
        raise AlignmentError(
            f"record {record.prompt_id!r}: label regions exceed the reconstructed text"
        )

    entries: list[LabeledEntry] = []
    offset = outcome.prompt_length
    for step in record.steps:
        start = offset
        offset += len(step.text)
        if start >= stop_end:
            break
        if step.is_eos:
            continue
        label = 0 if start < expected_end else 1
        entries.append((step.hidden, label, record.prompt_id, step.index))
    return entries


@dataclass
class LabelReportEntry:
    record_id: str
    status: str
    split_line_index: Optional[int]
    diagnostic: str = ""

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "status": self.status,
            "split_line_index": self.split_line_index,
        }


def label_corpus(
    prompts: list[PromptRecord],
    records: list[GenerationRecord],
    semantic=None,
    jobs: int = 1,
) -> tuple[Optional[LabeledTokenDataset], list[LabelOutcome], list[LabelReportEntry]]:
    """Label every record against its prompt and assemble the training set.

    Records without hidden states still get outcomes (useful for replay
    oracles) but contribute no dataset entries. Returns (dataset or None
    when no record carries features, outcomes, report entries). Labeling is
    stateless per record, so ``jobs`` > 1 fans the records over a thread
    pool (mainly useful when a semantic client is doing network calls);
    results keep record order either way.
    """
    by_id = {p.id: p for p in prompts}
    rids = corpus.assign_record_ids(records)

    def label_one(record: GenerationRecord) -> LabelOutcome:
        prompt = by_id.get(record.prompt_id)
        if prompt is None:
            return LabelOutcome(
                status=STATUS_UNLABELED,
                diagnostic=f"no prompt with id {record.prompt_id!r}",
            )
        return label_generation(prompt, record, semantic=semantic)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(label_one, records))
    else:
        outcomes = [label_one(r) for r in records]

    report: list[LabelReportEntry] = []
    features: list[np.ndarray] = []
    labels: list[int] = []
    record_ids: list[str] = []
    token_indices: list[int] = []
    feature_dim: Optional[int] = None

    for rid, record, outcome in zip(rids, records, outcomes):
        report.append(
            LabelReportEntry(
                record_id=rid,
                status=outcome.status,
                split_line_index=outcome.split_line_index,
                diagnostic=outcome.diagnostic,
            )
        )
        if not outcome.labeled or record.feature_dim is None:
            continue
        if feature_dim is None:
            feature_dim = record.feature_dim
        elif feature_dim != record.feature_dim:
            raise corpus.SchemaError(
                f"record {rid!r}: hidden dim {record.feature_dim} "
                f"!= corpus dim {feature_dim}"
            )
        try:
            entries = build_token_labels(outcome, record)
        except AlignmentError as exc:
            log.warning("skipping record: %s", exc)
            report[-1].diagnostic = str(exc)
            continue
        for feat, label, _rid, tix in entries:
            features.append(feat)
            labels.append(label)
            record_ids.append(rid)
            token_indices.append(tix)

    dataset = None
    if feature_dim is not None:
        dataset = LabeledTokenDataset(
            feature_dim=feature_dim,
            features=np.stack(features) if features else np.zeros((0, feature_dim), np.float32),
            labels=np.asarray(labels, dtype=np.int64),
            record_ids=record_ids,
            token_indices=token_indices,
        )
    return dataset, outcomes, report
