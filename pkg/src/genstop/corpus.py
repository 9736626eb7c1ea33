"""Data model and JSONL serialization for prompts, generations, and token labels.

Three file formats, all line-delimited JSON:

* ``prompts.jsonl``     -- one prompt per line.
* ``generations.jsonl`` -- one raw generation per line, token steps with
  optional hidden-state vectors.
* ``labels.jsonl``      -- header line ``{"feature_dim": d}`` followed by one
  labeled token per line.

Hidden states are stored as plain f32 arrays. Runtimes computing in 16-bit
formats must up-convert before export.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

SUPPORTED_LANGUAGES = ("python", "javascript", "go", "cpp")

LABEL_CONTINUE = "continue"
LABEL_STOP = "stop"


class SchemaError(ValueError):
    """A record violates the file schema or a structural invariant."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class PromptRecord:
    """A partial-code sampling prompt: signature, requirement comment, tests."""

    id: str
    language: str
    prompt_text: str
    source: str = ""

    def __post_init__(self):
        if self.language not in SUPPORTED_LANGUAGES:
            raise SchemaError(
                f"prompt {self.id!r}: unsupported language {self.language!r} "
                f"(expected one of {SUPPORTED_LANGUAGES})"
            )
        if not self.prompt_text:
            raise SchemaError(f"prompt {self.id!r}: empty prompt_text")


@dataclass(frozen=True)
class TokenStep:
    """One generated token. ``index`` counts from 0, prompt tokens excluded."""

    index: int
    text: str
    hidden: Optional[np.ndarray] = None
    is_eos: bool = False

    def __post_init__(self):
        if self.index < 0:
            raise SchemaError(f"token index {self.index} is negative")
        if self.hidden is not None:
            arr = np.asarray(self.hidden, dtype=np.float32)
            object.__setattr__(self, "hidden", arr)


@dataclass
class GenerationRecord:
    """A raw generation: ordered token steps plus sampling metadata."""

    prompt_id: str
    model_name: str
    steps: list[TokenStep]
    max_new_tokens_used: int
    pass_outcome: Optional[bool] = None

    def __post_init__(self):
        validate_steps(self.steps, record_id=self.prompt_id)
        if self.max_new_tokens_used <= 0:
            raise SchemaError(
                f"record {self.prompt_id!r}: max_new_tokens_used must be positive"
            )
        if len(self.steps) > self.max_new_tokens_used:
            raise SchemaError(
                f"record {self.prompt_id!r}: {len(self.steps)} steps exceeds "
                f"max_new_tokens_used={self.max_new_tokens_used}"
            )

    @property
    def output_text(self) -> str:
        """The raw output, byte-exact concatenation of step texts."""
        return "".join(s.text for s in self.steps)

    @property
    def feature_dim(self) -> Optional[int]:
        if self.steps and self.steps[0].hidden is not None:
            return int(self.steps[0].hidden.shape[0])
        return None

    @property
    def ends_with_eos(self) -> bool:
        return bool(self.steps) and self.steps[-1].is_eos

    def hidden_matrix(self) -> np.ndarray:
        """All hidden vectors stacked as an (n_steps, d) f32 matrix."""
        if self.feature_dim is None:
            raise SchemaError(f"record {self.prompt_id!r} carries no hidden states")
        return np.stack([s.hidden for s in self.steps]).astype(np.float32, copy=False)


def validate_steps(steps: list[TokenStep], record_id: str = "?") -> None:
    """Enforce the per-record step invariants.

    Indices consecutive from 0, hidden all-or-none with one dimension, and
    at most one EOS flag which must sit on the final step.
    """
    dim: Optional[int] = None
    has_hidden: Optional[bool] = None
    for pos, step in enumerate(steps):
        if step.index != pos:
            raise SchemaError(
                f"record {record_id!r}: step index {step.index} at position {pos} "
                "(indices must be consecutive from 0)"
            )
        hidden_present = step.hidden is not None
        if has_hidden is None:
            has_hidden = hidden_present
        elif hidden_present != has_hidden:
            raise SchemaError(
                f"record {record_id!r}: step {pos} {'has' if hidden_present else 'lacks'} "
                "a hidden vector while earlier steps differ"
            )
        if hidden_present:
            d = int(step.hidden.shape[0])
            if dim is None:
                dim = d
            elif d != dim:
                raise SchemaError(
                    f"record {record_id!r}: hidden dim {d} at step {pos} != {dim}"
                )
        if step.is_eos and pos != len(steps) - 1:
            raise SchemaError(
                f"record {record_id!r}: is_eos on step {pos}, which is not the final step"
            )


@dataclass
class LabeledTokenDataset:
    """Per-token training data: hidden vector, continue/stop label, provenance."""

    feature_dim: int
    features: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), np.float32))
    labels: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))
    record_ids: list[str] = field(default_factory=list)
    token_indices: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float32)
        if self.features.size == 0:
            self.features = self.features.reshape(0, self.feature_dim)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.shape != (len(self.labels), self.feature_dim):
            raise SchemaError(
                f"feature matrix shape {self.features.shape} does not match "
                f"{len(self.labels)} labels x dim {self.feature_dim}"
            )
        if len(self.record_ids) != len(self.labels) or len(self.token_indices) != len(self.labels):
            raise SchemaError("record_ids/token_indices length mismatch")
        seen = set()
        for rid, tix in zip(self.record_ids, self.token_indices):
            key = (rid, tix)
            if key in seen:
                raise SchemaError(f"duplicate entry for record {rid!r} token {tix}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_stop(self) -> int:
        return int(self.labels.sum())

    @property
    def n_continue(self) -> int:
        return len(self) - self.n_stop

    def has_both_classes(self) -> bool:
        return self.n_stop > 0 and self.n_continue > 0


def assign_record_ids(records: Iterable[GenerationRecord]) -> list[str]:
    """Stable unique record ids: the prompt id, with #n appended for resamples."""
    counts: dict[str, int] = {}
    ids = []
    for rec in records:
        n = counts.get(rec.prompt_id, 0)
        counts[rec.prompt_id] = n + 1
        ids.append(rec.prompt_id if n == 0 else f"{rec.prompt_id}#{n}")
    return ids


# ---------------------------------------------------------------------------
# JSONL readers / writers
# ---------------------------------------------------------------------------

def _load_json_line(raw: str, lineno: int) -> dict:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON ({exc.msg})", line=lineno) from exc
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object", line=lineno)
    return obj


def _require(obj: dict, key: str, types, lineno: int):
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", line=lineno)
    value = obj[key]
    if not isinstance(value, types):
        raise SchemaError(
            f"field {key!r} has type {type(value).__name__}", line=lineno
        )
    return value


def read_prompts(path) -> list[PromptRecord]:
    prompts = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            obj = _load_json_line(raw, lineno)
            try:
                prompts.append(
                    PromptRecord(
                        id=_require(obj, "id", str, lineno),
                        language=_require(obj, "language", str, lineno),
                        prompt_text=_require(obj, "prompt_text", str, lineno),
                        source=obj.get("source", "") or "",
                    )
                )
            except SchemaError as exc:
                if exc.line is None:
                    raise SchemaError(str(exc), line=lineno) from exc
                raise
    return prompts


def write_prompts(path, prompts: Iterable[PromptRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in prompts:
            fh.write(json.dumps({
                "id": p.id,
                "language": p.language,
                "prompt_text": p.prompt_text,
                "source": p.source,
            }) + "\n")


def _step_from_json(obj: dict, pos: int, lineno: int) -> TokenStep:
    index = _require(obj, "index", int, lineno)
    text = _require(obj, "text", str, lineno)
    hidden = obj.get("hidden")
    if hidden is not None:
        if not isinstance(hidden, list):
            raise SchemaError(f"step {pos}: field 'hidden' must be a list or null", line=lineno)
        hidden = np.asarray(hidden, dtype=np.float32)
    is_eos = obj.get("is_eos", False)
    if not isinstance(is_eos, bool):
        raise SchemaError(f"step {pos}: field 'is_eos' must be a boolean", line=lineno)
    return TokenStep(index=index, text=text, hidden=hidden, is_eos=is_eos)


def read_generation_records(path) -> list[GenerationRecord]:
    """Read ``generations.jsonl``, validating every record invariant.

    Errors name the offending line (and field where possible).
    """
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            obj = _load_json_line(raw, lineno)
            steps_raw = _require(obj, "steps", list, lineno)
            steps = [
                _step_from_json(s, pos, lineno) if isinstance(s, dict)
                else _raise_step_type(pos, lineno)
                for pos, s in enumerate(steps_raw)
            ]
            try:
                record = GenerationRecord(
                    prompt_id=_require(obj, "prompt_id", str, lineno),
                    model_name=_require(obj, "model_name", str, lineno),
                    steps=steps,
                    max_new_tokens_used=_require(obj, "max_new_tokens_used", int, lineno),
                    pass_outcome=obj.get("pass_outcome"),
                )
            except SchemaError as exc:
                if exc.line is None:
                    raise SchemaError(str(exc), line=lineno) from exc
                raise
            if record.pass_outcome is not None and not isinstance(record.pass_outcome, bool):
                raise SchemaError("field 'pass_outcome' must be a boolean or null", line=lineno)
            records.append(record)
    return records


def _raise_step_type(pos: int, lineno: int):
    raise SchemaError(f"step {pos} is not a JSON object", line=lineno)


def write_generation_records(path, records: Iterable[GenerationRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            obj = {
                "prompt_id": rec.prompt_id,
                "model_name": rec.model_name,
                "max_new_tokens_used": rec.max_new_tokens_used,
                "pass_outcome": rec.pass_outcome,
                "steps": [
                    {
                        "index": s.index,
                        "text": s.text,
                        "hidden": None if s.hidden is None else [float(v) for v in s.hidden],
                        "is_eos": s.is_eos,
                    }
                    for s in rec.steps
                ],
            }
            fh.write(json.dumps(obj) + "\n")


def read_labeled_dataset(path) -> LabeledTokenDataset:
    """Read ``labels.jsonl``: a feature_dim header then one entry per line."""
    path = Path(path)
    features = []
    labels = []
    record_ids = []
    token_indices = []
    feature_dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            obj = _load_json_line(raw, lineno)
            if feature_dim is None:
                feature_dim = _require(obj, "feature_dim", int, lineno)
                if feature_dim <= 0:
                    raise SchemaError("feature_dim must be positive", line=lineno)
                continue
            label = _require(obj, "label", str, lineno)
            if label not in (LABEL_CONTINUE, LABEL_STOP):
                raise SchemaError(f"unknown label {label!r}", line=lineno)
            feat = _require(obj, "feature", list, lineno)
            if len(feat) != feature_dim:
                raise SchemaError(
                    f"feature length {len(feat)} != feature_dim {feature_dim}", line=lineno
                )
            features.append(np.asarray(feat, dtype=np.float32))
            labels.append(1 if label == LABEL_STOP else 0)
            record_ids.append(_require(obj, "record_id", str, lineno))
            token_indices.append(_require(obj, "token_index", int, lineno))
    if feature_dim is None:
        raise SchemaError(f"{path}: missing feature_dim header line")
    features_arr = (
        np.stack(features) if features else np.zeros((0, feature_dim), np.float32)
    )
    return LabeledTokenDataset(
        feature_dim=feature_dim,
        features=features_arr,
        labels=np.asarray(labels, dtype=np.int64),
        record_ids=record_ids,
        token_indices=token_indices,
    )


def write_labeled_dataset(path, dataset: LabeledTokenDataset) -> None:
    """Write ``labels.jsonl``. Read-back yields an equal dataset, floats bitwise."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"feature_dim": dataset.feature_dim}) + "\n")
        for i in range(len(dataset)):
            fh.write(json.dumps({
                "record_id": dataset.record_ids[i],
                "token_index": dataset.token_indices[i],
                "label": LABEL_STOP if dataset.labels[i] == 1 else LABEL_CONTINUE,
                # float32 -> float is exact, so the JSON round-trip is bitwise
                "feature": [float(v) for v in dataset.features[i]],
            }) + "\n")
