"""Replay simulator and metrics: drive the controller over recorded streams.

Replay feeds each record's tokens through the stop classifier and the vote
state machine, materializes the finalized output, and aggregates run
metrics. The baseline for speedup is the same stream scanned with voting
disabled, so EOS and length-cap handling match exactly.

Time is a proxy by default: consumed tokens times a constant per-token
latency. Wall-clock replay time would measure this process, not the decode
cost of a model, so reports label the proxy explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from genstop import _kernels
from genstop.classifier import StopClassifier, stop_probabilities
from genstop.controller import (
    MODE_TOKEN_VOTING,
    REASON_EOS,
    REASON_VOTED_STOP,
    ControllerConfig,
)
from genstop.corpus import GenerationRecord, assign_record_ids

PASS_AT_KS = (1, 3, 5)


@dataclass
class RunMetrics:
    n_records: int
    mean_length: float
    mean_time: float
    speedup: float
    pass_at_k: dict[int, float] = field(default_factory=dict)
    excess_ratio: Optional[float] = None
    pgwe: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "n_records": self.n_records,
            "mean_length": self.mean_length,
            "mean_time": self.mean_time,
            "speedup": self.speedup,
            "pass_at_k": {str(k): v for k, v in sorted(self.pass_at_k.items())},
            "excess_ratio": self.excess_ratio,
            "pgwe": self.pgwe,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RunMetrics":
        return cls(
            n_records=obj["n_records"],
            mean_length=obj["mean_length"],
            mean_time=obj["mean_time"],
            speedup=obj["speedup"],
            pass_at_k={int(k): v for k, v in obj.get("pass_at_k", {}).items()},
            excess_ratio=obj.get("excess_ratio"),
            pgwe=obj.get("pgwe"),
        )


@dataclass
class RecordReplay:
    record_id: str
    consumed: int
    reason: str
    output: str
    baseline_consumed: int
    baseline_reason: str


class OracleVotes:
    """Vote source that replays ground-truth labels instead of a model.

    ``stop_indices`` maps record_id to the token indices labeled stop;
    every other token votes continue with probability 0.
    """

    def __init__(self, stop_indices: dict[str, set[int]]):
        self.stop_indices = stop_indices

    def probabilities(self, record_id: str, record: GenerationRecord) -> np.ndarray:
        stops = self.stop_indices.get(record_id, set())
        p = np.zeros(len(record.steps), dtype=np.float64)
        for i in stops:
            if 0 <= i < len(p):
                p[i] = 1.0
        return p


class NoisyVotes:
    """Wrap a vote source, flipping each token's vote with fixed probability.

    Flips are seeded per record id, so results do not depend on replay order.
    """

    def __init__(self, base, flip_fraction: float, seed: int = 0):
        self.base = base
        self.flip_fraction = flip_fraction
        self.seed = seed

    def probabilities(self, record_id: str, record: GenerationRecord) -> np.ndarray:
        import zlib

        p = np.asarray(self.base.probabilities(record_id, record), dtype=np.float64)
        rng = np.random.default_rng((self.seed, zlib.crc32(record_id.encode())))
        flips = rng.random(len(p)) < self.flip_fraction
        return np.where(flips, 1.0 - p, p)


def _emitted_text(record: GenerationRecord, consumed: int, reason: str) -> str:
    steps = record.steps[:consumed]
    if reason == REASON_EOS:
        steps = steps[:-1]  # the EOS step's surface form is never emitted
    return "".join(s.text for s in steps)


def replay(
    records: Sequence[GenerationRecord],
    model,
    config: ControllerConfig = ControllerConfig(),
    latency_per_token: float = 1.0,
) -> tuple[list[RecordReplay], RunMetrics]:
    """Replay a corpus under the controller and aggregate run metrics.

    ``model`` is a StopClassifier or any object with a
    ``probabilities(record_id, record) -> array`` method (see OracleVotes).
    """
    if not records:
        raise ValueError("empty record set")
    token_mode = config.mode == MODE_TOKEN_VOTING
    record_ids = assign_record_ids(records)
    results: list[RecordReplay] = []
    for rid, rec in zip(record_ids, records):
        if isinstance(model, StopClassifier):
            p_stop = stop_probabilities(model, rec.hidden_matrix())
        else:
            p_stop = np.asarray(model.probabilities(rid, rec), dtype=np.float64)
        if len(p_stop) != len(rec.steps):
            raise ValueError(
                f"record {rid!r}: {len(p_stop)} probabilities for {len(rec.steps)} steps"
            )
        is_eos, char_len, last_nl = _kernels.stream_arrays(rec.steps)
        consumed, reason, trim = _kernels.scan(
            p_stop, is_eos, char_len, last_nl,
            config.stop_threshold, config.max_new_tokens, token_mode,
        )
        output = _emitted_text(rec, consumed, reason)
        if reason == REASON_VOTED_STOP and config.trim_stop_line:
            output = output[:trim]
        base_consumed, base_reason, _ = _kernels.scan(
            np.zeros(len(rec.steps)), is_eos, char_len, last_nl,
            config.stop_threshold, config.max_new_tokens, token_mode,
        )
        results.append(
            RecordReplay(
                record_id=rid,
                consumed=consumed,
                reason=reason,
                output=output,
                baseline_consumed=base_consumed,
                baseline_reason=base_reason,
            )
        )

    treated_tokens = [r.consumed for r in results]
    baseline_tokens = [r.baseline_consumed for r in results]
    pass_at_k = pass_at_k_table(records)
    metrics = RunMetrics(
        n_records=len(results),
        mean_length=float(np.mean(treated_tokens)),
        mean_time=float(np.mean(treated_tokens)) * latency_per_token,
        speedup=compute_speedup(
            float(np.mean(baseline_tokens)) * latency_per_token,
            float(np.mean(treated_tokens)) * latency_per_token,
        ),
        pass_at_k=pass_at_k,
    )
    return results, metrics


def baseline_metrics_from(results: list[RecordReplay], records, latency_per_token: float = 1.0) -> RunMetrics:
    """Metrics for the uncontrolled run embedded in replay results."""
    tokens = [r.baseline_consumed for r in results]
    return RunMetrics(
        n_records=len(results),
        mean_length=float(np.mean(tokens)),
        mean_time=float(np.mean(tokens)) * latency_per_token,
        speedup=1.0,
        pass_at_k=pass_at_k_table(records),
    )


def compute_speedup(baseline_time: float, treated_time: float) -> float:
    if baseline_time <= 0 or treated_time <= 0:
        raise ValueError("times must be positive")
    return baseline_time / treated_time


def compute_er_pgwe(records: Sequence[GenerationRecord], label_outcomes) -> tuple[float, float]:
    """Excess ratio and the fraction that also never emitted EOS.

    ``label_outcomes`` is a parallel sequence of labeling.LabelOutcome.
    """
    if len(records) != len(label_outcomes):
        raise ValueError(
            f"{len(records)} records but {len(label_outcomes)} outcomes"
        )
    if not records:
        raise ValueError("empty record set")
    n_excess = 0
    n_pgwe = 0
    for rec, outcome in zip(records, label_outcomes):
        if outcome is None:
            raise ValueError(f"record {rec.prompt_id!r} has no label outcome")
        if outcome.has_excess:
            n_excess += 1
            if not rec.ends_with_eos:
                n_pgwe += 1
    return n_excess / len(records), n_pgwe / len(records)


def pass_at_k(outcomes: Sequence[Sequence[bool]], k: int) -> float:
    """Fraction of problems whose first k samples contain a pass."""
    if not outcomes:
        raise ValueError("no problems")
    for i, per_problem in enumerate(outcomes):
        if len(per_problem) < k:
            raise ValueError(
                f"problem {i} has {len(per_problem)} samples, fewer than k={k}"
            )
    return sum(any(p[:k]) for p in outcomes) / len(outcomes)


def pass_at_k_table(records: Sequence[GenerationRecord]) -> dict[int, float]:
    """pass@k for k in {1,3,5} where every problem has enough samples."""
    grouped: dict[str, list[bool]] = {}
    for rec in records:
        if rec.pass_outcome is None:
            continue
        grouped.setdefault(rec.prompt_id, []).append(rec.pass_outcome)
    if not grouped:
        return {}
    outcomes = list(grouped.values())
    min_samples = min(len(o) for o in outcomes)
    return {k: pass_at_k(outcomes, k) for k in PASS_AT_KS if k <= min_samples}


# ---------------------------------------------------------------------------
# Synthetic hidden states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SynthConfig:
    feature_dim: int = 32
    class_separation: float = 8.0
    noise_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.feature_dim < 2:
            raise ValueError("feature_dim must be >= 2")
        if self.noise_scale <= 0:
            raise ValueError("noise_scale must be positive")


def synth_features(label_sequence: Sequence[int], config: SynthConfig) -> np.ndarray:
    """Gaussian stand-ins for hidden states: continue at -mu*e1, stop at +mu*e1."""
    labels = np.asarray(label_sequence, dtype=np.int64)
    rng = np.random.default_rng(config.seed)
    mu = config.class_separation / 2.0
    feats = rng.normal(0.0, config.noise_scale, size=(len(labels), config.feature_dim))
    feats[:, 0] += np.where(labels == 1, mu, -mu)
    return feats.astype(np.float32)
