"""Comparison reports: a JSON document plus an aligned plain-text table."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from genstop.simulate import RunMetrics

COLUMNS = ("P@1", "Time", "Speedup", "Length")


def _row(name: str, m: RunMetrics) -> list[str]:
    p1 = m.pass_at_k.get(1)
    return [
        name,
        "-" if p1 is None else f"{100.0 * p1:.1f}",
        f"{m.mean_time:.2f}",
        f"x{m.speedup:.2f}",
        f"{m.mean_length:.1f}",
    ]


def render_table(baseline: RunMetrics, treated: RunMetrics) -> str:
    rows = [["run", *COLUMNS], _row("baseline", baseline), _row("treated", treated)]
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [
            r[c].rjust(widths[c]) for c in range(1, len(r))
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def emit_report(
    baseline: RunMetrics,
    treated: RunMetrics,
    json_path,
    txt_path=None,
    latency_per_token: float = 1.0,
    config: Optional[dict] = None,
) -> None:
    """Write report.json and the aligned report.txt beside it."""
    json_path = Path(json_path)
    if txt_path is None:
        txt_path = json_path.with_suffix(".txt")
    doc = {
        "baseline": baseline.to_json(),
        "treated": treated.to_json(),
        "latency_per_token": latency_per_token,
        "time_model": "constant per-token latency proxy; wall-clock decode "
        "cost varies with context length and is not modeled here",
        "config": config or {},
        "metadata": {"generated_at": datetime.now(timezone.utc).isoformat()},
    }
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    Path(txt_path).write_text(render_table(baseline, treated), encoding="utf-8")


def read_report(json_path) -> tuple[RunMetrics, RunMetrics, dict]:
    doc = json.loads(Path(json_path).read_text(encoding="utf-8"))
    return (
        RunMetrics.from_json(doc["baseline"]),
        RunMetrics.from_json(doc["treated"]),
        doc,
    )
