"""Replay scan kernel with compiled/pure-Python twin implementations.

The compiled extension is selected at import when available; otherwise the
pure-Python fallback runs. ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import numpy as np

from genstop._kernels._fallback import scan_stream as fallback_scan_stream
from genstop.controller import (
    REASON_EOS,
    REASON_LENGTH_CAP,
    REASON_NONE,
    REASON_VOTED_STOP,
)

try:  # pragma: no cover - depends on the build environment
    from genstop._kernels._scan import scan_stream as native_scan_stream

    scan_stream = native_scan_stream
    IMPLEMENTATION = "compiled"
except ImportError:  # pragma: no cover
    native_scan_stream = None
    scan_stream = fallback_scan_stream
    IMPLEMENTATION = "fallback"

REASON_BY_CODE = {
    0: REASON_NONE,
    1: REASON_VOTED_STOP,
    2: REASON_EOS,
    3: REASON_LENGTH_CAP,
}


def stream_arrays(steps) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(is_eos, char_len, last_nl_end) arrays for a record's steps."""
    n = len(steps)
    is_eos = np.zeros(n, dtype=np.uint8)
    char_len = np.zeros(n, dtype=np.int64)
    last_nl_end = np.full(n, -1, dtype=np.int64)
    for i, s in enumerate(steps):
        is_eos[i] = 1 if s.is_eos else 0
        char_len[i] = len(s.text)
        nl = s.text.rfind("\n")
        if nl >= 0:
            last_nl_end[i] = nl + 1
    return is_eos, char_len, last_nl_end


def scan(p_stop, is_eos, char_len, last_nl_end, theta, max_new_tokens, token_mode,
         impl=None):
    """Typed wrapper: coerces arrays and maps the reason code to its name."""
    fn = impl if impl is not None else scan_stream
    consumed, code, trim = fn(
        np.ascontiguousarray(p_stop, dtype=np.float64),
        np.ascontiguousarray(is_eos, dtype=np.uint8),
        np.ascontiguousarray(char_len, dtype=np.int64),
        np.ascontiguousarray(last_nl_end, dtype=np.int64),
        float(theta),
        int(max_new_tokens),
        bool(token_mode),
    )
    return int(consumed), REASON_BY_CODE[int(code)], int(trim)
