#!/usr/bin/env python3
"""Benchmark the replay scan: compiled extension vs pure-Python fallback.

Builds one long synthetic token stream and times both kernel
implementations over it, plus the streaming controller as the upper
reference. Usage: python benchmarks/bench_kernels.py [n_tokens]
"""

import sys
import time

import numpy as np

from genstop import _kernels


def build_stream(n_tokens: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    p_stop = rng.uniform(0.0, 0.4, size=n_tokens)  # never trips the majority
    is_eos = np.zeros(n_tokens, dtype=np.uint8)
    char_len = rng.integers(1, 7, size=n_tokens).astype(np.int64)
    last_nl_end = np.where(
        rng.random(n_tokens) < 0.15, char_len, -1
    ).astype(np.int64)
    return p_stop, is_eos, char_len, last_nl_end


def bench(fn, args, repeats: int = 5) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def controller_reference(p_stop, char_len, last_nl_end, theta, cap):
    from genstop.controller import ControllerConfig, VotingLineState, step

    config = ControllerConfig(stop_threshold=theta, max_new_tokens=cap)
    state = VotingLineState()
    text_cache = {}
    for i in range(len(p_stop)):
        key = (char_len[i], last_nl_end[i])
        if key not in text_cache:
            body = "x" * int(char_len[i])
            if last_nl_end[i] >= 0:
                body = body[: int(last_nl_end[i]) - 1] + "\n" + body[int(last_nl_end[i]):]
            text_cache[key] = body
        step(state, config, text_cache[key], float(p_stop[i]), False)


def main() -> int:
    n_tokens = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
    p_stop, is_eos, char_len, last_nl_end = build_stream(n_tokens)
    args = (p_stop, is_eos, char_len, last_nl_end, 0.5, n_tokens + 1, False)

    rows = []
    fallback = bench(_kernels.fallback_scan_stream, args)
    rows.append(("pure-python scan", fallback))
    if _kernels.native_scan_stream is not None:
        native = bench(_kernels.native_scan_stream, args)
        rows.append(("compiled scan", native))
    else:
        print("compiled scan unavailable (extension not built)")

    ctrl_n = min(n_tokens, 200_000)  # the full streaming path is much slower
    t0 = time.perf_counter()
    controller_reference(p_stop[:ctrl_n], char_len[:ctrl_n], last_nl_end[:ctrl_n],
                         0.5, ctrl_n + 1)
    rows.append((f"streaming controller (per {ctrl_n} tokens, scaled)",
                 (time.perf_counter() - t0) * n_tokens / ctrl_n))

    print(f"selected implementation: {_kernels.IMPLEMENTATION}")
    print(f"stream length: {n_tokens} tokens\n")
    base = rows[0][1]
    for name, seconds in rows:
        rate = n_tokens / seconds / 1e6
        print(f"{name:48s} {seconds * 1e3:10.1f} ms  {rate:8.1f} Mtok/s  x{base / seconds:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
