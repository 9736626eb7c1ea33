"""Pure-Python replay scan; semantics identical to the compiled kernel."""

from __future__ import annotations


def scan_stream(p_stop, is_eos, char_len, last_nl_end, theta, max_new_tokens, token_mode):
    """Run the vote state machine over numeric per-token arrays.

    Arguments mirror controller.step: per token the stop probability, the
    EOS flag, the text length in characters, and the index just past the
    token's last newline (-1 when it has none).

    Returns (consumed, reason_code, trim_char_offset) with reason codes
    0 = stream exhausted, 1 = voted_stop, 2 = eos, 3 = length_cap. The trim
    offset is the emitted-character position where the voted line starts.
    """
    n = len(p_stop)
    emitted = 0
    line_start = 0
    stop_votes = 0
    continue_votes = 0
    tokens = 0
    for i in range(n):
        if is_eos[i]:
            return i + 1, 2, 0
        tokens += 1
        if tokens >= max_new_tokens:
            return i + 1, 3, 0
        vote_stop = p_stop[i] > theta
        line_start_before = line_start
        base = emitted
        emitted += char_len[i]
        if last_nl_end[i] >= 0:
            line_start = base + last_nl_end[i]
        if token_mode:
            if vote_stop:
                return i + 1, 1, line_start_before
            continue
        if vote_stop:
            stop_votes += 1
        else:
            continue_votes += 1
        if last_nl_end[i] >= 0:
            if stop_votes > continue_votes:
                return i + 1, 1, line_start_before
            stop_votes = 0
            continue_votes = 0
    return n, 0, 0
