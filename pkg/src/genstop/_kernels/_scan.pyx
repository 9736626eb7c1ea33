# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled replay scan; semantics identical to _fallback.scan_stream."""


def scan_stream(
    const double[::1] p_stop,
    const unsigned char[::1] is_eos,
    const long long[::1] char_len,
    const long long[::1] last_nl_end,
    double theta,
    long long max_new_tokens,
    bint token_mode,
):
    cdef Py_ssize_t n = p_stop.shape[0]
    cdef Py_ssize_t i
    cdef long long emitted = 0
    cdef long long line_start = 0
    cdef long long line_start_before
    cdef long long base
    cdef long long stop_votes = 0
    cdef long long continue_votes = 0
    cdef long long tokens = 0
    cdef bint vote_stop

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
