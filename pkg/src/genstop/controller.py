"""Streaming early-stop control over a token stream.

Per token the caller supplies the decoded text, the stop probability
computed from the hidden state that produced it, and the EOS flag. The
controller votes stop when p_stop exceeds the threshold and, in line-voting
mode, terminates only when a completed code line carries a stop majority.
Token-voting mode terminates on the first stop vote. EOS and the
max-new-tokens cap terminate unconditionally and take precedence.

Decision order per step: EOS, then length cap, then the vote. Ties in a
line's tally vote continue; a token containing a newline closes the current
line, its vote counts toward that line, and text after the newline seeds
the next line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MODE_LINE_VOTING = "line_voting"
MODE_TOKEN_VOTING = "token_voting"

REASON_NONE = "none"
REASON_VOTED_STOP = "voted_stop"
REASON_EOS = "eos"
REASON_LENGTH_CAP = "length_cap"

ACTION_CONTINUE = "continue"
ACTION_STOP = "stop"


class ProtocolViolationError(RuntimeError):
    """A step arrived after the controller reached a terminal state."""


@dataclass(frozen=True)
class ControllerConfig:
    stop_threshold: float = 0.5
    max_new_tokens: int = 300
    mode: str = MODE_LINE_VOTING
    trim_stop_line: bool = True

    def __post_init__(self):
        if not 0.0 < self.stop_threshold < 1.0:
            raise ValueError("stop_threshold must be in (0, 1)")
        if self.max_new_tokens <= 0:
            raise ValueError("max_new_tokens must be positive")
        if self.mode not in (MODE_LINE_VOTING, MODE_TOKEN_VOTING):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class Decision:
    action: str
    reason: str

    def __post_init__(self):
        if (self.action == ACTION_STOP) != (self.reason != REASON_NONE):
            raise ValueError(f"inconsistent decision {self.action}/{self.reason}")


_CONTINUE = Decision(ACTION_CONTINUE, REASON_NONE)


@dataclass
class VotingLineState:
    """Vote tallies, line bookkeeping, and the emitted-text buffer."""

    continue_votes: int = 0
    stop_votes: int = 0
    tokens_generated: int = 0
    terminal: str | None = None
    _chunks: list[str] = field(default_factory=list)
    _emitted_len: int = 0
    _line_start: int = 0
    _trim_offset: int = 0

    @property
    def emitted_text(self) -> str:
        return "".join(self._chunks)

    @property
    def current_line_buffer(self) -> str:
        return self.emitted_text[self._line_start:]

    def _append(self, text: str) -> None:
        base = self._emitted_len
        self._chunks.append(text)
        self._emitted_len += len(text)
        nl = text.rfind("\n")
        if nl >= 0:
            self._line_start = base + nl + 1


def step(
    state: VotingLineState,
    config: ControllerConfig,
    token_text: str,
    p_stop: float,
    is_eos: bool = False,
) -> Decision:
    """Feed one token; returns the continue/stop decision for this step."""
    if state.terminal is not None:
        raise ProtocolViolationError(
            f"step after terminal state {state.terminal!r}"
        )
    if not 0.0 <= p_stop <= 1.0:
        raise ValueError(f"p_stop {p_stop} outside [0, 1]")

    if is_eos:
        state.terminal = REASON_EOS
        return Decision(ACTION_STOP, REASON_EOS)

    state.tokens_generated += 1
    if state.tokens_generated >= config.max_new_tokens:
        state._append(token_text)
        state.terminal = REASON_LENGTH_CAP
        return Decision(ACTION_STOP, REASON_LENGTH_CAP)

    vote_stop = p_stop > config.stop_threshold
    line_start_before = state._line_start

    if config.mode == MODE_TOKEN_VOTING:
        state._append(token_text)
        if vote_stop:
            state.terminal = REASON_VOTED_STOP
            state._trim_offset = line_start_before
            return Decision(ACTION_STOP, REASON_VOTED_STOP)
        return _CONTINUE

    if vote_stop:
        state.stop_votes += 1
    else:
        state.continue_votes += 1
    state._append(token_text)
    if "\n" in token_text:
        if state.stop_votes > state.continue_votes:
            state.terminal = REASON_VOTED_STOP
            state._trim_offset = line_start_before
            return Decision(ACTION_STOP, REASON_VOTED_STOP)
        state.stop_votes = 0
        state.continue_votes = 0
    return _CONTINUE


def finalize_output(state: VotingLineState, config: ControllerConfig) -> str:
    """Materialize the emitted text once the controller is terminal.

    After a voted stop with trimming enabled, the voted-excess line (and any
    text a multi-line token seeded past it) is removed. The result is always
    a prefix of the untruncated stream.
    """
    if state.terminal is None:
        raise ProtocolViolationError("finalize_output on a non-terminal state")
    text = state.emitted_text
    if state.terminal == REASON_VOTED_STOP and config.trim_stop_line:
        return text[: state._trim_offset]
    return text
