"""Line-delimited stdio protocol for live decoding-loop control.

A runtime adapter drives one session per process in lockstep: it sends
``init`` (answered by ``ready``), then one ``step`` per generated token
(answered by a ``decision``), and finally ``finalize`` (answered by
``output`` with the controller's finalized text). Every message is a single
line of UTF-8 JSON. Unknown or out-of-order messages abort the session.
"""

from __future__ import annotations

import json
import sys

import numpy as np

from genstop import controller
from genstop.classifier import StopClassifier, predict_stop_probability


class ProtocolError(RuntimeError):
    pass


class Session:
    """Message handler for one adapter connection."""

    def __init__(self, model: StopClassifier):
        self.model = model
        self.config: controller.ControllerConfig | None = None
        self.state: controller.VotingLineState | None = None

    def handle(self, message: dict) -> dict:
        kind = message.get("type")
        if kind == "init":
            return self._init(message)
        if kind == "step":
            return self._step(message)
        if kind == "finalize":
            return self._finalize()
        raise ProtocolError(f"unexpected message type {kind!r}")

    def _init(self, message: dict) -> dict:
        feature_dim = message.get("feature_dim")
        if feature_dim != self.model.feature_dim:
            raise ProtocolError(
                f"feature_dim {feature_dim} does not match model dim "
                f"{self.model.feature_dim}"
            )
        if self.state is not None and self.state.terminal is None and self.state.tokens_generated:
            raise ProtocolError("init during an active generation")
        mode = message.get("mode", controller.MODE_LINE_VOTING)
        self.config = controller.ControllerConfig(
            stop_threshold=float(message.get("theta", 0.5)),
            max_new_tokens=int(message.get("max_new_tokens", 300)),
            mode=mode,
            trim_stop_line=bool(message.get("trim_stop_line", True)),
        )
        self.state = controller.VotingLineState()
        return {"type": "ready"}

    def _step(self, message: dict) -> dict:
        if self.state is None or self.config is None:
            raise ProtocolError("step before init")
        hidden = np.asarray(message.get("hidden", []), dtype=np.float32)
        is_eos = bool(message.get("is_eos", False))
        if is_eos and hidden.size == 0:
            p_stop = 0.0  # EOS terminates regardless; hidden may be omitted
        else:
            _, p_stop = predict_stop_probability(self.model, hidden)
        decision = controller.step(
            self.state, self.config, message.get("text", ""), p_stop, is_eos
        )
        return {"type": "decision", "action": decision.action, "reason": decision.reason}

    def _finalize(self) -> dict:
        if self.state is None or self.config is None:
            raise ProtocolError("finalize before init")
        if self.state.terminal is None:
            text = self.state.emitted_text  # adapter stopped on its own
        else:
            text = controller.finalize_output(self.state, self.config)
        return {"type": "output", "text": text}


def run(model: StopClassifier, stdin=None, stdout=None) -> int:
    """Serve one adapter connection until EOF. Returns the exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    session = Session(model)
    for raw in stdin:
        raw = raw.strip()
        if not raw:
            continue
        try:
            message = json.loads(raw)
            reply = session.handle(message)
        except (ProtocolError, controller.ProtocolViolationError, ValueError) as exc:
            stdout.write(json.dumps({"type": "error", "message": str(exc)}) + "\n")
            stdout.flush()
            return 2
        stdout.write(json.dumps(reply) + "\n")
        stdout.flush()
    return 0
