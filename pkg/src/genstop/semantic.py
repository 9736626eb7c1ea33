"""Chat-model fallback for generations the syntax analyzer cannot split.

One synchronous chat-completions call per record: the instruction template
gets the raw output substituted in, the reply is parsed into a split line
index. Parsing is total -- any reply yields either a valid in-range index or
no split at all. A mock backend keeps the test suite offline.
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from typing import Optional, Protocol

from genstop.parsing import split_lines

log = logging.getLogger(__name__)

PLACEHOLDER = "<raw_output>"

ENV_API_BASE = "SEMANTIC_API_BASE"
ENV_API_KEY = "SEMANTIC_API_KEY"
ENV_MODEL = "SEMANTIC_MODEL"

# Functional stand-in template. Demonstrations cover the two failure shapes
# the syntax analyzer cannot handle: endless comments and bodiless excess.
DEFAULT_INSTRUCTIONS = """\
You are given code produced by a code model: a prompt followed by its \
generated continuation. The continuation may contain excess content \
(repeated comments, unrelated functions, test code) after the code that \
fulfills the prompt. Reply with `SPLIT_LINE: <n>` where n is the 0-based \
index of the LAST line that belongs to the fulfilling code. If every line \
belongs, answer with the last line's index.

Code:
<raw_output>
"""

DEFAULT_DEMONSTRATIONS: tuple[tuple[str, str], ...] = (
    (
        "def add(a, b):\n    # returns the sum\n    # returns the sum\n"
        "    # returns the sum\n    # returns the sum\n",
        "SPLIT_LINE: 0",
    ),
    (
        "def mul(a, b):\n    return a * b\n\ndef unrelated():\n    pass\n",
        "SPLIT_LINE: 1",
    ),
)


class TransportError(RuntimeError):
    """The backend could not be reached or returned a malformed payload."""


class ChatBackend(Protocol):
    def complete(self, messages: list[dict]) -> str: ...


@dataclass(frozen=True)
class SemanticRequest:
    raw_output: str
    prompt_text: str
    instructions: str = DEFAULT_INSTRUCTIONS
    demonstrations: tuple[tuple[str, str], ...] = DEFAULT_DEMONSTRATIONS

    def __post_init__(self):
        if self.instructions.count(PLACEHOLDER) != 1:
            raise ValueError(
                f"instructions must contain {PLACEHOLDER!r} exactly once"
            )

    def messages(self) -> list[dict]:
        msgs = []
        for demo_in, demo_out in self.demonstrations:
            msgs.append({"role": "user", "content": self.instructions.replace(PLACEHOLDER, demo_in)})
            msgs.append({"role": "assistant", "content": demo_out})
        msgs.append({"role": "user", "content": self.instructions.replace(PLACEHOLDER, self.raw_output)})
        return msgs


@dataclass(frozen=True)
class SemanticResponse:
    split_line_index: Optional[int]
    raw_reply: str


_SPLIT_RE = re.compile(r"SPLIT_LINE\s*:\s*(-?\d+)")
_FENCE_RE = re.compile(r"^```[^\n]*\n|\n?```\s*$")


def _prefix_recover(reply: str, raw_output: str) -> Optional[int]:
    """Recover a split index from an echoed expected-code block.

    Count how many leading lines of the raw output the reply reproduces
    (whitespace-stripped comparison); the split sits at the last match.
    """
    body = _FENCE_RE.sub("", reply.strip())
    reply_lines = [l.rstrip("\n") for l in split_lines(body)]
    raw_lines = [l.rstrip("\n") for l in split_lines(raw_output)]
    matched = 0
    for got, want in zip(reply_lines, raw_lines):
        if got.strip() != want.strip():
            break
        matched += 1
    return matched - 1 if matched > 0 else None


def parse_reply(reply: str, raw_output: str) -> Optional[int]:
    """Total parse of a backend reply into an in-range split index."""
    n_lines = len(split_lines(raw_output))
    m = _SPLIT_RE.search(reply)
    if m:
        index = int(m.group(1))
    else:
        index = _prefix_recover(reply, raw_output)
    if index is None or not 0 <= index < n_lines:
        return None
    return index


def semantic_truncate(req: SemanticRequest, backend: ChatBackend) -> SemanticResponse:
    reply = backend.complete(req.messages())
    return SemanticResponse(
        split_line_index=parse_reply(reply, req.raw_output), raw_reply=reply
    )


@dataclass
class MockBackend:
    """Scripted backend for offline tests; records what it was asked."""

    replies: list[str] = field(default_factory=list)
    requests: list[list[dict]] = field(default_factory=list)
    fail_times: int = 0

    def complete(self, messages: list[dict]) -> str:
        self.requests.append(messages)
        if self.fail_times > 0:
            self.fail_times -= 1
            raise TransportError("mock transport failure")
        if not self.replies:
            raise TransportError("mock has no replies left")
        return self.replies.pop(0)


@dataclass
class HttpChatBackend:
    """Chat-completions wire client; endpoint and model from env by default."""

    api_base: str = ""
    api_key: str = ""
    model: str = ""
    timeout: float = 60.0

    def __post_init__(self):
        self.api_base = self.api_base or os.environ.get(ENV_API_BASE, "")
        self.api_key = self.api_key or os.environ.get(ENV_API_KEY, "")
        self.model = self.model or os.environ.get(ENV_MODEL, "")
        if not self.api_base:
            raise TransportError(
                f"no semantic backend configured (set {ENV_API_BASE})"
            )

    def complete(self, messages: list[dict]) -> str:
        import requests

        url = self.api_base.rstrip("/") + "/chat/completions"
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                url,
                headers=headers,
                data=json.dumps({"model": self.model, "messages": messages}),
                timeout=self.timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
            return payload["choices"][0]["message"]["content"]
        except Exception as exc:
            raise TransportError(f"chat request failed: {exc}") from exc


@dataclass
class SemanticClient:
    """Retrying wrapper exposing the callable the labeler consumes."""

    backend: ChatBackend
    instructions: str = DEFAULT_INSTRUCTIONS
    demonstrations: tuple[tuple[str, str], ...] = DEFAULT_DEMONSTRATIONS
    retries: int = 2
    backoff: float = 0.5

    def truncate(self, full_text: str, prompt_text: str) -> Optional[int]:
        req = SemanticRequest(
            raw_output=full_text,
            prompt_text=prompt_text,
            instructions=self.instructions,
            demonstrations=self.demonstrations,
        )
        attempt = 0
        while True:
            try:
                return semantic_truncate(req, self.backend).split_line_index
            except Exception as exc:
                if attempt >= self.retries:
                    raise TransportError(
                        f"semantic backend failed after {attempt + 1} attempts: {exc}"
                    ) from exc
                time.sleep(self.backoff * (2**attempt))
                attempt += 1

    def __call__(self, full_text: str, prompt_text: str) -> Optional[int]:
        return self.truncate(full_text, prompt_text)
