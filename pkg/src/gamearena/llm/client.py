"""Chat-completion transports.

``HttpChatClient`` speaks the OpenAI-compatible ``/chat/completions`` shape.
The others are hermetic stand-ins for tests and offline tournaments.
"""

from __future__ import annotations

import os
import random
import re
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import httpx

from gamearena.match import AgentError, AgentTransportError

ROLES = {"system", "user", "assistant"}


@dataclass(frozen=True)
class ChatParams:
    temperature: float = 0.2
    max_tokens: int = 1024
    num_samples: int = 1

    def with_samples(self, n: int) -> "ChatParams":
        return replace(self, num_samples=n)


class ChatTransportError(AgentTransportError):
    pass


class AuthenticationError(AgentError):
    cause = "agent authentication"


class ContextOverflowError(AgentError):
    cause = "context overflow"


class ChatClient(Protocol):
    model: str

    def complete(self, messages: Sequence[dict], params: ChatParams) -> list[str]: ...


def chat_complete(client: ChatClient, messages: Sequence[dict], params: ChatParams = ChatParams()) -> list[str]:
    """Validate the request, call the transport, and check the sample count."""
    if not messages:
        raise ValueError("messages must be non-empty")
    for msg in messages:
        if msg.get("role") not in ROLES or not isinstance(msg.get("content"), str):
            raise ValueError(f"bad chat message: {msg!r}")
    texts = client.complete(messages, params)
    if len(texts) != params.num_samples:
        raise ChatTransportError(f"expected {params.num_samples} completions, got {len(texts)}")
    return texts


_ESCAPE = re.compile(r"\\(n|t|\\)")


def unescape_line(line: str) -> str:
    return _ESCAPE.sub(lambda m: {"n": "\n", "t": "\t", "\\": "\\"}[m.group(1)], line)


class ScriptedClient:
    """Plays back completions in order; each sample consumes one entry."""

    model = "scripted"

    def __init__(self, completions: Iterable[str]):
        self._queue = list(completions)
        self._pos = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedClient":
        """One completion per line; ``\\n`` inside a line stands for a newline."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls(unescape_line(line) for line in lines)

    @property
    def remaining(self) -> int:
        return len(self._queue) - self._pos

    def complete(self, messages, params):
        n = params.num_samples
        if self.remaining < n:
            self._pos = len(self._queue)
            raise ChatTransportError("script exhausted")
        out = self._queue[self._pos:self._pos + n]
        self._pos += n
        return out


class RecordingClient:
    """Wraps another client and keeps every request it forwards."""

    def __init__(self, inner: ChatClient):
        self.inner = inner
        self.model = getattr(inner, "model", "recording")
        self.calls: list[tuple[list[dict], ChatParams]] = []

    @property
    def completions_requested(self) -> int:
        return sum(p.num_samples for _, p in self.calls)

    def complete(self, messages, params):
        self.calls.append(([dict(m) for m in messages], params))
        return self.inner.complete(messages, params)


_LEGAL_LINE = re.compile(r"^The legal actions are: (.*)\.$", re.MULTILINE)
_VOTE_ASK = "The best choice is {s}"
_CHOICE = re.compile(r"^Choice (\d+):$", re.MULTILINE)


class RandomLegalClient:
    """Offline stand-in for a model: answers with a random listed legal action.

    With ``illegal_rate`` > 0 the client decides once, at construction, whether
    it will answer this match with an unusable action.
    """

    model = "random-legal"

    def __init__(self, seed: int = 0, illegal_rate: float = 0.0):
        self._rng = random.Random(seed)
        self.faulty = self._rng.random() < illegal_rate

    def _one(self, prompt: str) -> str:
        if _VOTE_ASK in prompt:
            choices = [int(c) for c in _CHOICE.findall(prompt)] or [1]
            return f"The best choice is {self._rng.choice(choices)}"
        if self.faulty:
            return "Action:\n<no move>"
        found = _LEGAL_LINE.findall(prompt)
        moves = re.findall(r"<(?:->|[^<>])*>", found[-1]) if found else []
        if not moves:
            return "Action:\nNone"
        return f"Thought:\nPicking at random.\n\nAction:\n{self._rng.choice(moves)}"

    def complete(self, messages, params):
        prompt = messages[-1]["content"]
        return [self._one(prompt) for _ in range(params.num_samples)]


class HttpChatClient:
    """OpenAI-compatible chat-completion client with bounded retries."""

    def __init__(self, endpoint: str, model: str, api_key: str | None = None, *,
                 timeout: float = 120.0, attempts: int = 3, backoff: float = 1.0,
                 transport: httpx.BaseTransport | None = None):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.attempts = attempts
        self.backoff = backoff
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._http = httpx.Client(timeout=timeout, headers=headers, transport=transport)

    @classmethod
    def from_env(cls, endpoint: str, model: str, api_key_env: str = "OPENAI_API_KEY", **kw) -> "HttpChatClient":
        key = os.environ.get(api_key_env)
        if not key:
            raise AuthenticationError(f"environment variable {api_key_env} is not set")
        return cls(endpoint, model, key, **kw)

    def close(self):
        self._http.close()

    def _post(self, messages, params, n):
        body = {"model": self.model, "messages": list(messages), "temperature": params.temperature,
                "max_tokens": params.max_tokens, "n": n}
        last: Exception | None = None
        for attempt in range(self.attempts):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                resp = self._http.post(f"{self.endpoint}/chat/completions", json=body)
            except httpx.TransportError as exc:
                last = exc
                continue
            if resp.status_code in (401, 403):
                raise AuthenticationError(f"HTTP {resp.status_code} from {self.endpoint}")
            if resp.status_code == 400 and "context" in resp.text.lower():
                raise ContextOverflowError(resp.text[:200])
            if resp.status_code == 429 or resp.status_code >= 500:
                last = ChatTransportError(f"HTTP {resp.status_code}")
                continue
            if resp.status_code != 200:
                raise ChatTransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return [c["message"]["content"] or "" for c in resp.json()["choices"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise ChatTransportError(f"unexpected response shape: {exc}") from exc
        raise ChatTransportError(f"gave up after {self.attempts} attempts: {last}")

    def complete(self, messages, params):
        texts: list[str] = []
        # Backends without multi-sample support return one choice; top up one at a time.
        while len(texts) < params.num_samples:
            got = self._post(messages, params, params.num_samples - len(texts))
            if not got:
                raise ChatTransportError("response had no choices")
            texts.extend(got)
        return texts[:params.num_samples]
