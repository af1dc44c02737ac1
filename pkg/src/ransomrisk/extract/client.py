"""Completion client port with fixture-replay and HTTP implementations.

Long extractions routinely overflow the output token limit, so replies arrive
in parts. `query` drives the continuation protocol: while a part reports
`length_truncated` it re-asks with the partial output and a continue
instruction, capped at MAX_PARTS parts.

Fixture files make every test offline: one JSON file per exchange, shaped
{"prompt_sha256": ..., "parts": [{"text": ..., "finish_reason": ...}]}, keyed
by the SHA-256 of the original prompt.
"""

from __future__ import annotations

import hashlib
import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from ..errors import ClientError, PartLimitExceeded, PromptTooLarge
from .prompts import estimate_tokens

MAX_PARTS = 8

CONTINUE_INSTRUCTION = (
    "Continue exactly where you stopped. Do not repeat any text you have "
    "already produced."
)

FINISH_REASONS = ("complete", "length_truncated", "other")


@dataclass(frozen=True)
class RawResponse:
    """One part of a (possibly multi-part) completion reply."""

    part_index: int
    text: str
    finish_reason: str

    def __post_init__(self):
        if self.part_index < 0:
            raise ClientError(f"negative part index {self.part_index}")
        if self.finish_reason not in FINISH_REASONS:
            raise ClientError(f"unknown finish reason {self.finish_reason!r}")


class CompletionClient(Protocol):
    context_window: int

    def complete(self, prompt: str, partial: str = "") -> tuple[str, str]:
        """Return (text, finish_reason) for the prompt; `partial` carries the
        output accumulated so far when asking for a continuation."""
        ...


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class FixtureClient:
    """Replays recorded exchanges from a fixture directory."""

    def __init__(self, fixture_dir, context_window: int = 128_000):
        self.context_window = context_window
        self._exchanges: dict[str, list[dict]] = {}
        self._cursor: dict[str, int] = {}
        for path in sorted(Path(fixture_dir).glob("*.json")):
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
            try:
                self._exchanges[data["prompt_sha256"]] = list(data["parts"])
            except (KeyError, TypeError) as exc:
                raise ClientError(f"bad fixture file {path}: {exc}") from exc

    def complete(self, prompt: str, partial: str = "") -> tuple[str, str]:
        key = prompt_key(prompt)
        parts = self._exchanges.get(key)
        if parts is None:
            raise ClientError(f"no recorded exchange for prompt {key[:12]}…")
        if not partial:
            self._cursor[key] = 0
        index = self._cursor.get(key, 0)
        if index >= len(parts):
            raise ClientError(f"fixture for prompt {key[:12]}… exhausted after {index} parts")
        self._cursor[key] = index + 1
        part = parts[index]
        return str(part["text"]), str(part.get("finish_reason", "complete"))


def write_fixture(fixture_dir, prompt: str, parts: list[tuple[str, str]]) -> Path:
    """Record an exchange so FixtureClient can replay it later."""
    key = prompt_key(prompt)
    path = Path(fixture_dir) / f"{key}.json"
    payload = {
        "prompt_sha256": key,
        "parts": [{"text": text, "finish_reason": reason} for text, reason in parts],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return path


class HttpChatClient:
    """Chat-completions HTTP client configured from the environment.

    Reads LLM_API_BASE, LLM_API_KEY, LLM_MODEL, and optionally
    LLM_CONTEXT_WINDOW (default 128000).
    """

    def __init__(self, api_base: str | None = None, api_key: str | None = None,
                 model: str | None = None, context_window: int | None = None,
                 timeout: float = 120.0):
        self.api_base = (api_base or os.environ.get("LLM_API_BASE", "")).rstrip("/")
        self.api_key = api_key or os.environ.get("LLM_API_KEY", "")
        self.model = model or os.environ.get("LLM_MODEL", "")
        self.context_window = context_window or int(os.environ.get("LLM_CONTEXT_WINDOW", 128_000))
        self.timeout = timeout
        if not self.api_base or not self.model:
            raise ClientError("HTTP client needs LLM_API_BASE and LLM_MODEL configured")

    def complete(self, prompt: str, partial: str = "") -> tuple[str, str]:
        messages = [{"role": "user", "content": prompt}]
        if partial:
            messages.append({"role": "assistant", "content": partial})
            messages.append({"role": "user", "content": CONTINUE_INSTRUCTION})
        body = json.dumps({"model": self.model, "messages": messages}).encode("utf-8")
        request = urllib.request.Request(
            f"{self.api_base}/chat/completions",
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {self.api_key}",
            },
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                reply = json.load(response)
        except (urllib.error.URLError, json.JSONDecodeError, OSError) as exc:
            raise ClientError(f"chat completion request failed: {exc}") from exc
        try:
            choice = reply["choices"][0]
            text = choice["message"]["content"]
            finish = choice.get("finish_reason", "stop")
        except (KeyError, IndexError, TypeError) as exc:
            raise ClientError(f"malformed chat completion reply: {exc}") from exc
        if finish == "stop":
            reason = "complete"
        elif finish == "length":
            reason = "length_truncated"
        else:
            reason = "other"
        return text, reason


def query(client: CompletionClient, prompt: str, max_parts: int = MAX_PARTS) -> list[RawResponse]:
    """Run one exchange, following truncated replies until completion."""
    estimate = estimate_tokens(prompt)
    if estimate > client.context_window:
        raise PromptTooLarge(estimate, client.context_window)
    parts: list[RawResponse] = []
    partial = ""
    for index in range(max_parts):
        text, reason = client.complete(prompt, partial)
        parts.append(RawResponse(part_index=index, text=text, finish_reason=reason))
        if reason != "length_truncated":
            return parts
        partial += text
    raise PartLimitExceeded(max_parts)
