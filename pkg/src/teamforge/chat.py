"""Chat-completion provider contract, with scripted and HTTP backends.

A request is an ordered list of (role, content) messages plus model and
temperature; a response is the completion text plus token usage. Providers
must be safe for concurrent calls. The scripted backend replays canned
responses keyed by (stage, round, attempt), which makes every pipeline
test deterministic and offline.
"""

from __future__ import annotations

import json
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import ChatProviderError, EmptyCompletionError

Message = tuple[str, str]  # (role, content)


@dataclass(frozen=True)
class ChatProviderDescriptor:
    provider_id: str
    model_name: str
    temperature: float
    deterministic: bool


@dataclass(frozen=True)
class CallTag:
    """Identifies a call site: pipeline stage, generation round, retry attempt."""

    stage: str
    round_index: int = 0
    attempt: int = 0

    def key(self) -> str:
        return f"{self.stage}:{self.round_index}:{self.attempt}"


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int


def approx_token_count(text: str) -> int:
    """Whitespace token count, used when a backend reports no usage."""
    return len(text.split())


class ChatProvider(ABC):
    @property
    @abstractmethod
    def descriptor(self) -> ChatProviderDescriptor: ...

    @abstractmethod
    def complete(self, messages: list[Message], *, tag: CallTag | None = None) -> ChatResponse: ...


class ScriptedChatProvider(ChatProvider):
    """Replays a script mapping "stage:round:attempt" keys to responses.

    Script entries may be plain strings or objects with ``text`` and optional
    ``prompt_tokens`` / ``completion_tokens``; omitted usage is synthesized
    from whitespace token counts. A "stage:round" key matches any attempt,
    which keeps retry-free fixtures short. Every call is logged for test
    assertions.
    """

    def __init__(self, script: dict, *, model_name: str = "scripted-chat", temperature: float = 1.0):
        self._responses = dict(script.get("responses", script))
        self._model_name = model_name
        self._temperature = temperature
        self._lock = threading.Lock()
        self.calls: list[tuple[CallTag, list[Message]]] = []

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> "ScriptedChatProvider":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh), **kwargs)

    @property
    def descriptor(self) -> ChatProviderDescriptor:
        return ChatProviderDescriptor(
            provider_id="scripted",
            model_name=self._model_name,
            temperature=self._temperature,
            deterministic=True,
        )

    def complete(self, messages: list[Message], *, tag: CallTag | None = None) -> ChatResponse:
        if tag is None:
            raise ChatProviderError("scripted provider needs a call tag to pick a response")
        entry = self._responses.get(tag.key())
        if entry is None:
            entry = self._responses.get(f"{tag.stage}:{tag.round_index}")
        if entry is None:
            raise ChatProviderError(f"no scripted response for {tag.key()}")
        if isinstance(entry, str):
            entry = {"text": entry}
        text = entry["text"]
        prompt_text = "\n".join(content for _, content in messages)
        prompt_tokens = int(entry.get("prompt_tokens", approx_token_count(prompt_text)))
        completion_tokens = int(entry.get("completion_tokens", approx_token_count(text)))
        with self._lock:
            self.calls.append((tag, list(messages)))
        if not text.strip():
            raise EmptyCompletionError(f"scripted response for {tag.key()} is empty")
        return ChatResponse(
            text=text, prompt_tokens=prompt_tokens, completion_tokens=completion_tokens
        )

    def calls_for_stage(self, stage: str) -> list[tuple[CallTag, list[Message]]]:
        with self._lock:
            return [(t, m) for t, m in self.calls if t.stage == stage]


class HttpChatProvider(ChatProvider):
    """Client for an HTTP chat-completions endpoint.

    Wire contract: POST ``{"model", "temperature", "messages": [{"role",
    "content"}]}``; response carries ``choices[0].message.content`` and a
    ``usage`` object with prompt/completion token counts.
    """

    def __init__(
        self,
        endpoint: str,
        model_name: str,
        *,
        temperature: float = 1.0,
        api_key: str | None = None,
        timeout: float = 120.0,
        session=None,
    ):
        self._endpoint = endpoint
        self._model_name = model_name
        self._temperature = temperature
        self._api_key = api_key
        self._timeout = timeout
        self._session = session if session is not None else requests.Session()

    @property
    def descriptor(self) -> ChatProviderDescriptor:
        return ChatProviderDescriptor(
            provider_id=f"http:{self._endpoint}",
            model_name=self._model_name,
            temperature=self._temperature,
            deterministic=False,
        )

    def complete(self, messages: list[Message], *, tag: CallTag | None = None) -> ChatResponse:
        headers = {}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        body = {
            "model": self._model_name,
            "temperature": self._temperature,
            "messages": [{"role": role, "content": content} for role, content in messages],
        }
        try:
            resp = self._session.post(
                self._endpoint, json=body, headers=headers, timeout=self._timeout
            )
            resp.raise_for_status()
            payload = resp.json()
            text = payload["choices"][0]["message"]["content"]
            usage = payload.get("usage", {})
        except Exception as exc:
            raise ChatProviderError(f"chat endpoint {self._endpoint}: {exc}") from exc
        if not (text or "").strip():
            raise EmptyCompletionError("chat endpoint returned an empty completion")
        prompt_text = "\n".join(content for _, content in messages)
        return ChatResponse(
            text=text,
            prompt_tokens=int(usage.get("prompt_tokens", approx_token_count(prompt_text))),
            completion_tokens=int(usage.get("completion_tokens", approx_token_count(text))),
        )
