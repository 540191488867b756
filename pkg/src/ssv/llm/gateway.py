"""Provider-agnostic LLM access with deterministic record/replay.

Transcripts map a digest of (kind, prompt, model, temperature) to the raw
response text; replay mode never touches the network, record mode writes
through, live mode only calls out. Max-tokens is deliberately excluded from
the key so budget tuning does not invalidate stored transcripts.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..errors import MissingTranscript, ProviderError


class PromptKind(str, Enum):
    DECOMPOSE = "decompose"
    DIRECT_PROGRAM = "direct_program"
    INCREMENTAL_CONSTRAINT = "incremental_constraint"
    OPTIONS_CODE = "options_code"
    ERROR_REFINE = "error_refine"
    INSTANTIATIONS = "instantiations"
    SEMANTIC_REPAIR = "semantic_repair"
    COT_FALLBACK = "cot_fallback"


class Mode(str, Enum):
    RECORD = "record"
    REPLAY = "replay"
    LIVE = "live"


@dataclass(frozen=True)
class LlmRequest:
    kind: PromptKind
    prompt: str
    model: str
    temperature: float
    max_tokens: int = 4096

    def key(self) -> str:
        payload = json.dumps(
            [self.kind.value, self.model, f"{self.temperature:.4f}", self.prompt],
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class TranscriptStore:
    """Digest-keyed response store, JSON-file backed."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.entries: dict[str, dict] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self.entries = json.loads(self.path.read_text(encoding="utf-8"))

    def get(self, request: LlmRequest) -> str | None:
        entry = self.entries.get(request.key())
        return None if entry is None else entry["response"]

    def put(self, request: LlmRequest, response: str) -> None:
        with self._lock:
            self.entries[request.key()] = {
                "kind": request.kind.value,
                "model": request.model,
                "temperature": request.temperature,
                "response": response,
            }
            if self.path is not None:
                self._flush()

    def _flush(self) -> None:
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(
            json.dumps(self.entries, indent=1, sort_keys=True, ensure_ascii=False),
            encoding="utf-8",
        )
        tmp.replace(self.path)

    def save(self, path: str | Path | None = None) -> None:
        if path is not None:
            self.path = Path(path)
        with self._lock:
            self._flush()

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class RateLimit:
    max_in_flight: int = 4
    per_minute: int = 60


class LlmGateway:
    """complete() is the single entry point; behavior depends on the mode."""

    def __init__(self, mode: Mode | str = Mode.REPLAY,
                 store: TranscriptStore | None = None,
                 endpoint: str | None = None,
                 api_key: str | None = None,
                 rate_limit: RateLimit | None = None,
                 max_retries: int = 3,
                 request_timeout_s: float = 120.0):
        self.mode = Mode(mode)
        self.store = store if store is not None else TranscriptStore()
        self.endpoint = endpoint
        self.api_key = api_key
        self.rate_limit = rate_limit or RateLimit()
        self.max_retries = max_retries
        self.request_timeout_s = request_timeout_s
        self._sem = threading.BoundedSemaphore(self.rate_limit.max_in_flight)
        self._minute_lock = threading.Lock()
        self._minute_marks: list[float] = []
        self.calls = 0
        self._calls_lock = threading.Lock()

    def complete(self, request: LlmRequest) -> str:
        with self._calls_lock:
            self.calls += 1
        if self.mode is Mode.REPLAY:
            response = self.store.get(request)
            if response is None:
                raise MissingTranscript(
                    f"no transcript for {request.kind.value} "
                    f"(model={request.model}, T={request.temperature})")
            return response
        if self.mode is Mode.RECORD:
            cached = self.store.get(request)
            if cached is not None:
                return cached
        response = self._call_provider(request)
        if self.mode is Mode.RECORD:
            self.store.put(request, response)
        return response

    # --- live transport (OpenAI-style chat completions) ---

    def _throttle(self) -> None:
        while True:
            with self._minute_lock:
                now = time.monotonic()
                self._minute_marks = [t for t in self._minute_marks if now - t < 60.0]
                if len(self._minute_marks) < self.rate_limit.per_minute:
                    self._minute_marks.append(now)
                    return
                wait = 60.0 - (now - self._minute_marks[0])
            time.sleep(max(wait, 0.05))

    def _call_provider(self, request: LlmRequest) -> str:
        import requests

        if not self.endpoint:
            raise ProviderError("no endpoint configured for live/record mode")
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": request.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            self._throttle()
            try:
                with self._sem:
                    resp = requests.post(self.endpoint, json=body, headers=headers,
                                         timeout=self.request_timeout_s)
            except requests.RequestException as exc:
                last_error = exc
                time.sleep(min(2.0 ** attempt, 8.0))
                continue
            if resp.status_code >= 500:
                last_error = ProviderError(f"server error {resp.status_code}",
                                           status=resp.status_code)
                time.sleep(min(2.0 ** attempt, 8.0))
                continue
            if resp.status_code != 200:
                raise ProviderError(f"provider returned {resp.status_code}: "
                                    f"{resp.text[:200]}", status=resp.status_code)
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise ProviderError(f"malformed provider response: {exc}") from exc
        raise ProviderError(f"provider unreachable after {self.max_retries} "
                            f"attempts: {last_error}")
