"""Uniform access to text completion, image generation, and embeddings.

Three modes: live (call the provider), record (call and persist to a
cassette), replay (serve recorded responses, zero network). Cassettes are
JSON arrays of entries keyed by a canonical request digest; image bytes are
stored as sibling files named by their content digest.
"""

from __future__ import annotations

import hashlib
import os
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Protocol

from .errors import (
    CassetteMiss,
    EmptyCompletion,
    ProviderUnavailable,
    ValidationError,
)
from .model import canonical_json

DEFAULT_PARALLELISM = 4
MAX_RETRIES = 3
BACKOFF_BASE_SECONDS = 0.5

# Extraction must be stable; premise/script/board generation must vary.
EXTRACTION_TEMPERATURE = 0.2
CREATIVE_TEMPERATURE = 0.9
DEFAULT_MAX_OUTPUT_TOKENS = 1024


class Mode(str, Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


class ProviderKind(str, Enum):
    COMPLETION = "completion"
    IMAGE = "image"
    EMBEDDING = "embedding"


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    temperature: float
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    request_tag: str = ""

    def __post_init__(self):
        if not self.prompt.strip():
            raise ValidationError("completion prompt must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValidationError("temperature must be in [0, 2]")

    def to_dict(self) -> dict:
        return {
            "prompt": self.prompt,
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "request_tag": self.request_tag,
        }


@dataclass(frozen=True)
class ImageBlob:
    data: bytes
    media_type: str = "image/png"

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.data).hexdigest()


def request_digest(kind: ProviderKind, request: dict) -> str:
    """Canonical digest: field order in the source request never matters."""
    payload = canonical_json({"kind": kind.value, "request": request})
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class CassetteEntry:
    provider_kind: ProviderKind
    request_digest: str
    request: dict
    response: dict
    recorded_at: str

    def to_dict(self) -> dict:
        return {
            "provider_kind": self.provider_kind.value,
            "request_digest": self.request_digest,
            "request": self.request,
            "response": self.response,
            "recorded_at": self.recorded_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CassetteEntry":
        return cls(
            provider_kind=ProviderKind(d["provider_kind"]),
            request_digest=d["request_digest"],
            request=d["request"],
            response=d["response"],
            recorded_at=d["recorded_at"],
        )


class Cassette:
    """One cassette file per scenario; appends are serialized by a lock."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.entries: list[CassetteEntry] = []
        self._index: dict[tuple[str, str], CassetteEntry] = {}
        self._lock = threading.Lock()

    @property
    def blob_dir(self) -> Path:
        return self.path.parent

    @classmethod
    def load(cls, path: Path) -> "Cassette":
        import json

        cassette = cls(path)
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        for d in raw:
            cassette._add(CassetteEntry.from_dict(d))
        return cassette

    def _add(self, entry: CassetteEntry) -> None:
        self.entries.append(entry)
        self._index[(entry.provider_kind.value, entry.request_digest)] = entry

    def lookup(self, kind: ProviderKind, digest: str) -> Optional[CassetteEntry]:
        return self._index.get((kind.value, digest))

    def append(self, entry: CassetteEntry) -> None:
        with self._lock:
            self._add(entry)
            self._save_locked()

    def write_blob(self, blob: ImageBlob) -> str:
        ext = "png" if blob.media_type == "image/png" else "bin"
        name = f"{blob.digest}.{ext}"
        path = self.blob_dir / name
        with self._lock:
            if not path.exists():
                self.blob_dir.mkdir(parents=True, exist_ok=True)
                path.write_bytes(blob.data)
        return name

    def read_blob(self, name: str) -> bytes:
        path = self.blob_dir / name
        if not path.exists():
            raise CassetteMiss(f"cassette blob missing: {name}")
        return path.read_bytes()

    def save(self) -> None:
        with self._lock:
            self._save_locked()

    def _save_locked(self) -> None:
        import json

        self.path.parent.mkdir(parents=True, exist_ok=True)
        text = json.dumps(
            [e.to_dict() for e in self.entries],
            sort_keys=True,
            indent=2,
            ensure_ascii=False,
        )
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(text + "\n", encoding="utf-8")
        tmp.replace(self.path)


class Transport(Protocol):
    """Live backend for the three provider kinds."""

    def complete(self, request: CompletionRequest) -> str: ...

    def generate_image(self, prompt: str) -> ImageBlob: ...

    def embed(self, text: str) -> list[float]: ...


@dataclass
class ProviderConfig:
    completion_api_key: str = ""
    completion_base_url: str = ""
    completion_model: str = ""
    image_api_key: str = ""
    image_base_url: str = ""
    embedding_base_url: str = ""
    embedding_model: str = ""
    parallelism: int = DEFAULT_PARALLELISM

    @classmethod
    def from_env(cls, env: Optional[dict] = None) -> "ProviderConfig":
        env = dict(os.environ) if env is None else env
        return cls(
            completion_api_key=env.get("COMPLETION_API_KEY", ""),
            completion_base_url=env.get("COMPLETION_BASE_URL", ""),
            completion_model=env.get("COMPLETION_MODEL", ""),
            image_api_key=env.get("IMAGE_API_KEY", ""),
            image_base_url=env.get("IMAGE_BASE_URL", ""),
            embedding_base_url=env.get("EMBEDDING_BASE_URL", ""),
            embedding_model=env.get("EMBEDDING_MODEL", ""),
            parallelism=int(env.get("PROVIDER_PARALLELISM", DEFAULT_PARALLELISM)),
        )


class HttpTransport:
    """OpenAI-style HTTP backend. Retries transient failures, never 4xx."""

    def __init__(self, config: ProviderConfig, sleep: Callable[[float], None] = time.sleep):
        self.config = config
        self._sleep = sleep

    def _post(self, url: str, api_key: str, payload: dict) -> dict:
        import httpx

        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        last_error: Exception | None = None
        for attempt in range(MAX_RETRIES + 1):
            try:
                response = httpx.post(url, json=payload, headers=headers, timeout=60.0)
            except httpx.HTTPError as exc:
                last_error = exc
            else:
                if response.status_code < 400:
                    return response.json()
                if 400 <= response.status_code < 500 and response.status_code != 429:
                    raise ProviderUnavailable(
                        f"provider rejected request ({response.status_code})"
                    )
                last_error = ProviderUnavailable(
                    f"provider error ({response.status_code})"
                )
            if attempt < MAX_RETRIES:
                self._sleep(BACKOFF_BASE_SECONDS * (2**attempt))
        raise ProviderUnavailable(f"provider unreachable after retries: {last_error}")

    def complete(self, request: CompletionRequest) -> str:
        url = f"{self.config.completion_base_url.rstrip('/')}/chat/completions"
        data = self._post(
            url,
            self.config.completion_api_key,
            {
                "model": self.config.completion_model,
                "messages": [{"role": "user", "content": request.prompt}],
                "temperature": request.temperature,
                "max_tokens": request.max_output_tokens,
            },
        )
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnavailable(f"malformed completion response: {exc}")

    def generate_image(self, prompt: str) -> ImageBlob:
        import base64

        url = f"{self.config.image_base_url.rstrip('/')}/images/generations"
        data = self._post(
            url,
            self.config.image_api_key,
            {"prompt": prompt, "n": 1, "response_format": "b64_json"},
        )
        try:
            b64 = data["data"][0]["b64_json"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnavailable(f"malformed image response: {exc}")
        return ImageBlob(data=base64.b64decode(b64))

    def embed(self, text: str) -> list[float]:
        url = f"{self.config.embedding_base_url.rstrip('/')}/embeddings"
        data = self._post(
            url,
            self.config.completion_api_key,
            {"model": self.config.embedding_model, "input": text},
        )
        try:
            return list(data["data"][0]["embedding"])
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnavailable(f"malformed embedding response: {exc}")


@dataclass
class CallCounter:
    completions: int = 0
    images: int = 0
    embeddings: int = 0

    @property
    def total(self) -> int:
        return self.completions + self.images + self.embeddings


class ProviderSession:
    """Mode-aware facade over a transport and an optional cassette."""

    def __init__(
        self,
        mode: Mode,
        transport: Optional[Transport] = None,
        cassette: Optional[Cassette] = None,
        now: Callable[[], str] = lambda: datetime.now(timezone.utc).isoformat(),
    ):
        if mode is Mode.REPLAY and cassette is None:
            raise ValidationError("replay mode requires a loaded cassette")
        if mode in (Mode.LIVE, Mode.RECORD) and transport is None:
            raise ValidationError(f"{mode.value} mode requires a transport")
        if mode is Mode.RECORD and cassette is None:
            raise ValidationError("record mode requires a cassette to write")
        self.mode = mode
        self.transport = transport
        self.cassette = cassette
        self.calls = CallCounter()
        self._now = now

    def _record(self, kind: ProviderKind, digest: str, request: dict, response: dict):
        assert self.cassette is not None
        self.cassette.append(
            CassetteEntry(
                provider_kind=kind,
                request_digest=digest,
                request=request,
                response=response,
                recorded_at=self._now(),
            )
        )

    def _replay(self, kind: ProviderKind, digest: str) -> dict:
        assert self.cassette is not None
        entry = self.cassette.lookup(kind, digest)
        if entry is None:
            raise CassetteMiss(f"no recorded {kind.value} response for {digest[:12]}")
        return entry.response

    def complete(self, request: CompletionRequest) -> str:
        self.calls.completions += 1
        req = request.to_dict()
        digest = request_digest(ProviderKind.COMPLETION, req)
        if self.mode is Mode.REPLAY:
            return self._replay(ProviderKind.COMPLETION, digest)["text"]
        assert self.transport is not None
        text = self.transport.complete(request)
        if not text.strip():
            raise EmptyCompletion(f"provider returned blank text for {request.request_tag}")
        if self.mode is Mode.RECORD:
            self._record(ProviderKind.COMPLETION, digest, req, {"text": text})
        return text

    def generate_image(self, prompt: str) -> ImageBlob:
        if not prompt.strip():
            raise ValidationError("image prompt must be non-empty")
        self.calls.images += 1
        req = {"prompt": prompt}
        digest = request_digest(ProviderKind.IMAGE, req)
        if self.mode is Mode.REPLAY:
            response = self._replay(ProviderKind.IMAGE, digest)
            assert self.cassette is not None
            return ImageBlob(
                data=self.cassette.read_blob(response["file"]),
                media_type=response["media_type"],
            )
        assert self.transport is not None
        blob = self.transport.generate_image(prompt)
        if self.mode is Mode.RECORD:
            assert self.cassette is not None
            name = self.cassette.write_blob(blob)
            self._record(
                ProviderKind.IMAGE,
                digest,
                req,
                {"file": name, "media_type": blob.media_type},
            )
        return blob

    def embed(self, text: str) -> list[float]:
        if not text.strip():
            raise ValidationError("embedding input must be non-empty")
        self.calls.embeddings += 1
        req = {"text": text}
        digest = request_digest(ProviderKind.EMBEDDING, req)
        if self.mode is Mode.REPLAY:
            return list(self._replay(ProviderKind.EMBEDDING, digest)["vector"])
        assert self.transport is not None
        vector = self.transport.embed(text)
        if self.mode is Mode.RECORD:
            self._record(ProviderKind.EMBEDDING, digest, req, {"vector": list(vector)})
        return vector
