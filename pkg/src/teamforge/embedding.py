"""Text embedding providers and cosine similarity.

All vectors are L2-normalized at ingestion so downstream similarity
matrices are true cosine matrices with unit diagonal. The one exception
is the all-zero sentinel returned for empty (or token-free) text; cosine
against the sentinel is defined as 0 so degenerate agents stay scorable.
"""

from __future__ import annotations

import hashlib
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
import requests

from .errors import DimensionMismatchError, ProviderUnreachableError

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class EmbeddingProviderDescriptor:
    provider_id: str
    dimension: int
    deterministic: bool


class EmbeddingProvider(ABC):
    """text in -> unit vector out; implementations must be safe for concurrent calls."""

    @property
    @abstractmethod
    def descriptor(self) -> EmbeddingProviderDescriptor: ...

    @property
    def dimension(self) -> int:
        return self.descriptor.dimension

    @abstractmethod
    def embed(self, text: str) -> np.ndarray: ...


def is_zero_sentinel(v: np.ndarray) -> bool:
    return not np.any(v)


def zero_sentinel(dimension: int) -> np.ndarray:
    return np.zeros(dimension, dtype=np.float64)


def normalize(v: np.ndarray) -> np.ndarray:
    """L2-normalize, mapping the zero vector to itself (the sentinel)."""
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return v.astype(np.float64)
    return np.asarray(v, dtype=np.float64) / norm


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity clamped to [-1, 1]; 0 if either vector is the zero sentinel."""
    if u.shape != v.shape:
        raise DimensionMismatchError(
            f"cosine: dimension mismatch {u.shape} vs {v.shape}"
        )
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    value = float(np.dot(u, v)) / (nu * nv)
    return max(-1.0, min(1.0, value))


class HashEmbeddingProvider(EmbeddingProvider):
    """Deterministic offline embedder: seeded token-hash bag of features.

    Each token is hashed (keyed blake2b, so the mapping is stable across
    processes and configurable via the seed) to one of ``dimension``
    buckets; token counts accumulate and the result is L2-normalized.
    Text with no tokens embeds to the zero sentinel.
    """

    def __init__(self, dimension: int = 64, seed: int = 0):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self._dim = dimension
        self._seed = seed
        self._key = seed.to_bytes(8, "little", signed=True)

    @property
    def descriptor(self) -> EmbeddingProviderDescriptor:
        return EmbeddingProviderDescriptor(
            provider_id=f"hash-d{self._dim}-s{self._seed}",
            dimension=self._dim,
            deterministic=True,
        )

    def _bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode("utf-8"), key=self._key, digest_size=8)
        return int.from_bytes(digest.digest(), "little") % self._dim

    def embed(self, text: str) -> np.ndarray:
        counts = np.zeros(self._dim, dtype=np.float64)
        for token in _TOKEN_RE.findall(text.lower()):
            counts[self._bucket(token)] += 1.0
        return normalize(counts)


class RemoteEmbeddingProvider(EmbeddingProvider):
    """Client for a sidecar embedding service.

    Wire contract: POST ``{"text": <str>}`` to the endpoint, response is
    JSON ``{"embedding": [<float>, ...]}`` of the configured dimension.
    The service itself (model choice, tokenizer) is opaque to the engine.
    """

    def __init__(
        self,
        endpoint: str,
        dimension: int,
        *,
        provider_id: str = "remote",
        auth_token: str | None = None,
        timeout: float = 30.0,
        session=None,
    ):
        self._endpoint = endpoint
        self._dim = dimension
        self._provider_id = provider_id
        self._auth_token = auth_token
        self._timeout = timeout
        self._session = session if session is not None else requests.Session()

    @property
    def descriptor(self) -> EmbeddingProviderDescriptor:
        return EmbeddingProviderDescriptor(
            provider_id=self._provider_id, dimension=self._dim, deterministic=False
        )

    def embed(self, text: str) -> np.ndarray:
        if not text.strip():
            return zero_sentinel(self._dim)
        headers = {}
        if self._auth_token:
            headers["Authorization"] = f"Bearer {self._auth_token}"
        try:
            resp = self._session.post(
                self._endpoint,
                json={"text": text},
                headers=headers,
                timeout=self._timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
        except ProviderUnreachableError:
            raise
        except Exception as exc:
            raise ProviderUnreachableError(
                f"embedding service at {self._endpoint}: {exc}"
            ) from exc
        values = np.asarray(payload.get("embedding", ()), dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != self._dim:
            raise DimensionMismatchError(
                f"embedding service returned length {values.shape}, expected {self._dim}"
            )
        if not np.all(np.isfinite(values)):
            raise DimensionMismatchError("embedding service returned non-finite values")
        return normalize(values)
