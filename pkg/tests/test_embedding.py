import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamforge.embedding import (
    HashEmbeddingProvider,
    RemoteEmbeddingProvider,
    cosine,
    is_zero_sentinel,
    normalize,
)
from teamforge.errors import DimensionMismatchError, ProviderUnreachableError

from oracles import fsum_norm


@pytest.fixture
def provider():
    return HashEmbeddingProvider(dimension=64, seed=7)


def test_empty_text_maps_to_zero_sentinel(provider):
    vec = provider.embed("")
    assert vec.shape == (64,)
    assert is_zero_sentinel(vec)
    assert is_zero_sentinel(provider.embed("   \t\n"))


def test_hash_provider_is_referentially_transparent(provider):
    text = "a deterministic bag of features"
    first = provider.embed(text)
    second = provider.embed(text)
    assert first.tobytes() == second.tobytes()
    # and across instances with the same seed
    other = HashEmbeddingProvider(dimension=64, seed=7)
    assert other.embed(text).tobytes() == first.tobytes()


def test_different_seeds_give_different_vectors():
    a = HashEmbeddingProvider(dimension=64, seed=1).embed("tokens here")
    b = HashEmbeddingProvider(dimension=64, seed=2).embed("tokens here")
    assert a.tobytes() != b.tobytes()


@given(st.text(min_size=1))
@settings(max_examples=200, deadline=None)
def test_nonempty_embeddings_are_unit_norm(text):
    vec = HashEmbeddingProvider(dimension=64, seed=3).embed(text)
    if is_zero_sentinel(vec):  # token-free input (punctuation only, etc.)
        return
    assert abs(fsum_norm(vec) - 1.0) <= 1e-9


def test_corpus_embeds_identically_twice():
    corpus = [f"document {i} about topic {i % 5}" for i in range(25)]
    p = HashEmbeddingProvider(dimension=32, seed=11)
    first = np.vstack([p.embed(t) for t in corpus])
    second = np.vstack([p.embed(t) for t in corpus])
    assert first.tobytes() == second.tobytes()


def test_cosine_self_similarity(provider):
    e = provider.embed("self similarity check")
    assert cosine(e, e) == 1.0


def test_cosine_antipodal(provider):
    e = provider.embed("antipodal vector")
    assert cosine(e, -e) == -1.0


def test_cosine_orthogonal():
    assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_cosine_zero_sentinel_is_zero(provider):
    e = provider.embed("something")
    z = np.zeros(64)
    assert cosine(e, z) == 0.0
    assert cosine(z, z) == 0.0


def test_cosine_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        cosine(np.ones(3), np.ones(4))


def test_cosine_symmetry_exact(provider):
    u = provider.embed("first text sample")
    v = provider.embed("second text sample")
    assert cosine(u, v) == cosine(v, u)


@given(st.floats(min_value=1e-6, max_value=1e6))
@settings(max_examples=100, deadline=None)
def test_cosine_scale_invariance(alpha):
    p = HashEmbeddingProvider(dimension=16, seed=5)
    u = p.embed("scaled left operand")
    v = p.embed("fixed right operand")
    assert abs(cosine(alpha * u, v) - cosine(u, v)) <= 1e-12


def test_normalize_keeps_zero_vector():
    z = np.zeros(8)
    assert is_zero_sentinel(normalize(z))


class _StubResponse:
    def __init__(self, payload, status_error=None):
        self._payload = payload
        self._status_error = status_error

    def raise_for_status(self):
        if self._status_error:
            raise self._status_error

    def json(self):
        return self._payload


class _StubSession:
    def __init__(self, payload=None, exc=None):
        self.payload = payload
        self.exc = exc
        self.requests = []

    def post(self, url, json=None, headers=None, timeout=None):
        self.requests.append({"url": url, "json": json, "headers": headers})
        if self.exc:
            raise self.exc
        return _StubResponse(self.payload)


def test_remote_provider_normalizes_and_passes_token():
    session = _StubSession(payload={"embedding": [3.0, 4.0]})
    p = RemoteEmbeddingProvider(
        "http://embed.local/v1", 2, auth_token="secret", session=session
    )
    vec = p.embed("hello world")
    assert np.allclose(vec, [0.6, 0.8])
    assert session.requests[0]["headers"]["Authorization"] == "Bearer secret"
    assert session.requests[0]["json"] == {"text": "hello world"}


def test_remote_provider_dimension_mismatch():
    session = _StubSession(payload={"embedding": [1.0, 2.0, 3.0]})
    p = RemoteEmbeddingProvider("http://embed.local/v1", 2, session=session)
    with pytest.raises(DimensionMismatchError):
        p.embed("hello")


def test_remote_provider_transport_failure():
    session = _StubSession(exc=ConnectionError("refused"))
    p = RemoteEmbeddingProvider("http://embed.local/v1", 2, session=session)
    with pytest.raises(ProviderUnreachableError):
        p.embed("hello")


def test_remote_provider_short_circuits_empty_text():
    session = _StubSession(payload={"embedding": [1.0, 0.0]})
    p = RemoteEmbeddingProvider("http://embed.local/v1", 2, session=session)
    assert is_zero_sentinel(p.embed("   "))
    assert session.requests == []
