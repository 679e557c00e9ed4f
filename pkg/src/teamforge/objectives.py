"""The two team-selection objectives plus ablation and diagnostic metrics.

Relevance is the mean cosine similarity between each member's embedded
text and the query embedding. Diversity is the Vendi score of the team's
cosine similarity matrix: the exponential of the Shannon entropy of the
eigenvalues of S/n. Normalizing by n makes the spectrum a probability
distribution (trace(S)/n = 1 for unit-diagonal S), which pins the score
to 1 for n identical members and n for n pairwise-orthogonal ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .agents import AgentSpec
from .embedding import cosine, normalize
from .errors import EigensolverError, EmptyTeamError

EMBED_DESCRIPTION = "description"
EMBED_NAME_AND_DESCRIPTION = "name_and_description"
EMBED_POLICIES = (EMBED_DESCRIPTION, EMBED_NAME_AND_DESCRIPTION)

PAIR_REL_VENDI = "rel_vendi"
PAIR_REL_DIVAVG = "rel_divavg"
OBJECTIVE_PAIRS = (PAIR_REL_VENDI, PAIR_REL_DIVAVG)

# Negative eigenvalue mass beyond this is not roundoff noise on a Gram matrix.
_CLIP_MASS_LIMIT = 1e-6


def agent_text(agent: AgentSpec, policy: str = EMBED_DESCRIPTION) -> str:
    """Resolve which text of an agent gets embedded for scoring."""
    if policy == EMBED_DESCRIPTION:
        return agent.description
    if policy == EMBED_NAME_AND_DESCRIPTION:
        return f"{agent.name}: {agent.description}"
    raise ValueError(f"unknown embed policy {policy!r}")


def relevance(member_embeddings: np.ndarray, query_embedding: np.ndarray) -> float:
    """Mean cosine similarity of each member embedding to the query embedding."""
    if member_embeddings.shape[0] == 0:
        raise EmptyTeamError("relevance of an empty team is undefined")
    return float(
        np.mean([cosine(row, query_embedding) for row in member_embeddings])
    )


def similarity_matrix(member_embeddings: np.ndarray) -> np.ndarray:
    """Pairwise cosine matrix; exactly symmetric, diagonal 1 for nonzero rows."""
    n = member_embeddings.shape[0]
    if n == 0:
        raise EmptyTeamError("similarity matrix of an empty team is undefined")
    rows = np.vstack([normalize(row) for row in member_embeddings])
    s = np.clip(rows @ rows.T, -1.0, 1.0)
    s = (s + s.T) / 2.0
    nonzero = np.any(rows, axis=1)
    np.fill_diagonal(s, np.where(nonzero, 1.0, 0.0))
    return s


def normalized_spectrum(similarity: np.ndarray) -> np.ndarray:
    """Eigenvalues of S/n clipped at 0 and renormalized to sum 1, descending.

    S is a Gram matrix, so any negative eigenvalues are roundoff; if their
    total mass exceeds the noise budget the decomposition is not trusted.
    """
    n = similarity.shape[0]
    eig = np.linalg.eigvalsh(similarity / n)
    clipped_mass = float(-eig[eig < 0.0].sum())
    if clipped_mass > _CLIP_MASS_LIMIT:
        raise EigensolverError(
            f"negative eigenvalue mass {clipped_mass:.3e} exceeds noise budget"
        )
    lam = np.clip(eig, 0.0, None)
    total = float(lam.sum())
    if total > 0.0:
        lam = lam / total
    return lam[::-1]


def vendi_diversity(similarity: np.ndarray) -> float:
    """exp of the Shannon entropy of the normalized spectrum; in [1, n]."""
    lam = normalized_spectrum(similarity)
    if float(lam.sum()) == 0.0:
        # All-sentinel team: no similarity information, minimally diverse.
        return 1.0
    pos = lam[lam > 0.0]
    entropy = float(-(pos * np.log(pos)).sum())
    return math.exp(entropy)


def avg_similarity_diversity(similarity: np.ndarray) -> float:
    """1 minus the mean off-diagonal similarity, oriented so higher is more diverse."""
    n = similarity.shape[0]
    if n == 0:
        raise EmptyTeamError("diversity of an empty team is undefined")
    if n == 1:
        return 1.0
    off_sum = float(similarity.sum() - np.trace(similarity))
    return 1.0 - off_sum / (n * (n - 1))


def max_pairwise_similarity(similarity: np.ndarray) -> float:
    """Largest off-diagonal similarity (team redundancy); 0 for a single member."""
    n = similarity.shape[0]
    if n == 0:
        raise EmptyTeamError("similarity of an empty team is undefined")
    if n == 1:
        return 0.0
    masked = similarity.copy()
    np.fill_diagonal(masked, -np.inf)
    return float(masked.max())


@dataclass(frozen=True)
class ObjectiveScores:
    relevance: float
    diversity: float
    team_size: int

    def to_dict(self) -> dict:
        return {
            "relevance": self.relevance,
            "diversity": self.diversity,
            "team_size": self.team_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ObjectiveScores":
        return cls(
            relevance=float(d["relevance"]),
            diversity=float(d["diversity"]),
            team_size=int(d["team_size"]),
        )


class TeamScorer:
    """Scores member-index subsets against one query, caching pool-level work.

    The full pool similarity matrix and per-member query cosines are computed
    once; each team score is then a submatrix eigendecomposition plus a mean.
    Pure with respect to its inputs, so safe to share across threads.
    """

    def __init__(
        self,
        pool_embeddings: np.ndarray,
        query_embedding: np.ndarray,
        objective_pair: str = PAIR_REL_VENDI,
    ):
        if objective_pair not in OBJECTIVE_PAIRS:
            raise ValueError(f"unknown objective pair {objective_pair!r}")
        self.objective_pair = objective_pair
        self._pool_similarity = similarity_matrix(pool_embeddings)
        self._query_cos = np.array(
            [cosine(row, query_embedding) for row in pool_embeddings]
        )
        self._cache: dict[tuple[int, ...], ObjectiveScores] = {}

    @property
    def pool_size(self) -> int:
        return self._query_cos.shape[0]

    def team_similarity(self, member_indices: tuple[int, ...]) -> np.ndarray:
        idx = list(member_indices)
        return self._pool_similarity[np.ix_(idx, idx)]

    def score(self, member_indices: tuple[int, ...]) -> ObjectiveScores:
        cached = self._cache.get(member_indices)
        if cached is not None:
            return cached
        if not member_indices:
            raise EmptyTeamError("cannot score an empty team")
        rel = float(self._query_cos[list(member_indices)].mean())
        sub = self.team_similarity(member_indices)
        if self.objective_pair == PAIR_REL_VENDI:
            div = vendi_diversity(sub)
        else:
            div = avg_similarity_diversity(sub)
        scores = ObjectiveScores(
            relevance=rel, diversity=div, team_size=len(member_indices)
        )
        self._cache[member_indices] = scores
        return scores
