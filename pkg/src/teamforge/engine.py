"""End-to-end orchestration: generate, score, build the front, choose, persist.

A run is sequential: the candidate pool comes out of the generation loop,
every team within the size bounds is scored (exactly when the enumeration
is small enough, via NSGA-II otherwise), the non-dominated front is built,
and the configured strategy picks the final team. Everything computed
before a failing stage is persisted in a partial record.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, replace
from datetime import datetime, timezone

import numpy as np

from .chat import ChatProvider, HttpChatProvider, ScriptedChatProvider
from .config import RunConfig, resolve_api_key
from .embedding import (
    EmbeddingProvider,
    HashEmbeddingProvider,
    RemoteEmbeddingProvider,
    normalize,
)
from .errors import BoundsError, ConfigError, StageError, TeamforgeError
from .generation import run_generation
from .nsga2 import nsga2_front
from .objectives import PAIR_REL_VENDI, TeamScorer, agent_text
from .records import (
    RunRecord,
    STATUS_COMPLETE,
    STATUS_FAILED,
    append_record,
)
from .selection import (
    Nsga2Params,
    ParetoFront,
    Team,
    apply_strategy,
    coverage,
    enumerate_teams,
    generational_distance,
    pareto_front_exact,
    sort_front,
    team_count,
)
from .selector import select_team
from .tokens import TokenUsage


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def build_chat_provider(config: RunConfig) -> ChatProvider:
    spec = config.chat_provider
    kind = spec.get("kind")
    if kind == "scripted":
        path = spec.get("script_path")
        if not path:
            raise ConfigError("scripted chat provider needs script_path")
        return ScriptedChatProvider.from_file(
            path,
            model_name=spec.get("model", "scripted-chat"),
            temperature=config.temperature,
        )
    if kind == "http":
        endpoint = spec.get("endpoint")
        model = spec.get("model")
        if not endpoint or not model:
            raise ConfigError("http chat provider needs endpoint and model")
        return HttpChatProvider(
            endpoint,
            model,
            temperature=config.temperature,
            api_key=resolve_api_key(spec),
            timeout=float(spec.get("timeout", 120.0)),
        )
    raise ConfigError(f"unknown chat provider kind {kind!r}")


def build_embedding_provider(config: RunConfig) -> EmbeddingProvider:
    spec = config.embedding_provider
    kind = spec.get("kind")
    if kind == "hash":
        return HashEmbeddingProvider(
            dimension=int(spec.get("dimension", 64)), seed=config.embedding_seed()
        )
    if kind == "remote":
        endpoint = spec.get("endpoint")
        dimension = spec.get("dimension")
        if not endpoint or not dimension:
            raise ConfigError("remote embedding provider needs endpoint and dimension")
        return RemoteEmbeddingProvider(
            endpoint,
            int(dimension),
            provider_id=spec.get("provider_id", "remote"),
            auth_token=resolve_api_key(spec),
            timeout=float(spec.get("timeout", 30.0)),
        )
    raise ConfigError(f"unknown embedding provider kind {kind!r}")


def queries_context(queries: list[str]) -> str:
    """Single query verbatim; batches as a numbered list."""
    if len(queries) == 1:
        return queries[0]
    return "\n".join(f"{i}. {q}" for i, q in enumerate(queries, start=1))


def query_centroid(
    queries: list[str], embedder: EmbeddingProvider
) -> np.ndarray:
    """Renormalized centroid of the query embeddings."""
    vectors = np.vstack([embedder.embed(q) for q in queries])
    return normalize(vectors.mean(axis=0))


def run_id_for(config: RunConfig, gen_queries: list[str], sel_queries: list[str]) -> str:
    payload = json.dumps(
        {
            "config": config.to_dict(),
            "generation_queries": gen_queries,
            "selection_queries": sel_queries,
        },
        sort_keys=True,
    )
    return hashlib.blake2b(payload.encode("utf-8"), digest_size=8).hexdigest()


def score_and_front(
    pool_size: int,
    scorer: TeamScorer,
    config: RunConfig,
) -> tuple[list[Team], ParetoFront]:
    """Exact enumeration under the cap, NSGA-II approximation above it."""
    if pool_size < config.team_size_min:
        raise BoundsError(
            f"candidate pool of {pool_size} cannot form teams of at least "
            f"{config.team_size_min}"
        )
    total = team_count(pool_size, config.team_size_min, config.team_size_max)
    if total <= config.exact_enumeration_cap:
        scored = [
            Team(member_indices=m, scores=scorer.score(m))
            for m in enumerate_teams(
                pool_size, config.team_size_min, config.team_size_max
            )
        ]
        front = pareto_front_exact(scored, config.objective_pair)
        sort_front(front)
        return scored, front
    params = replace(config.nsga2, seed=config.nsga2_seed())
    front = nsga2_front(
        pool_size,
        scorer.score,
        config.team_size_min,
        config.team_size_max,
        params,
        config.objective_pair,
    )
    return list(front.teams), front


def init_transferable(
    gen_queries: list[str],
    sel_queries: list[str],
    config: RunConfig,
    *,
    chat_provider: ChatProvider | None = None,
    embedding_provider: EmbeddingProvider | None = None,
    records_path: str | None = None,
    select: bool = True,
) -> RunRecord:
    """One initialization run: x generation queries, y selection queries.

    Generation sees the x queries jointly in its task slot; relevance uses
    the renormalized centroid of the y query embeddings; the selector sees
    the y queries jointly. With x = y = 1 this is the plain single-query
    flow. ``select=False`` stops after the front (no team is chosen).
    """
    if not gen_queries or not sel_queries:
        raise ConfigError("need at least one generation query and one selection query")
    path = records_path if records_path is not None else config.records_path
    chat = chat_provider if chat_provider is not None else build_chat_provider(config)
    embedder = (
        embedding_provider
        if embedding_provider is not None
        else build_embedding_provider(config)
    )
    record = RunRecord(
        run_id=run_id_for(config, gen_queries, sel_queries),
        generation_queries=list(gen_queries),
        selection_queries=list(sel_queries),
        config=config.to_dict(),
        provider_descriptors={
            "chat": asdict(chat.descriptor),
            "embedding": asdict(embedder.descriptor),
        },
        started_at=_now(),
    )
    try:
        try:
            pool, _rounds = run_generation(
                queries_context(gen_queries),
                config.rounds,
                chat,
                format_retries=config.format_retries,
                on_round=record.rounds.append,
            )
        except StageError:
            raise
        except TeamforgeError as exc:
            raise StageError("generation", exc) from exc
        record.candidate_pool = pool

        try:
            if not pool:
                raise BoundsError("generation produced an empty candidate pool")
            texts = [agent_text(a, config.embed_policy) for a in pool]
            pool_embeddings = np.vstack([embedder.embed(t) for t in texts])
            centroid = query_centroid(sel_queries, embedder)
            scorer = TeamScorer(pool_embeddings, centroid, config.objective_pair)
            scored, front = score_and_front(len(pool), scorer, config)
        except StageError:
            raise
        except TeamforgeError as exc:
            raise StageError("scoring", exc) from exc
        record.scored_team_count = len(scored)
        record.front = front

        if select:
            try:
                context = queries_context(sel_queries)

                def selector_fn(front_: ParetoFront) -> Team:
                    return select_team(
                        front_,
                        context,
                        chat,
                        pool,
                        include_scores=config.selector_show_scores,
                        retries=config.selector_retries,
                        usage=record.selector_usage,
                    )

                chosen = apply_strategy(
                    len(pool),
                    scored,
                    front,
                    config.strategy,
                    rng_seed=config.strategy_seed(),
                    selector=selector_fn,
                )
                if chosen.scores is None:
                    chosen = Team(
                        member_indices=chosen.member_indices,
                        scores=scorer.score(chosen.member_indices),
                    )
            except StageError:
                raise
            except TeamforgeError as exc:
                raise StageError("selection", exc) from exc
            record.chosen_team = chosen
        record.status = STATUS_COMPLETE
    except StageError as exc:
        record.status = STATUS_FAILED
        record.error = str(exc)
        record.token_usage = token_report(record)
        record.finished_at = _now()
        if path:
            append_record(path, record)
        raise
    record.token_usage = token_report(record)
    record.finished_at = _now()
    if path:
        append_record(path, record)
    return record


def init_for_query(query: str, config: RunConfig, **kwargs) -> RunRecord:
    """Initialize a team for a single query (the x = y = 1 case)."""
    return init_transferable([query], [query], config, **kwargs)


def token_report(record: RunRecord) -> TokenUsage:
    """Aggregate usage by stage across all rounds plus the selector."""
    total = TokenUsage()
    for rnd in record.rounds:
        total.merge(rnd.token_usage)
    total.merge(record.selector_usage)
    return total


# --- synthetic pools for front-quality evaluation -----------------------

_VOCAB = (
    "algebra geometry calculus statistics probability logic proofs number "
    "theory optimization graphs search planning heuristics chemistry physics "
    "biology astronomy geology ecology medicine anatomy pharmacology coding "
    "python debugging compilers databases networking security cryptography "
    "writing editing rhetoric poetry narrative translation history economics "
    "law policy ethics philosophy linguistics music painting sculpture design "
    "finance marketing negotiation teaching robotics vision speech hardware"
).split()


def synthetic_scorer(
    pool_size: int,
    seed: int,
    *,
    dimension: int = 64,
    objective_pair: str = PAIR_REL_VENDI,
) -> TeamScorer:
    """Scorer over a seeded pool of word-soup agent descriptions."""
    rng = np.random.default_rng(seed)
    embedder = HashEmbeddingProvider(dimension=dimension, seed=seed)
    texts = [
        " ".join(rng.choice(_VOCAB, size=int(rng.integers(3, 9)), replace=True))
        for _ in range(pool_size)
    ]
    query = " ".join(rng.choice(_VOCAB, size=6, replace=True))
    embeddings = np.vstack([embedder.embed(t) for t in texts])
    return TeamScorer(embeddings, embedder.embed(query), objective_pair)


def evaluate_front_quality(
    pool_size: int,
    seed: int,
    *,
    params: Nsga2Params | None = None,
    team_size_min: int = 1,
    team_size_max: int | None = None,
    dimension: int = 64,
    objective_pair: str = PAIR_REL_VENDI,
) -> dict:
    """Coverage and generational distance of NSGA-II against the exact front
    on a synthetic enumerable pool."""
    if pool_size > 16:
        raise BoundsError("front-quality evaluation needs an enumerable pool (<= 16)")
    n_max = team_size_max if team_size_max is not None else pool_size
    scorer = synthetic_scorer(
        pool_size, seed, dimension=dimension, objective_pair=objective_pair
    )
    scored = [
        Team(member_indices=m, scores=scorer.score(m))
        for m in enumerate_teams(pool_size, team_size_min, n_max)
    ]
    exact = pareto_front_exact(scored, objective_pair)
    sort_front(exact)
    nsga_params = params if params is not None else Nsga2Params(seed=seed)
    approx = nsga2_front(
        pool_size, scorer.score, team_size_min, n_max, nsga_params, objective_pair
    )
    return {
        "pool_size": pool_size,
        "seed": seed,
        "team_count": len(scored),
        "exact_front_size": len(exact.teams),
        "approx_front_size": len(approx.teams),
        "coverage": coverage(approx, exact),
        "generational_distance": generational_distance(approx, exact),
    }
