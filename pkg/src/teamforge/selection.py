"""Candidate-team enumeration, Pareto dominance, and selection strategies.

Dominance is strict-form: a dominates b when a is at least as good on both
objectives and strictly better on at least one, so equal objective vectors
never dominate each other and all of them survive into the front.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import BoundsError, EmptyFrontError, StrategyUnavailableError
from .objectives import ObjectiveScores, PAIR_REL_VENDI

METHOD_EXACT = "exact"
METHOD_NSGA2 = "nsga2"

STRATEGY_PARETO_BEST = "pareto_best"
STRATEGY_PARETO_WORST = "pareto_worst"
STRATEGY_GLOBAL_WORST = "global_worst"
STRATEGY_RANDOM = "random"
STRATEGY_NONE = "none"
STRATEGY_ONLY_REL = "only_rel"
STRATEGY_ONLY_DIV = "only_div"
STRATEGIES = (
    STRATEGY_PARETO_BEST,
    STRATEGY_PARETO_WORST,
    STRATEGY_GLOBAL_WORST,
    STRATEGY_RANDOM,
    STRATEGY_NONE,
    STRATEGY_ONLY_REL,
    STRATEGY_ONLY_DIV,
)


@dataclass(frozen=True)
class Team:
    """A candidate team: sorted unique indices into the pool, plus its scores."""

    member_indices: tuple[int, ...]
    scores: ObjectiveScores | None = None

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.member_indices, self.member_indices[1:])):
            raise ValueError("member indices must be strictly increasing")
        if self.member_indices and self.member_indices[0] < 0:
            raise ValueError("member indices must be nonnegative")

    @property
    def size(self) -> int:
        return len(self.member_indices)

    def to_dict(self) -> dict:
        return {
            "member_indices": list(self.member_indices),
            "scores": self.scores.to_dict() if self.scores else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Team":
        scores = d.get("scores")
        return cls(
            member_indices=tuple(d["member_indices"]),
            scores=ObjectiveScores.from_dict(scores) if scores else None,
        )


@dataclass
class ParetoFront:
    teams: list[Team]
    method: str
    objective_pair: str = PAIR_REL_VENDI

    def member_sets(self) -> set[tuple[int, ...]]:
        return {t.member_indices for t in self.teams}

    def to_dict(self) -> dict:
        return {
            "teams": [t.to_dict() for t in self.teams],
            "method": self.method,
            "objective_pair": self.objective_pair,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParetoFront":
        return cls(
            teams=[Team.from_dict(t) for t in d["teams"]],
            method=d["method"],
            objective_pair=d.get("objective_pair", PAIR_REL_VENDI),
        )


@dataclass(frozen=True)
class Nsga2Params:
    population_size: int = 100
    generations: int = 50
    crossover_rate: float = 0.9
    mutation_rate: float | None = None  # None: 1/pool_size per bit
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.generations < 1:
            raise ValueError("generations must be positive")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must be in [0, 1]")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "population_size": self.population_size,
            "generations": self.generations,
            "crossover_rate": self.crossover_rate,
            "mutation_rate": self.mutation_rate,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Nsga2Params":
        return cls(
            population_size=int(d.get("population_size", 100)),
            generations=int(d.get("generations", 50)),
            crossover_rate=float(d.get("crossover_rate", 0.9)),
            mutation_rate=(
                None if d.get("mutation_rate") is None else float(d["mutation_rate"])
            ),
            seed=int(d.get("seed", 0)),
        )


def validate_bounds(pool_size: int, n_min: int, n_max: int) -> int:
    """Check size bounds against a pool; returns the effective maximum size."""
    if n_min < 1 or n_min > n_max:
        raise BoundsError(f"invalid team-size bounds [{n_min}, {n_max}]")
    if pool_size < 1:
        raise BoundsError("pool must contain at least one candidate")
    return min(n_max, pool_size)


def enumerate_teams(pool_size: int, n_min: int, n_max: int) -> Iterator[tuple[int, ...]]:
    """Yield every member-index subset of size n_min..min(n_max, pool_size).

    Sizes ascend; within each size, tuples come out in lexicographic order.
    """
    effective_max = validate_bounds(pool_size, n_min, n_max)
    for size in range(n_min, effective_max + 1):
        yield from combinations(range(pool_size), size)


def team_count(pool_size: int, n_min: int, n_max: int) -> int:
    from math import comb

    effective_max = validate_bounds(pool_size, n_min, n_max)
    return sum(comb(pool_size, r) for r in range(n_min, effective_max + 1))


def dominates(a: ObjectiveScores, b: ObjectiveScores) -> bool:
    if a.relevance >= b.relevance and a.diversity >= b.diversity:
        return a.relevance > b.relevance or a.diversity > b.diversity
    return False


def _front_sort_key(team: Team):
    return (-team.scores.relevance, -team.scores.diversity, team.member_indices)


def pareto_front_exact(
    teams: Iterable[Team], objective_pair: str = PAIR_REL_VENDI
) -> ParetoFront:
    """Exact non-dominated set via a single sorted sweep.

    After sorting by descending relevance, a team survives iff its diversity
    strictly exceeds the best diversity seen at any strictly higher relevance
    and it holds the maximum diversity within its own relevance tier (where
    only strictly-larger diversity dominates). Equal objective vectors are
    all retained.
    """
    ordered = sorted(teams, key=_front_sort_key)
    if not ordered:
        raise EmptyFrontError("cannot build a front from zero teams")
    front: list[Team] = []
    best_div_above = -np.inf
    i = 0
    while i < len(ordered):
        j = i
        tier_rel = ordered[i].scores.relevance
        while j < len(ordered) and ordered[j].scores.relevance == tier_rel:
            j += 1
        tier_best_div = ordered[i].scores.diversity  # sorted desc within tier
        if tier_best_div > best_div_above:
            for team in ordered[i:j]:
                if team.scores.diversity == tier_best_div:
                    front.append(team)
            best_div_above = tier_best_div
        i = j
    return ParetoFront(teams=front, method=METHOD_EXACT, objective_pair=objective_pair)


def sort_front(front: ParetoFront) -> None:
    front.teams.sort(key=_front_sort_key)


def coverage(approx: ParetoFront, exact: ParetoFront) -> float:
    """Fraction of exact-front member sets recovered by the approximate front."""
    exact_sets = exact.member_sets()
    if not exact_sets:
        raise EmptyFrontError("exact front is empty")
    approx_sets = approx.member_sets()
    return len(exact_sets & approx_sets) / len(exact_sets)


def _objective_points(front: ParetoFront) -> np.ndarray:
    return np.array(
        [(t.scores.relevance, t.scores.diversity) for t in front.teams], dtype=float
    )


def generational_distance(approx: ParetoFront, exact: ParetoFront) -> float:
    """Mean distance from approximate points to their nearest exact points.

    Each objective is min-max normalized to [0, 1] over the union of both
    fronts before distancing; an objective constant across the union
    contributes zero.
    """
    if not approx.teams or not exact.teams:
        raise EmptyFrontError("generational distance needs two nonempty fronts")
    a = _objective_points(approx)
    e = _objective_points(exact)
    union = np.vstack([a, e])
    lo = union.min(axis=0)
    span = union.max(axis=0) - lo
    span[span == 0.0] = 1.0
    a_n = (a - lo) / span
    e_n = (e - lo) / span
    dists = np.sqrt(((a_n[:, None, :] - e_n[None, :, :]) ** 2).sum(axis=2))
    return float(dists.min(axis=1).mean())


def normalized_objective_sums(teams: list[Team]) -> list[float]:
    """Min-max normalized relevance + diversity per team, over the given list."""
    rels = [t.scores.relevance for t in teams]
    divs = [t.scores.diversity for t in teams]
    r_lo, r_hi = min(rels), max(rels)
    d_lo, d_hi = min(divs), max(divs)
    r_span = r_hi - r_lo
    d_span = d_hi - d_lo
    return [
        ((r - r_lo) / r_span if r_span else 0.0)
        + ((d - d_lo) / d_span if d_span else 0.0)
        for r, d in zip(rels, divs)
    ]


def _tie_key(team: Team):
    return (team.size, team.member_indices)


def best_by_normalized_sum(teams: list[Team]) -> Team:
    """Knee point: maximize the normalized objective sum; ties go to the
    smaller team, then the lexicographically smallest member tuple."""
    if not teams:
        raise EmptyFrontError("no teams to choose from")
    sums = normalized_objective_sums(teams)
    top = max(sums)
    candidates = [t for s, t in zip(sums, teams) if s == top]
    return min(candidates, key=_tie_key)


def worst_by_normalized_sum(teams: list[Team]) -> Team:
    if not teams:
        raise EmptyFrontError("no teams to choose from")
    sums = normalized_objective_sums(teams)
    bottom = min(sums)
    candidates = [t for s, t in zip(sums, teams) if s == bottom]
    return min(candidates, key=_tie_key)


def _argmax_single_objective(teams: list[Team], attribute: str) -> Team:
    best_value = max(getattr(t.scores, attribute) for t in teams)
    candidates = [t for t in teams if getattr(t.scores, attribute) == best_value]
    return min(candidates, key=_tie_key)


def apply_strategy(
    pool_size: int,
    scored_teams: list[Team],
    front: ParetoFront,
    strategy: str,
    *,
    rng_seed: int = 0,
    selector: Callable[[ParetoFront], Team] | None = None,
) -> Team:
    """Pick the final team under one of the ablation/selection strategies.

    ``selector`` realizes the pareto_best choice (and fixes the team size the
    random strategy mimics); strategies that scan all candidate teams require
    ``scored_teams`` to be the full enumeration.
    """
    if strategy not in STRATEGIES:
        raise StrategyUnavailableError(f"unknown strategy {strategy!r}")
    if strategy == STRATEGY_NONE:
        full = tuple(range(pool_size))
        for team in scored_teams:
            if team.member_indices == full:
                return team
        return Team(member_indices=full)
    if not scored_teams:
        raise EmptyFrontError("no scored teams available")
    if strategy in (STRATEGY_PARETO_BEST, STRATEGY_RANDOM) and selector is None:
        raise StrategyUnavailableError(f"strategy {strategy!r} needs a selector")
    if strategy == STRATEGY_PARETO_BEST:
        return selector(front)
    if strategy == STRATEGY_PARETO_WORST:
        return worst_by_normalized_sum(front.teams)
    if strategy == STRATEGY_GLOBAL_WORST:
        if front.method != METHOD_EXACT:
            raise StrategyUnavailableError(
                "global_worst needs exhaustively scored teams"
            )
        return worst_by_normalized_sum(scored_teams)
    if strategy == STRATEGY_RANDOM:
        size = selector(front).size
        rng = np.random.default_rng(rng_seed)
        members = tuple(sorted(rng.choice(pool_size, size=size, replace=False).tolist()))
        for team in scored_teams:
            if team.member_indices == members:
                return team
        return Team(member_indices=members)
    if front.method != METHOD_EXACT:
        raise StrategyUnavailableError(f"{strategy} needs exhaustively scored teams")
    if strategy == STRATEGY_ONLY_REL:
        return _argmax_single_objective(scored_teams, "relevance")
    return _argmax_single_objective(scored_teams, "diversity")
