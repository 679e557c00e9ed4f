"""NSGA-II front approximation over team-inclusion bitstrings.

Classic generational loop (Deb et al. 2002): fast non-dominated sorting,
crowding-distance-based survival, binary tournament mating, uniform
crossover, and per-bit mutation. Genomes are inclusion bitstrings of
length pool_size; a repair operator keeps every genome inside the team
size bounds, so no constraint handling is needed elsewhere. Both
objectives are maximized. Fully deterministic given the seed.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import BoundsError
from .objectives import ObjectiveScores, PAIR_REL_VENDI
from .selection import (
    METHOD_NSGA2,
    Nsga2Params,
    ParetoFront,
    Team,
    dominates,
    sort_front,
    validate_bounds,
)

ScoreFn = Callable[[tuple[int, ...]], ObjectiveScores]


def _fast_non_dominated_sort(values: list[tuple[float, float]]) -> list[list[int]]:
    n = len(values)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    domination_count = [0] * n
    fronts: list[list[int]] = [[]]
    scores = [ObjectiveScores(v[0], v[1], 0) for v in values]
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(scores[i], scores[j]):
                dominated_by[i].append(j)
                domination_count[j] += 1
            elif dominates(scores[j], scores[i]):
                dominated_by[j].append(i)
                domination_count[i] += 1
    for i in range(n):
        if domination_count[i] == 0:
            fronts[0].append(i)
    k = 0
    while fronts[k]:
        nxt: list[int] = []
        for p in fronts[k]:
            for q in dominated_by[p]:
                domination_count[q] -= 1
                if domination_count[q] == 0:
                    nxt.append(q)
        fronts.append(nxt)
        k += 1
    fronts.pop()
    return fronts


def _crowding_distances(
    indices: list[int], values: list[tuple[float, float]]
) -> dict[int, float]:
    distance = {i: 0.0 for i in indices}
    for m in range(2):
        ordered = sorted(indices, key=lambda i: values[i][m])
        lo = values[ordered[0]][m]
        hi = values[ordered[-1]][m]
        distance[ordered[0]] = distance[ordered[-1]] = float("inf")
        if hi == lo:
            continue
        for prev_i, i, next_i in zip(ordered, ordered[1:], ordered[2:]):
            distance[i] += (values[next_i][m] - values[prev_i][m]) / (hi - lo)
    return distance


class _Evaluator:
    """Member-tuple score cache around the caller's scoring function."""

    def __init__(self, score_fn: ScoreFn):
        self._score_fn = score_fn
        self._cache: dict[tuple[int, ...], ObjectiveScores] = {}

    def __call__(self, members: tuple[int, ...]) -> ObjectiveScores:
        hit = self._cache.get(members)
        if hit is None:
            hit = self._score_fn(members)
            self._cache[members] = hit
        return hit


def _members(genome: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(genome))


def _repair(
    genome: np.ndarray,
    n_min: int,
    n_max: int,
    evaluate: _Evaluator,
    rng: np.random.Generator,
) -> np.ndarray:
    size = int(genome.sum())
    if size < n_min:
        absent = np.flatnonzero(~genome)
        added = rng.choice(absent, size=n_min - size, replace=False)
        genome[added] = True
        return genome
    # Oversized: greedily drop the member whose removal leaves the best team,
    # judged by relevance + diversity min-max normalized across the candidates.
    while int(genome.sum()) > n_max:
        members = list(_members(genome))
        reduced = [tuple(m for m in members if m != drop) for drop in members]
        scored = [evaluate(t) for t in reduced]
        rels = [s.relevance for s in scored]
        divs = [s.diversity for s in scored]
        r_lo, r_hi = min(rels), max(rels)
        d_lo, d_hi = min(divs), max(divs)
        r_span = r_hi - r_lo
        d_span = d_hi - d_lo
        best_drop = 0
        best_sum = -np.inf
        for k in range(len(members)):
            total = ((rels[k] - r_lo) / r_span if r_span else 0.0) + (
                (divs[k] - d_lo) / d_span if d_span else 0.0
            )
            if total > best_sum:
                best_sum = total
                best_drop = k
        genome[members[best_drop]] = False
    return genome


def nsga2_front(
    pool_size: int,
    score_fn: ScoreFn,
    n_min: int,
    n_max: int,
    params: Nsga2Params,
    objective_pair: str = PAIR_REL_VENDI,
    on_generation: Callable[[int, list[tuple[int, ...]]], None] | None = None,
) -> ParetoFront:
    """Approximate the Pareto front; returns the final population's rank-0 set,
    deduplicated by member set."""
    effective_max = validate_bounds(pool_size, n_min, n_max)
    if pool_size < n_min:
        raise BoundsError(
            f"pool of {pool_size} cannot form teams of at least {n_min}"
        )
    evaluate = _Evaluator(score_fn)
    rng = np.random.default_rng(params.seed)
    pop_size = params.population_size
    mutation_rate = (
        params.mutation_rate if params.mutation_rate is not None else 1.0 / pool_size
    )

    population: list[np.ndarray] = []
    for _ in range(pop_size):
        size = int(rng.integers(n_min, effective_max + 1))
        genome = np.zeros(pool_size, dtype=bool)
        genome[rng.choice(pool_size, size=size, replace=False)] = True
        population.append(genome)
    if on_generation is not None:
        on_generation(0, [_members(g) for g in population])

    def values_of(genomes: list[np.ndarray]) -> list[tuple[float, float]]:
        out = []
        for g in genomes:
            s = evaluate(_members(g))
            out.append((s.relevance, s.diversity))
        return out

    for generation in range(1, params.generations + 1):
        values = values_of(population)
        fronts = _fast_non_dominated_sort(values)
        rank = [0] * len(population)
        crowd = [0.0] * len(population)
        for r, front in enumerate(fronts):
            dists = _crowding_distances(front, values)
            for i in front:
                rank[i] = r
                crowd[i] = dists[i]

        def tournament() -> int:
            a, b = int(rng.integers(pop_size)), int(rng.integers(pop_size))
            if rank[a] < rank[b]:
                return a
            if rank[b] < rank[a]:
                return b
            return a if crowd[a] >= crowd[b] else b

        offspring: list[np.ndarray] = []
        while len(offspring) < pop_size:
            p1 = population[tournament()].copy()
            p2 = population[tournament()].copy()
            if rng.random() < params.crossover_rate:
                mask = rng.random(pool_size) < 0.5
                c1 = np.where(mask, p1, p2)
                c2 = np.where(mask, p2, p1)
            else:
                c1, c2 = p1, p2
            for child in (c1, c2):
                flips = rng.random(pool_size) < mutation_rate
                child = child ^ flips
                child = _repair(child, n_min, effective_max, evaluate, rng)
                offspring.append(child)
        offspring = offspring[:pop_size]

        combined = population + offspring
        combined_values = values_of(combined)
        combined_fronts = _fast_non_dominated_sort(combined_values)
        survivors: list[np.ndarray] = []
        for front in combined_fronts:
            if len(survivors) + len(front) <= pop_size:
                survivors.extend(combined[i] for i in front)
            else:
                dists = _crowding_distances(front, combined_values)
                by_crowding = sorted(front, key=lambda i: -dists[i])
                remaining = pop_size - len(survivors)
                survivors.extend(combined[i] for i in by_crowding[:remaining])
            if len(survivors) >= pop_size:
                break
        population = survivors
        if on_generation is not None:
            on_generation(generation, [_members(g) for g in population])

    unique: dict[tuple[int, ...], ObjectiveScores] = {}
    for genome in population:
        members = _members(genome)
        if members not in unique:
            unique[members] = evaluate(members)
    members_list = list(unique.keys())
    values = [(s.relevance, s.diversity) for s in unique.values()]
    rank0 = _fast_non_dominated_sort(values)[0]
    teams = [
        Team(member_indices=members_list[i], scores=unique[members_list[i]])
        for i in rank0
    ]
    front = ParetoFront(teams=teams, method=METHOD_NSGA2, objective_pair=objective_pair)
    sort_front(front)
    return front
