"""Final team choice: present numbered front groups to a chat model.

One group is rendered per distinct objective vector (teams with identical
scores are listed as alternates), ordered by descending relevance. If the
whole front collapses to a single distinct vector the provider is never
called. An unparseable or out-of-range choice, after retries, falls back
to the knee point: the front member with the best min-max-normalized
relevance + diversity sum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .agents import AgentSpec
from .chat import CallTag, ChatProvider
from .errors import ChoiceOutOfRangeError, ChoiceParseError, EmptyFrontError
from .prompts import SELECTOR_TEMPLATE, render
from .selection import ParetoFront, Team, best_by_normalized_sum, sort_front
from .tokens import TokenUsage

_CHOICE_RE = re.compile(r"Choice:\s*Group\s+(\d+)")

DEFAULT_SELECTOR_RETRIES = 2


@dataclass
class GroupPresentation:
    group_number: int
    team: Team
    rendered_text: str
    alternates: list[Team] = field(default_factory=list)


def parse_choice(text: str, group_count: int) -> int:
    """Index from the last 'Choice: Group <n>' occurrence; 1-based."""
    if group_count < 1:
        raise ValueError("group_count must be positive")
    matches = _CHOICE_RE.findall(text)
    if not matches:
        raise ChoiceParseError("no 'Choice: Group <number>' found in response")
    choice = int(matches[-1])
    if not 1 <= choice <= group_count:
        raise ChoiceOutOfRangeError(
            f"choice {choice} outside the presented range 1..{group_count}"
        )
    return choice


def _render_team(team: Team, pool: list[AgentSpec], *, include_scores: bool) -> str:
    lines = [
        f"- {pool[i].name}: {pool[i].description}" for i in team.member_indices
    ]
    if include_scores and team.scores is not None:
        lines.append(
            f"(relevance {team.scores.relevance:.4f}, diversity {team.scores.diversity:.4f})"
        )
    return "\n".join(lines)


def build_group_presentations(
    front: ParetoFront, pool: list[AgentSpec], *, include_scores: bool = False
) -> list[GroupPresentation]:
    """One numbered group per distinct objective vector, descending relevance."""
    if not front.teams:
        raise EmptyFrontError("cannot present an empty front")
    ordered = ParetoFront(
        teams=list(front.teams), method=front.method, objective_pair=front.objective_pair
    )
    sort_front(ordered)
    groups: list[GroupPresentation] = []
    seen: dict[tuple[float, float], GroupPresentation] = {}
    for team in ordered.teams:
        vector = (team.scores.relevance, team.scores.diversity)
        if vector in seen:
            seen[vector].alternates.append(team)
            continue
        number = len(groups) + 1
        presentation = GroupPresentation(
            group_number=number,
            team=team,
            rendered_text="",
        )
        groups.append(presentation)
        seen[vector] = presentation
    for g in groups:
        header = f"Group {g.group_number}:"
        body = _render_team(g.team, pool, include_scores=include_scores)
        if g.alternates:
            alt_names = [
                " + ".join(pool[i].name for i in alt.member_indices)
                for alt in g.alternates
            ]
            body += "\nAlternates with identical scores: " + "; ".join(alt_names)
        g.rendered_text = f"{header}\n{body}"
    return groups


def select_team(
    front: ParetoFront,
    query: str,
    provider: ChatProvider | None,
    pool: list[AgentSpec],
    *,
    include_scores: bool = False,
    retries: int = DEFAULT_SELECTOR_RETRIES,
    usage: TokenUsage | None = None,
) -> Team:
    """Choose one front team via the selector prompt (or deterministically).

    Always returns a member of the input front. Requires a provider only
    when the front offers a real choice.
    """
    groups = build_group_presentations(front, pool, include_scores=include_scores)
    if len(groups) == 1:
        return groups[0].team
    if provider is None:
        return best_by_normalized_sum(front.teams)
    prompt = render(
        SELECTOR_TEMPLATE,
        context=query,
        groups="\n\n".join(g.rendered_text for g in groups),
    )
    for attempt in range(retries + 1):
        response = provider.complete(
            [("user", prompt)], tag=CallTag("selector", 0, attempt)
        )
        if usage is not None:
            usage.add("selector", response.prompt_tokens, response.completion_tokens)
        try:
            choice = parse_choice(response.text, len(groups))
        except ChoiceParseError:
            continue
        return groups[choice - 1].team
    return best_by_normalized_sum(front.teams)
