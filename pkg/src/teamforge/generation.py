"""Iterative candidate-pool generation: plan, standardize, critique.

Each round issues one planner completion (free-form text, no format
constraints), one formatter completion that standardizes it into the
sectioned document, and, on every round but the last, two observer
completions (one critiques the roles, one the plan). The final round's
agents form the candidate pool; feedback threads forward between rounds.
"""

from __future__ import annotations

from typing import Callable

from .agents import AgentSpec, Feedback, GenerationRound, ORIGIN_CREATED, ORIGIN_SELECTED
from .chat import CallTag, ChatProvider
from .errors import EmptyCompletionError, FormatParseError, StageError, TeamforgeError
from .formatting import (
    ParsedPlan,
    extract_suggestions,
    parse_plan_document,
    render_plan_lines,
    role_record_json,
)
from .prompts import (
    FORMATTER_FORMAT_EXAMPLE,
    FORMATTER_TEMPLATE,
    OBSERVER_FORMAT_EXAMPLE,
    OBSERVER_PLAN_TEMPLATE,
    OBSERVER_ROLES_TEMPLATE,
    PLANNER_TEMPLATE,
    render,
)
from .tokens import TokenUsage

NONE_PLACEHOLDER = "None"

DEFAULT_FORMAT_RETRIES = 2


def render_roles_json(agents: list[AgentSpec]) -> str:
    if not agents:
        return NONE_PLACEHOLDER
    return ",\n".join(role_record_json(a) for a in agents)


def render_suggestion_history(prior_rounds: list[GenerationRound]) -> str:
    """All prior rounds' suggestions verbatim, oldest first, newest last."""
    blocks = []
    for rnd in prior_rounds:
        if rnd.feedback is None:
            continue
        blocks.append(
            f"Round {rnd.round_index} role suggestions:\n{rnd.feedback.role_feedback}\n"
            f"Round {rnd.round_index} plan suggestions:\n{rnd.feedback.plan_feedback}"
        )
    return "\n\n".join(blocks) if blocks else NONE_PLACEHOLDER


def render_latest_suggestions(prior: GenerationRound | None) -> str:
    """The previous round's sub-tasks and feedback, for the planner's Suggestions slot."""
    if prior is None or prior.feedback is None:
        return NONE_PLACEHOLDER
    plan = render_plan_lines(prior.subtasks) or NONE_PLACEHOLDER
    return (
        f"Sub-tasks from the previous round:\n{plan}\n\n"
        f"Role suggestions:\n{prior.feedback.role_feedback}\n\n"
        f"Plan suggestions:\n{prior.feedback.plan_feedback}"
    )


def plan_round(
    query: str,
    prior_rounds: list[GenerationRound],
    provider: ChatProvider,
    usage: TokenUsage,
    round_index: int,
) -> str:
    """One planner completion; returns the model's free-form text untouched."""
    prior = prior_rounds[-1] if prior_rounds else None
    prompt = render(
        PLANNER_TEMPLATE,
        context=query,
        existing_roles=render_roles_json(prior.agents) if prior else NONE_PLACEHOLDER,
        history=render_suggestion_history(prior_rounds),
        suggestions=render_latest_suggestions(prior),
    )
    response = provider.complete(
        [("user", prompt)], tag=CallTag("planner", round_index, 0)
    )
    usage.add("planner", response.prompt_tokens, response.completion_tokens)
    if not response.text.strip():
        raise EmptyCompletionError("planner returned an empty completion")
    return response.text


def format_round(
    raw_planner_text: str,
    provider: ChatProvider,
    usage: TokenUsage,
    round_index: int,
    retries: int = DEFAULT_FORMAT_RETRIES,
) -> ParsedPlan:
    """Standardize the planner's text; retries with the parse error appended."""
    base_prompt = render(
        FORMATTER_TEMPLATE,
        raw_content=raw_planner_text,
        format_example=FORMATTER_FORMAT_EXAMPLE,
    )
    prompt = base_prompt
    last_error: FormatParseError | None = None
    for attempt in range(retries + 1):
        response = provider.complete(
            [("user", prompt)], tag=CallTag("formatter", round_index, attempt)
        )
        usage.add("formatter", response.prompt_tokens, response.completion_tokens)
        try:
            return parse_plan_document(response.text)
        except FormatParseError as exc:
            last_error = exc
            prompt = (
                f"{base_prompt}\n# Previous Attempt Error\n"
                f"Your previous output could not be parsed ({exc}). "
                "Produce the full document again, following the format exactly."
            )
    raise last_error


def observe_round(
    query: str,
    agents: list[AgentSpec],
    subtasks,
    prior_rounds: list[GenerationRound],
    provider: ChatProvider,
    usage: TokenUsage,
    round_index: int,
) -> Feedback:
    """Two observer completions: one over the roles, one over the plan."""
    prior = prior_rounds[-1] if prior_rounds else None
    history = render_suggestion_history(prior_rounds)
    selected = [a for a in agents if a.origin == ORIGIN_SELECTED]
    created = [a for a in agents if a.origin == ORIGIN_CREATED]

    roles_prompt = render(
        OBSERVER_ROLES_TEMPLATE,
        question=query,
        existing_roles=render_roles_json(prior.agents) if prior else NONE_PLACEHOLDER,
        selected_roles=render_roles_json(selected),
        created_roles=render_roles_json(created),
        history=history,
        format_example=OBSERVER_FORMAT_EXAMPLE,
    )
    roles_response = provider.complete(
        [("user", roles_prompt)], tag=CallTag("observer_roles", round_index, 0)
    )
    usage.add("observer", roles_response.prompt_tokens, roles_response.completion_tokens)

    plan_prompt = render(
        OBSERVER_PLAN_TEMPLATE,
        context=query,
        roles=render_roles_json(agents),
        plan=render_plan_lines(subtasks) or NONE_PLACEHOLDER,
        history=history,
        format_example=OBSERVER_FORMAT_EXAMPLE,
    )
    plan_response = provider.complete(
        [("user", plan_prompt)], tag=CallTag("observer_plan", round_index, 0)
    )
    usage.add("observer", plan_response.prompt_tokens, plan_response.completion_tokens)

    return Feedback(
        role_feedback=extract_suggestions(roles_response.text),
        plan_feedback=extract_suggestions(plan_response.text),
    )


def dedup_by_name(agents: list[AgentSpec]) -> list[AgentSpec]:
    """Drop later duplicates of the same (trimmed, case-sensitive) name."""
    seen: set[str] = set()
    pool: list[AgentSpec] = []
    for agent in agents:
        key = agent.name.strip()
        if key not in seen:
            seen.add(key)
            pool.append(agent)
    return pool


def run_generation(
    query: str,
    rounds: int,
    provider: ChatProvider,
    *,
    format_retries: int = DEFAULT_FORMAT_RETRIES,
    on_round: Callable[[GenerationRound], None] | None = None,
) -> tuple[list[AgentSpec], list[GenerationRound]]:
    """Run the full loop; the candidate pool is the final round's agents.

    The observer is skipped on the last round (and entirely when rounds=1).
    Stage failures are re-raised as StageError carrying the round index;
    rounds completed before the failure are still reported via ``on_round``.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    completed: list[GenerationRound] = []
    for t in range(1, rounds + 1):
        usage = TokenUsage()

        def _run(stage: str, fn):
            try:
                return fn()
            except TeamforgeError as exc:
                raise StageError(stage, exc, round_index=t) from exc

        raw = _run("planner", lambda: plan_round(query, completed, provider, usage, t))
        parsed = _run(
            "formatter",
            lambda: format_round(raw, provider, usage, t, retries=format_retries),
        )
        feedback = None
        if t < rounds:
            feedback = _run(
                "observer",
                lambda: observe_round(
                    query, parsed.agents, parsed.subtasks, completed, provider, usage, t
                ),
            )
        round_record = GenerationRound(
            round_index=t,
            raw_planner_output=raw,
            agents=parsed.agents,
            subtasks=parsed.subtasks,
            feedback=feedback,
            token_usage=usage,
        )
        completed.append(round_record)
        if on_round is not None:
            on_round(round_record)
    pool = dedup_by_name(completed[-1].agents)
    return pool, completed
