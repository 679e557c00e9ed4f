"""Domain records for generated agent roles and the rounds that produced them."""

from __future__ import annotations

from dataclasses import dataclass, field

from .tokens import TokenUsage

ORIGIN_SELECTED = "selected_existing"
ORIGIN_CREATED = "created"

PROMPT_PREFIX = "You are "

NO_SUGGESTIONS = "No Suggestions"


@dataclass(frozen=True)
class AgentSpec:
    """A standardized expert role: the unit the whole engine trades in."""

    name: str
    description: str
    suggestions: str
    prompt: str
    origin: str = ORIGIN_CREATED
    extras: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.name.strip():
            raise ValueError("agent name must be nonempty")
        if not self.description.strip():
            raise ValueError("agent description must be nonempty")
        if not self.prompt.strip():
            raise ValueError("agent prompt must be nonempty")
        if not self.prompt.startswith(PROMPT_PREFIX):
            raise ValueError(f"agent prompt must start with {PROMPT_PREFIX!r}")
        if self.origin not in (ORIGIN_SELECTED, ORIGIN_CREATED):
            raise ValueError(f"unknown origin {self.origin!r}")

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "description": self.description,
            "suggestions": self.suggestions,
            "prompt": self.prompt,
            "origin": self.origin,
        }
        if self.extras:
            d["extras"] = dict(self.extras)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AgentSpec":
        return cls(
            name=d["name"],
            description=d["description"],
            suggestions=d.get("suggestions", ""),
            prompt=d["prompt"],
            origin=d.get("origin", ORIGIN_CREATED),
            extras=tuple(sorted(d.get("extras", {}).items())),
        )


@dataclass(frozen=True)
class SubTask:
    index: int
    description: str
    assigned_roles: tuple[str, ...]

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("sub-task index must be positive")
        if not self.assigned_roles:
            raise ValueError("sub-task must have at least one assigned role")

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "description": self.description,
            "assigned_roles": list(self.assigned_roles),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SubTask":
        return cls(
            index=int(d["index"]),
            description=d["description"],
            assigned_roles=tuple(d["assigned_roles"]),
        )


def _is_no_suggestions(text: str) -> bool:
    return text.strip().casefold() == NO_SUGGESTIONS.casefold()


@dataclass(frozen=True)
class Feedback:
    """Observer critique for one round; the sentinel text means nothing to fix."""

    role_feedback: str
    plan_feedback: str

    @property
    def has_suggestions(self) -> bool:
        return not (
            _is_no_suggestions(self.role_feedback)
            and _is_no_suggestions(self.plan_feedback)
        )

    def to_dict(self) -> dict:
        return {
            "role_feedback": self.role_feedback,
            "plan_feedback": self.plan_feedback,
            "has_suggestions": self.has_suggestions,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Feedback":
        return cls(role_feedback=d["role_feedback"], plan_feedback=d["plan_feedback"])


@dataclass
class GenerationRound:
    """State of one plan/format/observe iteration."""

    round_index: int
    raw_planner_output: str
    agents: list[AgentSpec]
    subtasks: list[SubTask]
    feedback: Feedback | None
    token_usage: TokenUsage = field(default_factory=TokenUsage)

    def to_dict(self) -> dict:
        return {
            "round_index": self.round_index,
            "raw_planner_output": self.raw_planner_output,
            "agents": [a.to_dict() for a in self.agents],
            "subtasks": [s.to_dict() for s in self.subtasks],
            "feedback": self.feedback.to_dict() if self.feedback else None,
            "token_usage": self.token_usage.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationRound":
        return cls(
            round_index=int(d["round_index"]),
            raw_planner_output=d["raw_planner_output"],
            agents=[AgentSpec.from_dict(a) for a in d["agents"]],
            subtasks=[SubTask.from_dict(s) for s in d["subtasks"]],
            feedback=Feedback.from_dict(d["feedback"]) if d.get("feedback") else None,
            token_usage=TokenUsage.from_dict(d.get("token_usage", {})),
        )
