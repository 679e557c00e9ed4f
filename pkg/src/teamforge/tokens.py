"""Per-stage token accounting for provider calls."""

from __future__ import annotations

from dataclasses import dataclass, field

STAGES = ("planner", "formatter", "observer", "selector")


@dataclass
class StageUsage:
    calls: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0

    def to_dict(self) -> dict:
        return {
            "calls": self.calls,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StageUsage":
        return cls(
            calls=int(d.get("calls", 0)),
            prompt_tokens=int(d.get("prompt_tokens", 0)),
            completion_tokens=int(d.get("completion_tokens", 0)),
        )


@dataclass
class TokenUsage:
    """Stage-keyed usage; totals are always derived from the entries.

    Retried calls are recorded like any other call, so totals include them.
    """

    stages: dict[str, StageUsage] = field(
        default_factory=lambda: {stage: StageUsage() for stage in STAGES}
    )

    def add(self, stage: str, prompt_tokens: int, completion_tokens: int) -> None:
        entry = self.stages.setdefault(stage, StageUsage())
        entry.calls += 1
        entry.prompt_tokens += prompt_tokens
        entry.completion_tokens += completion_tokens

    def merge(self, other: "TokenUsage") -> None:
        for stage, usage in other.stages.items():
            entry = self.stages.setdefault(stage, StageUsage())
            entry.calls += usage.calls
            entry.prompt_tokens += usage.prompt_tokens
            entry.completion_tokens += usage.completion_tokens

    @property
    def prompt_tokens(self) -> int:
        return sum(u.prompt_tokens for u in self.stages.values())

    @property
    def completion_tokens(self) -> int:
        return sum(u.completion_tokens for u in self.stages.values())

    @property
    def calls(self) -> int:
        return sum(u.calls for u in self.stages.values())

    def to_dict(self) -> dict:
        return {
            "stages": {stage: u.to_dict() for stage, u in sorted(self.stages.items())},
            "total_prompt_tokens": self.prompt_tokens,
            "total_completion_tokens": self.completion_tokens,
            "total_calls": self.calls,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TokenUsage":
        usage = cls(stages={})
        for stage in STAGES:
            usage.stages[stage] = StageUsage()
        for stage, entry in d.get("stages", {}).items():
            usage.stages[stage] = StageUsage.from_dict(entry)
        return usage
