"""Run records and team artifacts: the engine's audit and export surface.

Runs append to a line-delimited JSON ledger (one line per run). Exported
teams are standalone pretty-printed documents validated against
TEAM_ARTIFACT_SCHEMA, which downstream inference frameworks consume.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .agents import AgentSpec, GenerationRound
from .errors import RecordIOError
from .selection import ParetoFront, Team
from .tokens import TokenUsage

RUN_RECORD_SCHEMA_VERSION = 1
TEAM_ARTIFACT_SCHEMA_VERSION = 1

STATUS_COMPLETE = "complete"
STATUS_FAILED = "failed"

_write_lock = threading.Lock()


@dataclass
class RunRecord:
    run_id: str
    generation_queries: list[str]
    selection_queries: list[str]
    config: dict
    provider_descriptors: dict = field(default_factory=dict)
    rounds: list[GenerationRound] = field(default_factory=list)
    candidate_pool: list[AgentSpec] = field(default_factory=list)
    scored_team_count: int = 0
    front: ParetoFront | None = None
    chosen_team: Team | None = None
    token_usage: TokenUsage = field(default_factory=TokenUsage)
    selector_usage: TokenUsage = field(default_factory=TokenUsage)
    status: str = STATUS_COMPLETE
    error: str | None = None
    started_at: str = ""
    finished_at: str = ""
    schema_version: int = RUN_RECORD_SCHEMA_VERSION

    def chosen_agents(self) -> list[AgentSpec]:
        if self.chosen_team is None:
            return []
        return [self.candidate_pool[i] for i in self.chosen_team.member_indices]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "run_id": self.run_id,
            "status": self.status,
            "error": self.error,
            "generation_queries": self.generation_queries,
            "selection_queries": self.selection_queries,
            "config": self.config,
            "provider_descriptors": self.provider_descriptors,
            "rounds": [r.to_dict() for r in self.rounds],
            "candidate_pool": [a.to_dict() for a in self.candidate_pool],
            "scored_team_count": self.scored_team_count,
            "front": self.front.to_dict() if self.front else None,
            "chosen_team": self.chosen_team.to_dict() if self.chosen_team else None,
            "chosen_agent_names": [a.name for a in self.chosen_agents()],
            "token_usage": self.token_usage.to_dict(),
            "selector_usage": self.selector_usage.to_dict(),
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(
            run_id=d["run_id"],
            generation_queries=list(d["generation_queries"]),
            selection_queries=list(d["selection_queries"]),
            config=d["config"],
            provider_descriptors=d.get("provider_descriptors", {}),
            rounds=[GenerationRound.from_dict(r) for r in d.get("rounds", [])],
            candidate_pool=[AgentSpec.from_dict(a) for a in d.get("candidate_pool", [])],
            scored_team_count=int(d.get("scored_team_count", 0)),
            front=ParetoFront.from_dict(d["front"]) if d.get("front") else None,
            chosen_team=Team.from_dict(d["chosen_team"]) if d.get("chosen_team") else None,
            token_usage=TokenUsage.from_dict(d.get("token_usage", {})),
            selector_usage=TokenUsage.from_dict(d.get("selector_usage", {})),
            status=d.get("status", STATUS_COMPLETE),
            error=d.get("error"),
            started_at=d.get("started_at", ""),
            finished_at=d.get("finished_at", ""),
            schema_version=int(d.get("schema_version", RUN_RECORD_SCHEMA_VERSION)),
        )


def append_record(path: str | Path, record: RunRecord) -> None:
    line = json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True)
    try:
        with _write_lock:
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
    except OSError as exc:
        raise RecordIOError(f"cannot append run record to {path}: {exc}") from exc


def load_records(path: str | Path) -> list[RunRecord]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RecordIOError(f"cannot read run records from {path}: {exc}") from exc
    records = []
    for line in text.splitlines():
        if line.strip():
            records.append(RunRecord.from_dict(json.loads(line)))
    return records


def find_record(path: str | Path, run_id: str | None = None) -> RunRecord:
    records = load_records(path)
    if not records:
        raise RecordIOError(f"no run records in {path}")
    if run_id is None:
        return records[-1]
    for record in reversed(records):
        if record.run_id == run_id:
            return record
    raise RecordIOError(f"run {run_id!r} not found in {path}")


def front_export(front: ParetoFront, pool: list[AgentSpec]) -> dict:
    """Audit-friendly view of a front: member names plus both objectives."""
    return {
        "method": front.method,
        "objective_pair": front.objective_pair,
        "teams": [
            {
                "member_indices": list(t.member_indices),
                "members": [pool[i].name for i in t.member_indices],
                "relevance": t.scores.relevance,
                "diversity": t.scores.diversity,
            }
            for t in front.teams
        ],
    }


_AGENT_SCHEMA = {
    "type": "object",
    "required": ["name", "description", "suggestions", "prompt"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string", "minLength": 1},
        "suggestions": {"type": "string"},
        "prompt": {"type": "string", "minLength": 1},
    },
}

TEAM_ARTIFACT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "queries", "agents", "scores", "provenance"],
    "properties": {
        "schema_version": {"const": TEAM_ARTIFACT_SCHEMA_VERSION},
        "queries": {
            "type": "array",
            "items": {"type": "string"},
            "minItems": 1,
        },
        "agents": {"type": "array", "items": _AGENT_SCHEMA, "minItems": 1},
        "scores": {
            "type": "object",
            "required": ["relevance", "diversity", "team_size"],
            "properties": {
                "relevance": {"type": "number"},
                "diversity": {"type": "number"},
                "team_size": {"type": "integer", "minimum": 1},
            },
        },
        "provenance": {
            "type": "object",
            "required": ["run_id", "strategy", "method"],
            "properties": {
                "run_id": {"type": "string"},
                "strategy": {"type": "string"},
                "method": {"type": ["string", "null"]},
                "objective_pair": {"type": ["string", "null"]},
            },
        },
    },
}


def validate_team_artifact(document: dict) -> None:
    jsonschema.validate(instance=document, schema=TEAM_ARTIFACT_SCHEMA)


def build_team_artifact(record: RunRecord) -> dict:
    if record.chosen_team is None:
        raise RecordIOError(f"run {record.run_id} has no chosen team to export")
    scores = record.chosen_team.scores
    document = {
        "schema_version": TEAM_ARTIFACT_SCHEMA_VERSION,
        "queries": record.selection_queries,
        "agents": [
            {
                "name": a.name,
                "description": a.description,
                "suggestions": a.suggestions,
                "prompt": a.prompt,
            }
            for a in record.chosen_agents()
        ],
        "scores": (
            scores.to_dict()
            if scores is not None
            else {
                "relevance": 0.0,
                "diversity": 0.0,
                "team_size": len(record.chosen_team.member_indices),
            }
        ),
        "provenance": {
            "run_id": record.run_id,
            "strategy": record.config.get("strategy", ""),
            "method": record.front.method if record.front else None,
            "objective_pair": record.front.objective_pair if record.front else None,
        },
    }
    validate_team_artifact(document)
    return document


def export_team(record: RunRecord, destination: str | Path) -> dict:
    """Write the chosen team as a versioned artifact; returns the document."""
    document = build_team_artifact(record)
    try:
        Path(destination).write_text(
            json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise RecordIOError(f"cannot write team artifact to {destination}: {exc}") from exc
    return document


def import_team(path: str | Path) -> dict:
    """Read a team artifact back; validates against the published schema."""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise RecordIOError(f"cannot read team artifact from {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RecordIOError(f"team artifact {path} is not valid JSON: {exc}") from exc
    validate_team_artifact(document)
    return document
