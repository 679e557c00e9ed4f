"""Parsing and serialization of the standardized sectioned plan document.

The document format is the one the formatter role is instructed to emit:
five '##' sections (Selected Roles List, Created Roles List, Execution
Plan, RoleFeedback, PlanFeedback), with role records as JSON objects and
plan steps as numbered "[ROLE, ...]: step" lines. The parser is total: it
returns a complete ParsedPlan or raises a typed FormatParseError; it never
returns a silently partial result.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .agents import ORIGIN_CREATED, ORIGIN_SELECTED, AgentSpec, SubTask
from .errors import (
    MalformedRoleRecordError,
    MissingSectionError,
    SuggestionsSectionMissingError,
)

SECTION_SELECTED = "Selected Roles List"
SECTION_CREATED = "Created Roles List"
SECTION_PLAN = "Execution Plan"
SECTION_ROLE_FEEDBACK = "RoleFeedback"
SECTION_PLAN_FEEDBACK = "PlanFeedback"
REQUIRED_SECTIONS = (
    SECTION_SELECTED,
    SECTION_CREATED,
    SECTION_PLAN,
    SECTION_ROLE_FEEDBACK,
    SECTION_PLAN_FEEDBACK,
)

REQUIRED_ROLE_KEYS = ("name", "description", "suggestions", "prompt")

_STEP_RE = re.compile(r"^\s*\d+\.\s*\[(?P<roles>[^\]]*)\]\s*:?\s*(?P<desc>.*)$")
_FENCE_RE = re.compile(r"^\s*```[\w-]*\s*$")
_TRAILING_COMMA_RE = re.compile(r",(\s*[}\]])")


@dataclass
class ParsedPlan:
    """Everything recovered from one formatter document."""

    selected: list[AgentSpec] = field(default_factory=list)
    created: list[AgentSpec] = field(default_factory=list)
    subtasks: list[SubTask] = field(default_factory=list)
    role_feedback: str = ""
    plan_feedback: str = ""

    @property
    def agents(self) -> list[AgentSpec]:
        return self.selected + self.created


def _normalize_header(line: str) -> str:
    return line.lstrip("#").strip().rstrip(":").replace(" ", "").casefold()


_KNOWN_HEADERS = {_normalize_header(name): name for name in REQUIRED_SECTIONS}
_KNOWN_HEADERS[_normalize_header("Question or Task")] = "Question or Task"
_KNOWN_HEADERS[_normalize_header("Thought")] = "Thought"
_KNOWN_HEADERS[_normalize_header("Suggestions")] = "Suggestions"


def split_sections(text: str) -> dict[str, str]:
    """Map section names to their body text; unknown headers keep their own name."""
    sections: dict[str, str] = {}
    current: str | None = None
    lines: list[str] = []
    for line in text.splitlines():
        if line.lstrip().startswith("##"):
            if current is not None:
                sections[current] = "\n".join(lines).strip()
            header = _normalize_header(line.lstrip())
            current = _KNOWN_HEADERS.get(header, line.lstrip().lstrip("#").strip())
            lines = []
        else:
            lines.append(line)
    if current is not None:
        sections[current] = "\n".join(lines).strip()
    return sections


def _strip_fences(block: str) -> str:
    kept = [line for line in block.splitlines() if not _FENCE_RE.match(line)]
    return "\n".join(kept).strip()


def _json_object_spans(text: str) -> list[str]:
    """Top-level {...} spans, honoring strings and escapes."""
    spans: list[str] = []
    depth = 0
    start = -1
    in_string = False
    escaped = False
    for i, ch in enumerate(text):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}":
            if depth > 0:
                depth -= 1
                if depth == 0:
                    spans.append(text[start : i + 1])
    return spans


def parse_role_records(block: str, origin: str) -> list[AgentSpec]:
    agents: list[AgentSpec] = []
    for span in _json_object_spans(_strip_fences(block)):
        try:
            record = json.loads(span)
        except json.JSONDecodeError:
            try:
                record = json.loads(_TRAILING_COMMA_RE.sub(r"\1", span))
            except json.JSONDecodeError as exc:
                raise MalformedRoleRecordError(f"unparseable role record: {exc}") from exc
        if not isinstance(record, dict):
            raise MalformedRoleRecordError("role record is not an object")
        missing = [k for k in REQUIRED_ROLE_KEYS if k not in record]
        if missing:
            raise MalformedRoleRecordError(f"role record missing key(s): {missing}")
        extras = tuple(
            sorted(
                (k, json.dumps(record[k], sort_keys=True))
                for k in record
                if k not in REQUIRED_ROLE_KEYS
            )
        )
        try:
            agents.append(
                AgentSpec(
                    name=str(record["name"]).strip(),
                    description=str(record["description"]),
                    suggestions=str(record["suggestions"]),
                    prompt=str(record["prompt"]),
                    origin=origin,
                    extras=extras,
                )
            )
        except ValueError as exc:
            raise MalformedRoleRecordError(str(exc)) from exc
    return agents


def parse_execution_plan(block: str) -> list[SubTask]:
    subtasks: list[SubTask] = []
    pending_desc: list[str] | None = None
    parsed: list[tuple[tuple[str, ...], list[str]]] = []
    for line in _strip_fences(block).splitlines():
        match = _STEP_RE.match(line)
        roles: tuple[str, ...] = ()
        if match:
            roles = tuple(r.strip() for r in match.group("roles").split(",") if r.strip())
        if roles:
            pending_desc = [match.group("desc").strip()]
            parsed.append((roles, pending_desc))
        elif line.strip() and pending_desc is not None:
            pending_desc.append(line.strip())
    for position, (roles, desc_lines) in enumerate(parsed, start=1):
        subtasks.append(
            SubTask(
                index=position,
                description=" ".join(d for d in desc_lines if d),
                assigned_roles=roles,
            )
        )
    return subtasks


def parse_plan_document(text: str) -> ParsedPlan:
    sections = split_sections(text)
    missing = [name for name in REQUIRED_SECTIONS if name not in sections]
    if missing:
        raise MissingSectionError(f"document lacks section(s): {missing}")
    return ParsedPlan(
        selected=parse_role_records(sections[SECTION_SELECTED], ORIGIN_SELECTED),
        created=parse_role_records(sections[SECTION_CREATED], ORIGIN_CREATED),
        subtasks=parse_execution_plan(sections[SECTION_PLAN]),
        role_feedback=sections[SECTION_ROLE_FEEDBACK],
        plan_feedback=sections[SECTION_PLAN_FEEDBACK],
    )


def role_record_json(agent: AgentSpec) -> str:
    record = {
        "name": agent.name,
        "description": agent.description,
        "suggestions": agent.suggestions,
        "prompt": agent.prompt,
    }
    for key, encoded in agent.extras:
        record[key] = json.loads(encoded)
    return json.dumps(record, indent=4, ensure_ascii=False)


def render_roles_block(agents: list[AgentSpec]) -> str:
    if not agents:
        return "```\n```"
    return "```\n" + ",\n".join(role_record_json(a) for a in agents) + "\n```"


def render_plan_lines(subtasks: list[SubTask]) -> str:
    return "\n".join(
        f"{s.index}. [{', '.join(s.assigned_roles)}]: {s.description}" for s in subtasks
    )


def serialize_plan(parsed: ParsedPlan, question: str | None = None) -> str:
    """Emit the sectioned document; parse_plan_document inverts this exactly."""
    parts = ["---"]
    if question is not None:
        parts.append(f"## Question or Task:\n{question}\n")
    parts.append(f"## {SECTION_SELECTED}:\n{render_roles_block(parsed.selected)}\n")
    parts.append(f"## {SECTION_CREATED}:\n{render_roles_block(parsed.created)}\n")
    parts.append(f"## {SECTION_PLAN}:\n{render_plan_lines(parsed.subtasks)}\n")
    parts.append(f"## {SECTION_ROLE_FEEDBACK}\n{parsed.role_feedback}\n")
    parts.append(f"## {SECTION_PLAN_FEEDBACK}\n{parsed.plan_feedback}\n")
    parts.append("---")
    return "\n".join(parts)


def extract_suggestions(text: str) -> str:
    """Pull the Suggestions section out of an observer response."""
    sections = split_sections(text)
    if "Suggestions" not in sections:
        raise SuggestionsSectionMissingError("observer response has no Suggestions section")
    return sections["Suggestions"]
