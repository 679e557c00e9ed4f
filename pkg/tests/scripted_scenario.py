"""Canned chat scripts for pipeline tests.

One coherent three-round scenario over a small arithmetic query: the pool
grows from two roles to four, the round-1 role observer asks for an
explainer, and the selector picks group 2. Variants cover a single-round
run and a formatter that needs one retry.
"""

from __future__ import annotations

import json

QUERY = "What is the sum of the first 100 positive integers?"

SOLVER = {
    "name": "Arithmetic Solver",
    "description": "expert in arithmetic series and closed-form summation of integer sequences",
    "suggestions": "Apply the pairing formula n*(n+1)/2 and state the final number explicitly.",
    "prompt": "You are an expert in arithmetic series, named Arithmetic Solver. Your goal is to compute the requested sum, and your constraints are to show the formula you used. You could follow these execution suggestions: apply the pairing formula and state the final number explicitly.",
}
VERIFIER = {
    "name": "Result Verifier",
    "description": "expert in independent recomputation and numerical cross-checking of results",
    "suggestions": "Recompute the sum by a different method and confirm or reject the solver's value.",
    "prompt": "You are an expert in numerical cross-checking, named Result Verifier. Your goal is to confirm the solver's result independently, and your constraints are to avoid reusing the solver's method. You could follow these execution suggestions: recompute by a different method and compare.",
}
EXPLAINER = {
    "name": "Method Explainer",
    "description": "expert in explaining mathematical derivations step by step in plain language",
    "suggestions": "Walk through the derivation so a newcomer can follow each step.",
    "prompt": "You are an expert in mathematical exposition, named Method Explainer. Your goal is to explain the derivation clearly, and your constraints are to keep each step elementary. You could follow these execution suggestions: walk through the derivation so a newcomer can follow it.",
}
AUDITOR = {
    "name": "Edge Case Auditor",
    "description": "expert in probing boundary conditions and degenerate inputs of quantitative problems",
    "suggestions": "Check the n=0 and n=1 boundary cases and confirm the formula still holds.",
    "prompt": "You are an expert in boundary analysis, named Edge Case Auditor. Your goal is to stress the answer on degenerate inputs, and your constraints are to report any boundary where the method breaks. You could follow these execution suggestions: check the smallest cases and confirm the formula holds.",
}

FINAL_AGENTS = [SOLVER, VERIFIER, EXPLAINER, AUDITOR]


def role_blob(record: dict) -> str:
    return json.dumps(record, indent=4, ensure_ascii=False)


def roles_fence(records: list[dict]) -> str:
    if not records:
        return "```\n```"
    return "```\n" + ",\n".join(role_blob(r) for r in records) + "\n```"


def plan_document(
    selected: list[dict],
    created: list[dict],
    plan_lines: list[str],
    role_feedback: str = "None",
    plan_feedback: str = "None",
    query: str = QUERY,
) -> str:
    plan = "\n".join(plan_lines)
    return (
        "---\n"
        f"## Question or Task:\n{query}\n\n"
        f"## Selected Roles List:\n{roles_fence(selected)}\n\n"
        f"## Created Roles List:\n{roles_fence(created)}\n\n"
        f"## Execution Plan:\n{plan}\n\n"
        f"## RoleFeedback\n{role_feedback}\n\n"
        f"## PlanFeedback\n{plan_feedback}\n"
        "---\n"
    )


def observer_document(suggestions: str, thought: str = "Reviewing the round.") -> str:
    return f"---\n## Thought\n{thought}\n\n## Suggestions\n{suggestions}\n---\n"


NO_SUGGESTIONS_DOC = observer_document("No Suggestions", thought="Everything checks out.")

ROLE_SUGGESTIONS_R1 = (
    "1. Add an expert who explains the derivation in plain language.\n"
    "2. Keep the verifier's method independent from the solver's."
)

PLAN_R1 = [
    "1. [Arithmetic Solver]: Compute the sum with the closed-form formula; output the numeric result for the verifier.",
    "2. [Result Verifier]: Recompute the sum independently and confirm; output the verified final answer.",
]
PLAN_R2 = PLAN_R1 + [
    "3. [Method Explainer]: Explain how the formula was derived; output a short walkthrough.",
]
PLAN_R3 = PLAN_R2 + [
    "4. [Edge Case Auditor]: Check boundary cases of the formula; output any caveats.",
]

PLANNER_TEXT_R1 = (
    "Breaking the task down: we need one role to compute the sum and one role to "
    "verify it. I propose an Arithmetic Solver to apply the closed-form formula "
    "and a Result Verifier to recompute independently. Plan: solver first, then "
    "verifier confirms."
)
PLANNER_TEXT_R2 = (
    "Following the suggestion to make the method understandable, I keep the "
    "Arithmetic Solver and Result Verifier and add a Method Explainer who walks "
    "through the derivation. Plan now has three steps."
)
PLANNER_TEXT_R3 = (
    "The team looks solid; to harden it I also add an Edge Case Auditor who "
    "checks the degenerate inputs. Keeping all previous roles."
)


def default_script() -> dict:
    """Three-round scenario ending with a four-agent pool."""
    return {
        "responses": {
            "planner:1:0": {"text": PLANNER_TEXT_R1, "prompt_tokens": 100, "completion_tokens": 40},
            "formatter:1:0": {
                "text": plan_document([], [SOLVER, VERIFIER], PLAN_R1),
                "prompt_tokens": 150,
                "completion_tokens": 120,
            },
            "observer_roles:1:0": {
                "text": observer_document(ROLE_SUGGESTIONS_R1, thought="The roles compute and check, but nobody explains."),
                "prompt_tokens": 130,
                "completion_tokens": 35,
            },
            "observer_plan:1:0": {"text": NO_SUGGESTIONS_DOC, "prompt_tokens": 125, "completion_tokens": 12},
            "planner:2:0": {"text": PLANNER_TEXT_R2, "prompt_tokens": 210, "completion_tokens": 45},
            "formatter:2:0": {
                "text": plan_document(
                    [SOLVER, VERIFIER],
                    [EXPLAINER],
                    PLAN_R2,
                    role_feedback="Added the requested explainer role.",
                    plan_feedback="None",
                ),
                "prompt_tokens": 230,
                "completion_tokens": 160,
            },
            "observer_roles:2:0": {"text": NO_SUGGESTIONS_DOC, "prompt_tokens": 200, "completion_tokens": 12},
            "observer_plan:2:0": {"text": NO_SUGGESTIONS_DOC, "prompt_tokens": 190, "completion_tokens": 12},
            "planner:3:0": {"text": PLANNER_TEXT_R3, "prompt_tokens": 260, "completion_tokens": 42},
            "formatter:3:0": {
                "text": plan_document(
                    [SOLVER, VERIFIER, EXPLAINER],
                    [AUDITOR],
                    PLAN_R3,
                ),
                "prompt_tokens": 280,
                "completion_tokens": 200,
            },
            "selector:0": {
                "text": "Group 2 balances computation with verification.\nChoice: Group 2",
                "prompt_tokens": 170,
                "completion_tokens": 20,
            },
        }
    }


def single_round_script() -> dict:
    """rounds=1 scenario: no observer calls, pool comes straight from round 1."""
    return {
        "responses": {
            "planner:1:0": {"text": PLANNER_TEXT_R1, "prompt_tokens": 100, "completion_tokens": 40},
            "formatter:1:0": {
                "text": plan_document([], FINAL_AGENTS, PLAN_R3),
                "prompt_tokens": 150,
                "completion_tokens": 220,
            },
            "selector:0": {
                "text": "Choice: Group 1",
                "prompt_tokens": 90,
                "completion_tokens": 5,
            },
        }
    }


def retry_script() -> dict:
    """Formatter's first attempt is missing sections; second attempt parses."""
    base = default_script()
    base["responses"]["formatter:1:0"] = {
        "text": "Sorry, here are the roles in prose: a solver and a verifier.",
        "prompt_tokens": 150,
        "completion_tokens": 15,
    }
    base["responses"]["formatter:1:1"] = {
        "text": plan_document([], [SOLVER, VERIFIER], PLAN_R1),
        "prompt_tokens": 180,
        "completion_tokens": 120,
    }
    return base


def write_script(path, script: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(script, fh, indent=2, ensure_ascii=False)
