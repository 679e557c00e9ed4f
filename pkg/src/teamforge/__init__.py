"""Multi-agent team initialization engine.

Generates a standardized pool of candidate agent roles for a query through
an iterative planner/formatter/observer loop, then picks the final team from
the Pareto front over task relevance and embedding diversity.
"""

from .agents import AgentSpec, Feedback, GenerationRound, SubTask
from .chat import (
    CallTag,
    ChatProvider,
    ChatProviderDescriptor,
    ChatResponse,
    HttpChatProvider,
    ScriptedChatProvider,
)
from .config import RunConfig, load_config, subseed
from .embedding import (
    EmbeddingProvider,
    EmbeddingProviderDescriptor,
    HashEmbeddingProvider,
    RemoteEmbeddingProvider,
    cosine,
)
from .engine import (
    evaluate_front_quality,
    init_for_query,
    init_transferable,
    token_report,
)
from .generation import run_generation
from .nsga2 import nsga2_front
from .objectives import (
    ObjectiveScores,
    TeamScorer,
    agent_text,
    avg_similarity_diversity,
    max_pairwise_similarity,
    relevance,
    similarity_matrix,
    vendi_diversity,
)
from .records import (
    RunRecord,
    TEAM_ARTIFACT_SCHEMA,
    export_team,
    front_export,
    import_team,
    load_records,
)
from .selection import (
    Nsga2Params,
    ParetoFront,
    Team,
    apply_strategy,
    coverage,
    dominates,
    enumerate_teams,
    generational_distance,
    pareto_front_exact,
)
from .selector import parse_choice, select_team
from .tokens import TokenUsage

__version__ = "0.1.0"

__all__ = [
    "AgentSpec",
    "CallTag",
    "ChatProvider",
    "ChatProviderDescriptor",
    "ChatResponse",
    "EmbeddingProvider",
    "EmbeddingProviderDescriptor",
    "Feedback",
    "GenerationRound",
    "HashEmbeddingProvider",
    "HttpChatProvider",
    "Nsga2Params",
    "ObjectiveScores",
    "ParetoFront",
    "RemoteEmbeddingProvider",
    "RunConfig",
    "RunRecord",
    "ScriptedChatProvider",
    "SubTask",
    "TEAM_ARTIFACT_SCHEMA",
    "Team",
    "TeamScorer",
    "TokenUsage",
    "agent_text",
    "apply_strategy",
    "avg_similarity_diversity",
    "cosine",
    "coverage",
    "dominates",
    "enumerate_teams",
    "evaluate_front_quality",
    "export_team",
    "front_export",
    "generational_distance",
    "import_team",
    "init_for_query",
    "init_transferable",
    "load_config",
    "load_records",
    "max_pairwise_similarity",
    "nsga2_front",
    "parse_choice",
    "pareto_front_exact",
    "relevance",
    "run_generation",
    "select_team",
    "similarity_matrix",
    "subseed",
    "token_report",
    "vendi_diversity",
]
