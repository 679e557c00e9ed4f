"""Exception taxonomy shared across the engine.

Every error raised by the library derives from TeamforgeError so callers
(and the CLI exit-code mapping) can branch on category rather than message.
"""

from __future__ import annotations


class TeamforgeError(Exception):
    """Base class for all engine errors."""


class ConfigError(TeamforgeError):
    """Invalid or unloadable run configuration."""


# --- embedding ---------------------------------------------------------


class EmbeddingError(TeamforgeError):
    """Base class for embedding-provider failures."""


class ProviderUnreachableError(EmbeddingError):
    """Remote embedding service could not be reached or answered abnormally."""


class DimensionMismatchError(EmbeddingError):
    """Provider returned a vector of the wrong length."""


# --- objectives --------------------------------------------------------


class EmptyTeamError(TeamforgeError):
    """An objective was requested for a team with no members."""


class EigensolverError(TeamforgeError):
    """Eigendecomposition failed or produced an implausible spectrum."""


# --- selection ---------------------------------------------------------


class BoundsError(TeamforgeError):
    """Team-size bounds are inconsistent (min > max, or min < 1)."""


class EmptyFrontError(TeamforgeError):
    """A front-level operation received no teams."""


class StrategyUnavailableError(TeamforgeError):
    """The requested selection strategy cannot run with the available inputs."""


# --- chat providers ----------------------------------------------------


class ChatError(TeamforgeError):
    """Base class for chat-provider failures."""


class ChatProviderError(ChatError):
    """Transport or protocol failure talking to a chat provider."""


class EmptyCompletionError(ChatError):
    """Provider returned an empty completion."""


# --- formatter / observer / selector parsing ---------------------------


class FormatParseError(TeamforgeError):
    """Base class for structured-output parse failures."""


class MissingSectionError(FormatParseError):
    """A required section header was absent from the document."""


class MalformedRoleRecordError(FormatParseError):
    """A role record was found but violates the required schema."""


class SuggestionsSectionMissingError(FormatParseError):
    """An observer response lacked its Suggestions section."""


class ChoiceParseError(TeamforgeError):
    """Selector response contained no usable group choice."""


class ChoiceOutOfRangeError(ChoiceParseError):
    """Selector picked a group number outside the presented range."""


# --- pipeline ----------------------------------------------------------


class RecordIOError(TeamforgeError):
    """Run-record or team-artifact file could not be read or written."""


class StageError(TeamforgeError):
    """Wraps a failure with the pipeline stage (and round, if any) it occurred in."""

    def __init__(self, stage: str, cause: Exception, round_index: int | None = None):
        self.stage = stage
        self.round_index = round_index
        self.cause = cause
        where = stage if round_index is None else f"{stage} (round {round_index})"
        super().__init__(f"{where}: {cause}")
