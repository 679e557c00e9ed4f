"""Run configuration: defaults, file loading, and deterministic sub-seeding."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError
from .objectives import EMBED_DESCRIPTION, EMBED_POLICIES, OBJECTIVE_PAIRS, PAIR_REL_VENDI
from .selection import Nsga2Params, STRATEGIES, STRATEGY_PARETO_BEST

DEFAULT_EXACT_ENUMERATION_CAP = 4096
DEFAULT_HASH_DIMENSION = 64


def subseed(master: int, label: str) -> int:
    """Deterministic per-component seed derived from the master seed."""
    digest = hashlib.blake2b(
        label.encode("utf-8"), key=master.to_bytes(8, "little", signed=True), digest_size=8
    )
    return int.from_bytes(digest.digest(), "little") >> 1


@dataclass
class RunConfig:
    rounds: int = 3
    team_size_min: int = 1
    team_size_max: int = 5
    temperature: float = 1.0
    objective_pair: str = PAIR_REL_VENDI
    strategy: str = STRATEGY_PARETO_BEST
    exact_enumeration_cap: int = DEFAULT_EXACT_ENUMERATION_CAP
    embed_policy: str = EMBED_DESCRIPTION
    seed: int = 0
    format_retries: int = 2
    selector_retries: int = 2
    selector_show_scores: bool = False
    nsga2: Nsga2Params = field(default_factory=Nsga2Params)
    chat_provider: dict = field(
        default_factory=lambda: {"kind": "scripted", "script_path": None}
    )
    embedding_provider: dict = field(
        default_factory=lambda: {"kind": "hash", "dimension": DEFAULT_HASH_DIMENSION}
    )
    records_path: str | None = None

    def __post_init__(self):
        if self.rounds < 1:
            raise ConfigError("rounds must be at least 1")
        if self.team_size_min < 1 or self.team_size_min > self.team_size_max:
            raise ConfigError(
                f"invalid team-size bounds [{self.team_size_min}, {self.team_size_max}]"
            )
        if self.temperature < 0:
            raise ConfigError("temperature must be nonnegative")
        if self.objective_pair not in OBJECTIVE_PAIRS:
            raise ConfigError(f"objective_pair must be one of {OBJECTIVE_PAIRS}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}")
        if self.embed_policy not in EMBED_POLICIES:
            raise ConfigError(f"embed_policy must be one of {EMBED_POLICIES}")
        if self.exact_enumeration_cap < 1:
            raise ConfigError("exact_enumeration_cap must be positive")

    def embedding_seed(self) -> int:
        explicit = self.embedding_provider.get("seed")
        return int(explicit) if explicit is not None else subseed(self.seed, "embedding")

    def nsga2_seed(self) -> int:
        return subseed(self.seed, "nsga2")

    def strategy_seed(self) -> int:
        return subseed(self.seed, "strategy")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["nsga2"] = self.nsga2.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        kwargs = dict(d)
        kwargs.pop("provider_profiles", None)  # CLI-level overlay section
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(kwargs) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        if "nsga2" in kwargs and kwargs["nsga2"] is not None:
            if isinstance(kwargs["nsga2"], dict) and "seed" in kwargs["nsga2"]:
                raise ConfigError(
                    "nsga2.seed is derived from the top-level seed; set 'seed' instead"
                )
            try:
                kwargs["nsga2"] = Nsga2Params.from_dict(kwargs["nsga2"])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"invalid nsga2 parameters: {exc}") from exc
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> RunConfig:
    """Load a JSON config file; relative provider paths resolve against it."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    config = RunConfig.from_dict(raw)
    script = config.chat_provider.get("script_path")
    if script:
        config.chat_provider["script_path"] = str((path.parent / script).resolve())
    if config.records_path:
        config.records_path = str((path.parent / config.records_path).resolve())
    return config


def resolve_api_key(provider_config: dict) -> str | None:
    """Auth token: the named environment variable wins over the config value."""
    env_name = provider_config.get("api_key_env")
    if env_name and os.environ.get(env_name):
        return os.environ[env_name]
    return provider_config.get("api_key")
