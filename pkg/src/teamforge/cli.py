"""Command-line surface for the team initialization engine."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import engine
from .config import RunConfig, load_config
from .errors import (
    BoundsError,
    ChatError,
    ChoiceParseError,
    ConfigError,
    EmbeddingError,
    EmptyFrontError,
    FormatParseError,
    RecordIOError,
    StageError,
    StrategyUnavailableError,
    TeamforgeError,
)
from .records import find_record, front_export, export_team
from .selection import Nsga2Params

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_PROVIDER = 4
EXIT_PARSE = 5
EXIT_SELECTION = 6
EXIT_IO = 7


def _exit_code_for(exc: TeamforgeError) -> int:
    if isinstance(exc, StageError):
        return _exit_code_for(exc.cause) if isinstance(exc.cause, TeamforgeError) else EXIT_ERROR
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, (ChatError, EmbeddingError)):
        return EXIT_PROVIDER
    if isinstance(exc, (FormatParseError, ChoiceParseError)):
        return EXIT_PARSE
    if isinstance(exc, (BoundsError, EmptyFrontError, StrategyUnavailableError)):
        return EXIT_SELECTION
    if isinstance(exc, RecordIOError):
        return EXIT_IO
    return EXIT_ERROR


def _load_run_config(args) -> RunConfig:
    if args.config:
        config = load_config(args.config)
    else:
        config = RunConfig()
    if getattr(args, "provider", None):
        # provider profiles live outside RunConfig fields; read the raw file
        raw = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        profiles = raw.get("provider_profiles", {})
        if args.provider not in profiles:
            raise ConfigError(
                f"provider profile {args.provider!r} not defined in the config file"
            )
        overlay = profiles[args.provider]
        if "chat" in overlay:
            config.chat_provider = overlay["chat"]
        if "embedding" in overlay:
            config.embedding_provider = overlay["embedding"]
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "strategy", None):
        config = replace(config, strategy=args.strategy)
    if getattr(args, "records", None):
        config.records_path = args.records
    return config


def _print_run_summary(record) -> None:
    print(f"run {record.run_id}: {record.status}")
    print(f"candidate pool: {len(record.candidate_pool)} agents")
    if record.front is not None:
        print(
            f"front: {len(record.front.teams)} teams ({record.front.method}, "
            f"{record.front.objective_pair})"
        )
    if record.chosen_team is not None:
        names = ", ".join(a.name for a in record.chosen_agents())
        scores = record.chosen_team.scores
        print(f"chosen team: [{names}]")
        if scores is not None:
            print(
                f"scores: relevance {scores.relevance:.4f}, "
                f"diversity {scores.diversity:.4f}, size {scores.team_size}"
            )
    usage = record.token_usage
    print(
        f"tokens: {usage.prompt_tokens} prompt, {usage.completion_tokens} completion "
        f"({usage.calls} calls)"
    )


def _cmd_init(args) -> int:
    config = _load_run_config(args)
    record = engine.init_for_query(args.query, config)
    _print_run_summary(record)
    return EXIT_OK


def _cmd_init_batch(args) -> int:
    config = _load_run_config(args)
    record = engine.init_transferable(args.gen_query, args.sel_query, config)
    _print_run_summary(record)
    return EXIT_OK


def _cmd_front(args) -> int:
    config = _load_run_config(args)
    record = engine.init_for_query(args.query, config, select=False)
    document = front_export(record.front, record.candidate_pool)
    text = json.dumps(document, indent=2, ensure_ascii=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"front written to {args.out}")
    else:
        print(text)
    return EXIT_OK


def _cmd_eval_front(args) -> int:
    params = Nsga2Params(
        population_size=args.population,
        generations=args.generations,
        seed=args.seed,
    )
    result = engine.evaluate_front_quality(args.pool, args.seed, params=params)
    print(f"pool {result['pool_size']} seed {result['seed']}: "
          f"{result['team_count']} teams, exact front {result['exact_front_size']}")
    print(f"coverage: {result['coverage']:.4f}")
    print(f"generational_distance: {result['generational_distance']:.4f}")
    return EXIT_OK


def _cmd_report(args) -> int:
    record = find_record(args.records, args.run_id)
    report = engine.token_report(record)
    print(f"run {record.run_id} token usage")
    for stage, usage in sorted(report.stages.items()):
        print(
            f"  {stage}: {usage.calls} calls, {usage.prompt_tokens} prompt, "
            f"{usage.completion_tokens} completion"
        )
    print(
        f"  total: {report.calls} calls, {report.prompt_tokens} prompt, "
        f"{report.completion_tokens} completion"
    )
    return EXIT_OK


def _cmd_export(args) -> int:
    record = find_record(args.records, args.run_id)
    export_team(record, args.out)
    print(f"team artifact written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teamforge",
        description="Initialize multi-agent teams: generate candidate roles, "
        "then select a Pareto-balanced team.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--strategy", help="selection strategy override")
        p.add_argument("--provider", help="provider profile name from the config file")
        p.add_argument("--records", help="run-record ledger path override")

    p_init = sub.add_parser("init", help="initialize a team for one query")
    p_init.add_argument("--query", required=True)
    add_common(p_init)
    p_init.set_defaults(func=_cmd_init)

    p_batch = sub.add_parser(
        "init-batch", help="transferable run: x generation queries, y selection queries"
    )
    p_batch.add_argument("--gen-query", action="append", required=True)
    p_batch.add_argument("--sel-query", action="append", required=True)
    add_common(p_batch)
    p_batch.set_defaults(func=_cmd_init_batch)

    p_front = sub.add_parser("front", help="compute and print the front, no selection")
    p_front.add_argument("--query", required=True)
    p_front.add_argument("--out", help="write the front export here instead of stdout")
    add_common(p_front)
    p_front.set_defaults(func=_cmd_front)

    p_eval = sub.add_parser(
        "eval-front", help="coverage and GD of NSGA-II against the exact front"
    )
    p_eval.add_argument("--pool", type=int, required=True)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--population", type=int, default=100)
    p_eval.add_argument("--generations", type=int, default=50)
    p_eval.set_defaults(func=_cmd_eval_front)

    p_report = sub.add_parser("report", help="token usage of a recorded run")
    p_report.add_argument("--records", required=True)
    p_report.add_argument("--run-id")
    p_report.set_defaults(func=_cmd_report)

    p_export = sub.add_parser("export", help="export a recorded team as an artifact")
    p_export.add_argument("--records", required=True)
    p_export.add_argument("--out", required=True)
    p_export.add_argument("--run-id")
    p_export.set_defaults(func=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except TeamforgeError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
