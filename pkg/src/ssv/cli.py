"""Command-line interface: run / eval / verify / oracle subcommands.

Every subcommand works offline with ``--provider replay`` and the bundled
fixtures. Exit codes: 0 success, 1 runtime failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import json
import logging
import shlex
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import oracle as oracle_mod
from .dsl.parser import parse_expr, parse_program
from .dsl.ast import scope_of_init
from .errors import ConfigError, SsvError
from .harness import (
    ablation_grid,
    build_backend,
    build_gateway,
    compute_metrics,
    evaluate,
    write_report,
)
from .pipeline import SsvConfig, SsvPipeline
from .tasks import ReasoningTask, load_dataset, normalize_label, _task_from_obj
from .verifier import Instantiation, Polarity, Verifier


def _load_config(ctx: click.Context) -> SsvConfig:
    params = ctx.obj or {}
    obj = {}
    config_path = params.get("config")
    if config_path:
        try:
            obj = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"cannot read config {config_path}: {exc}")
    try:
        config = SsvConfig.from_obj(obj)
        overrides = {}
        if params.get("parallelism") is not None:
            overrides["parallelism"] = params["parallelism"]
        if params.get("solver_cmd") is not None:
            overrides["solver_cmd"] = tuple(shlex.split(params["solver_cmd"]))
        if params.get("check_timeout_ms") is not None:
            overrides["check_timeout_ms"] = params["check_timeout_ms"]
        if overrides:
            config = replace(config, **overrides)
        return config
    except ConfigError as exc:
        raise click.UsageError(str(exc))


def _provider_overrides(config: SsvConfig, provider, transcripts, model,
                        endpoint) -> SsvConfig:
    overrides = {}
    if provider:
        overrides["provider"] = provider
    if transcripts:
        overrides["transcripts_path"] = transcripts
    if model:
        overrides["model"] = model
    if endpoint:
        overrides["endpoint"] = endpoint
    try:
        return replace(config, **overrides) if overrides else config
    except ConfigError as exc:
        raise click.UsageError(str(exc))


@click.group()
@click.option("--config", type=click.Path(), help="JSON config file (SsvConfig shape).")
@click.option("--parallelism", type=int, help="Worker count for task-level parallelism.")
@click.option("--log-level", default="warning", show_default=True,
              type=click.Choice(["debug", "info", "warning", "error"]))
@click.option("--solver-cmd", help="External solver command line (SMT-LIB 2 over stdio).")
@click.option("--check-timeout-ms", type=float, help="Per-check solver budget.")
@click.pass_context
def main(ctx, config, parallelism, log_level, solver_cmd, check_timeout_ms):
    """Self-verifying reasoning over multiple-choice problems."""
    logging.basicConfig(level=getattr(logging, log_level.upper()))
    ctx.obj = {
        "config": config,
        "parallelism": parallelism,
        "solver_cmd": solver_cmd,
        "check_timeout_ms": check_timeout_ms,
    }


def _load_task(path: str, task_id: str | None) -> ReasoningTask:
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.strip()
    if stripped.startswith("{") and "\n" not in stripped:
        obj = json.loads(stripped)
        if "schema" in obj:
            raise click.UsageError("task file contains only a header object")
        return _task_from_obj(obj, 1)
    tasks = load_dataset(path)
    if task_id is not None:
        for task in tasks:
            if task.id == task_id:
                return task
        raise click.UsageError(f"task id {task_id!r} not found in {path}")
    if len(tasks) == 1:
        return tasks[0]
    raise click.UsageError(
        f"{path} holds {len(tasks)} tasks; pick one with --task-id")


@main.command()
@click.option("--task", "task_path", required=True, type=click.Path(exists=True),
              help="Task file: one JSON object, or a JSONL dataset with --task-id.")
@click.option("--task-id", help="Task id when the file holds several tasks.")
@click.option("--provider", type=click.Choice(["live", "record", "replay"]))
@click.option("--transcripts", type=click.Path(), help="Transcript store JSON path.")
@click.option("--model", help="Model name for LLM calls.")
@click.option("--endpoint", help="Chat-completions endpoint URL for live/record.")
@click.pass_context
def run(ctx, task_path, task_id, provider, transcripts, model, endpoint):
    """Answer one task; prints the result as JSON."""
    config = _provider_overrides(_load_config(ctx), provider, transcripts,
                                 model, endpoint)
    try:
        task = _load_task(task_path, task_id)
        gateway = build_gateway(config)
        with build_backend(config) as backend:
            pipeline = SsvPipeline(gateway, backend, config)
            result = pipeline.run(task)
            if config.solver_cache_path:
                backend.save_cache(config.solver_cache_path)
    except SsvError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(result.to_obj(), indent=1, sort_keys=True))


@main.command("eval")
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--ablate", type=click.Path(exists=True),
              help="JSON grid: {\"max_repairs\": [...], \"temperature_prefixes\": [...]}")
@click.option("--limit", type=int, help="Evaluate only the first N tasks.")
@click.option("--provider", type=click.Choice(["live", "record", "replay"]))
@click.option("--transcripts", type=click.Path())
@click.option("--model")
@click.option("--endpoint")
@click.pass_context
def eval_cmd(ctx, dataset, out_dir, ablate, limit, provider, transcripts,
             model, endpoint):
    """Evaluate a dataset; writes report.json, report.csv, ablation.json."""
    config = _provider_overrides(_load_config(ctx), provider, transcripts,
                                 model, endpoint)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        tasks = load_dataset(dataset, limit=limit)
        gateway = build_gateway(config)
        backend = build_backend(config)
        try:
            records, metrics = evaluate(tasks, config, gateway=gateway,
                                        backend=backend,
                                        parallelism=config.parallelism)
            write_report(records, metrics, out / "report.json", "json")
            write_report(records, metrics, out / "report.csv", "csv")
            if ablate:
                grid = json.loads(Path(ablate).read_text(encoding="utf-8"))
                cells = ablation_grid(tasks, config, grid, gateway=gateway,
                                      backend=backend)
                (out / "ablation.json").write_text(
                    json.dumps(cells, indent=1, sort_keys=True) + "\n",
                    encoding="utf-8")
            if config.solver_cache_path:
                backend.save_cache(config.solver_cache_path)
        finally:
            backend.close()
    except SsvError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(metrics.display(), indent=1, sort_keys=True))


def _load_instantiations(path: str, program) -> list[Instantiation]:
    scope = scope_of_init(program.init)
    entries = json.loads(Path(path).read_text(encoding="utf-8"))
    out = []
    for i, entry in enumerate(entries):
        try:
            index = int(entry["constraint_index"])
            polarity = Polarity(entry["polarity"])
        except (KeyError, ValueError) as exc:
            raise click.UsageError(f"instantiation {i}: {exc}")
        description = entry.get("description")
        code = entry.get("code")
        target = entry.get("target", "constraint")
        if code in (None, "", "pass") or (description or "").upper() == "NONE":
            out.append(Instantiation(index, polarity, target=target))
            continue
        try:
            expr = parse_expr(code, scope, lenient=True)
            from .dsl.rewrite import free_symbols

            ill = bool(free_symbols(expr, scope))
        except SsvError:
            expr, ill = None, True
        out.append(Instantiation(index, polarity, description,
                                 None if ill else expr,
                                 ill_formed=ill, source_code=code,
                                 target=target))
    return out


@main.command()
@click.option("--program", "program_path", required=True, type=click.Path(exists=True))
@click.option("--instantiations", "inst_path", required=True, type=click.Path(exists=True))
@click.pass_context
def verify(ctx, program_path, inst_path):
    """Verify a program against an instantiations file (no LLM involved)."""
    config = _load_config(ctx)
    try:
        program = parse_program(Path(program_path).read_text(encoding="utf-8"))
        instantiations = _load_instantiations(inst_path, program)
        with build_backend(config) as backend:
            outcome = Verifier(backend).verify_instantiations(program, instantiations)
    except SsvError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(outcome.to_obj(), indent=1, sort_keys=True))


@main.command()
@click.option("--program", "program_path", required=True, type=click.Path(exists=True))
@click.option("--count", "do_count", is_flag=True, help="Also count all models.")
@click.option("--cap", type=int, default=oracle_mod.DEFAULT_CAP, show_default=True,
              help="Enumeration cap on the state space.")
def oracle(program_path, do_count, cap):
    """Brute-force check a program's constraints (and optionally count models)."""
    try:
        program = parse_program(Path(program_path).read_text(encoding="utf-8"))
        constraints = [e for c in program.constraints for e in c.exprs]
        supported = oracle_mod.supports_program(program.init, constraints, cap=cap)
        payload = {"supported": supported, "kernel": oracle_mod.KERNEL}
        if supported:
            payload["states"] = oracle_mod.state_count(program.init, constraints)
            payload["status"] = oracle_mod.oracle_check(
                program.init, constraints, cap=cap).value
            options = {}
            for option in program.options:
                options[option.label.value] = oracle_mod.oracle_check(
                    program.init, constraints + [option.check_expr], cap=cap).value
            payload["options"] = options
            if do_count:
                payload["models"] = oracle_mod.count_models(
                    program.init, constraints, cap=cap)
    except SsvError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(payload, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
