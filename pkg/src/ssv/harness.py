"""Dataset evaluation: runs the pipeline per task, aggregates accuracy /
coverage / precision, executes ablation grids, and writes reports.

Percentages are kept at full precision internally and rounded to one
decimal only for display; undefined ratios (zero denominators) render
as "-".
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError
from .llm.gateway import LlmGateway, Mode, TranscriptStore
from .pipeline import SsvConfig, SsvPipeline, SsvResult
from .solver.backend import SolverBackend
from .tasks import ReasoningTask

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TaskRecord:
    task_id: str
    answer: str | None
    verified: bool
    gold: str | None
    correct: bool
    used_fallback: bool
    program_produced: bool
    timing_ms: float
    error: str | None = None

    def to_obj(self) -> dict:
        return {
            "task_id": self.task_id,
            "answer": self.answer,
            "verified": self.verified,
            "gold": self.gold,
            "correct": self.correct,
            "used_fallback": self.used_fallback,
            "program_produced": self.program_produced,
            "timing_ms": self.timing_ms,
            "error": self.error,
        }


@dataclass(frozen=True)
class RunMetrics:
    total: int
    correct: int
    verified: int
    verified_correct: int
    program_produced: int
    program_correct: int

    @staticmethod
    def _ratio(num: int, den: int) -> float | None:
        return None if den == 0 else num / den

    @property
    def general_accuracy(self) -> float | None:
        return self._ratio(self.correct, self.total)

    @property
    def coverage(self) -> float | None:
        return self._ratio(self.verified, self.total)

    @property
    def precision(self) -> float | None:
        return self._ratio(self.verified_correct, self.verified)

    @property
    def program_accuracy(self) -> float | None:
        return self._ratio(self.program_correct, self.program_produced)

    def display(self) -> dict[str, str]:
        return {
            "general_accuracy": format_percent(self.general_accuracy),
            "coverage": format_percent(self.coverage),
            "precision": format_percent(self.precision),
            "program_accuracy": format_percent(self.program_accuracy),
        }

    def to_obj(self) -> dict:
        return {
            "counts": {
                "total": self.total,
                "correct": self.correct,
                "verified": self.verified,
                "verified_correct": self.verified_correct,
                "program_produced": self.program_produced,
                "program_correct": self.program_correct,
            },
            "general_accuracy": self.general_accuracy,
            "coverage": self.coverage,
            "precision": self.precision,
            "program_accuracy": self.program_accuracy,
            "display": self.display(),
        }


def format_percent(ratio: float | None) -> str:
    return "-" if ratio is None else f"{ratio * 100:.1f}"


def compute_metrics(records: list[TaskRecord]) -> RunMetrics:
    """Aggregate counts; permutation-invariant over records."""
    return RunMetrics(
        total=len(records),
        correct=sum(r.correct for r in records),
        verified=sum(r.verified for r in records),
        verified_correct=sum(r.verified and r.correct for r in records),
        program_produced=sum(r.program_produced for r in records),
        program_correct=sum(r.program_produced and r.correct for r in records),
    )


def metrics_from_counts(total: int, correct: int, verified: int,
                        verified_correct: int) -> RunMetrics:
    """Metrics from externally supplied counts (no per-program stats)."""
    return RunMetrics(total, correct, verified, verified_correct, 0, 0)


# --- wiring ---


def build_gateway(config: SsvConfig) -> LlmGateway:
    store = TranscriptStore(config.transcripts_path)
    return LlmGateway(
        mode=Mode(config.provider),
        store=store,
        endpoint=config.endpoint,
        api_key=os.environ.get("SSV_API_KEY"),
    )


def build_backend(config: SsvConfig) -> SolverBackend:
    backend = SolverBackend(
        solver_cmd=list(config.solver_cmd) if config.solver_cmd else None,
        check_timeout_ms=config.check_timeout_ms,
        grounding_bound=config.grounding_bound,
    )
    if config.solver_cache_path and Path(config.solver_cache_path).exists():
        backend.load_cache(config.solver_cache_path)
    return backend


def _record_of(task: ReasoningTask, result: SsvResult, timing_ms: float) -> TaskRecord:
    answer = result.answer.value if result.answer else None
    gold = task.gold.value if task.gold else None
    return TaskRecord(
        task_id=task.id,
        answer=answer,
        verified=result.verified,
        gold=gold,
        correct=gold is not None and answer == gold,
        used_fallback=result.trace.used_fallback,
        program_produced=answer is not None and not result.trace.used_fallback,
        timing_ms=timing_ms,
    )


def evaluate(tasks: list[ReasoningTask], config: SsvConfig,
             gateway: LlmGateway | None = None,
             backend: SolverBackend | None = None,
             parallelism: int | None = None):
    """Run the pipeline over every task; per-task failures are recorded,
    never abort the run. Deterministic in replay mode (timings report 0)."""
    for task in tasks:
        if task.gold is None:
            raise ConfigError(f"task {task.id} lacks a gold label")
    own_backend = backend is None
    gateway = gateway or build_gateway(config)
    backend = backend or build_backend(config)
    workers = parallelism or config.parallelism or os.cpu_count() or 1
    replay = gateway.mode is Mode.REPLAY

    def run_one(task: ReasoningTask) -> TaskRecord:
        pipeline = SsvPipeline(gateway, backend, config)
        started = time.monotonic()
        try:
            result = pipeline.run(task)
        except Exception as exc:  # noqa: BLE001 - recorded, not raised
            log.exception("task %s failed", task.id)
            return TaskRecord(task.id, None, False,
                              task.gold.value if task.gold else None,
                              False, False, False, 0.0, error=str(exc))
        timing = 0.0 if replay else (time.monotonic() - started) * 1000.0
        return _record_of(task, result, timing)

    try:
        if workers <= 1:
            records = [run_one(t) for t in tasks]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                records = list(pool.map(run_one, tasks))
    finally:
        if own_backend:
            backend.close()
    return records, compute_metrics(records)


def ablation_grid(tasks: list[ReasoningTask], base_config: SsvConfig,
                  grid: dict, gateway: LlmGateway | None = None,
                  backend: SolverBackend | None = None) -> list[dict]:
    """One evaluation per grid cell; cells share the transcript store and
    the solver cache. Grid keys: ``max_repairs`` (list of ints) and
    ``temperature_prefixes`` (list of temperature lists)."""
    if not grid:
        raise ConfigError("ablation grid is empty")
    repairs_axis = grid.get("max_repairs", [base_config.max_repairs])
    temps_axis = grid.get("temperature_prefixes", [list(base_config.temperatures)])
    gateway = gateway or build_gateway(base_config)
    backend = backend or build_backend(base_config)
    cells = []
    try:
        for max_repairs in repairs_axis:
            for temperatures in temps_axis:
                config = replace(base_config, max_repairs=int(max_repairs),
                                 temperatures=tuple(float(t) for t in temperatures))
                try:
                    records, metrics = evaluate(tasks, config, gateway=gateway,
                                                backend=backend)
                    cells.append({
                        "max_repairs": config.max_repairs,
                        "temperatures": list(config.temperatures),
                        "metrics": metrics.to_obj(),
                        "records": [r.to_obj() for r in records],
                    })
                except Exception as exc:  # noqa: BLE001 - recorded per cell
                    log.exception("ablation cell failed")
                    cells.append({
                        "max_repairs": int(max_repairs),
                        "temperatures": [float(t) for t in temperatures],
                        "error": str(exc),
                    })
    finally:
        backend.close()
    return cells


def write_report(records: list[TaskRecord], metrics: RunMetrics,
                 path: str | Path, fmt: str = "json") -> None:
    """JSON mirrors the record/metric structures; CSV is one row per task
    plus a metrics footer block."""
    path = Path(path)
    if fmt == "json":
        payload = {
            "records": [r.to_obj() for r in records],
            "metrics": metrics.to_obj(),
        }
        path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n",
                        encoding="utf-8")
        return
    if fmt == "csv":
        import csv
        import io

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        fields = ["task_id", "answer", "verified", "gold", "correct",
                  "used_fallback", "program_produced", "timing_ms", "error"]
        writer.writerow(fields)
        for record in records:
            obj = record.to_obj()
            writer.writerow(["-" if obj[f] is None else obj[f] for f in fields])
        writer.writerow([])
        writer.writerow(["metric", "value"])
        counts = metrics.to_obj()["counts"]
        for key in sorted(counts):
            writer.writerow([key, counts[key]])
        for key, value in sorted(metrics.display().items()):
            writer.writerow([key, value])
        path.write_text(buffer.getvalue(), encoding="utf-8")
        return
    raise ConfigError(f"unknown report format {fmt!r}")
