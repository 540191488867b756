"""Reasoning tasks and normalized benchmark dataset ingestion.

Datasets are JSONL files: an optional header object on the first line
(identified by a ``schema`` key), then one task object per line with fields
``id``, ``context``, ``question``, ``options`` (list of ``[label, text]``
pairs) and an optional ``gold`` label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DuplicateLabel,
    InvalidTask,
    MissingField,
    UnreadableFile,
    UnrecognizedLabel,
)

LABELS = ("A", "B", "C", "D", "E", "F", "G")

# Three-way datasets phrase answers as words; one label type serves all.
_WORD_LABELS = {"TRUE": "A", "FALSE": "B", "UNKNOWN": "C"}


@dataclass(frozen=True, order=True)
class OptionLabel:
    value: str

    def __post_init__(self):
        if self.value not in LABELS:
            raise UnrecognizedLabel(f"not an option label: {self.value!r}")

    def __str__(self) -> str:
        return self.value


def normalize_label(text: str) -> OptionLabel:
    """Normalize a raw answer label: strips parentheses, whitespace and case;
    maps True/False/Unknown onto A/B/C."""
    if not isinstance(text, str) or not text.strip():
        raise UnrecognizedLabel(f"empty label: {text!r}")
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    up = s.upper()
    if up in _WORD_LABELS:
        return OptionLabel(_WORD_LABELS[up])
    if len(up) == 1 and up in LABELS:
        return OptionLabel(up)
    raise UnrecognizedLabel(f"unrecognized answer label: {text!r}")


@dataclass(frozen=True)
class ReasoningTask:
    """One multiple-choice reasoning problem."""

    id: str
    context: str
    question: str
    options: tuple[tuple[OptionLabel, str], ...]
    gold: OptionLabel | None = field(default=None)

    def __post_init__(self):
        labels = [label for label, _ in self.options]
        if len(set(labels)) != len(labels):
            raise DuplicateLabel(f"task {self.id}: duplicate option labels")
        if not 2 <= len(labels) <= 7:
            raise InvalidTask(f"task {self.id}: needs 2..7 options, got {len(labels)}")
        expected = [OptionLabel(v) for v in LABELS[: len(labels)]]
        if labels != expected:
            raise InvalidTask(
                f"task {self.id}: labels must be the prefix "
                f"{[e.value for e in expected]}, got {[l.value for l in labels]}"
            )
        if self.gold is not None and self.gold not in labels:
            raise InvalidTask(f"task {self.id}: gold label {self.gold} not among options")

    @property
    def labels(self) -> tuple[OptionLabel, ...]:
        return tuple(label for label, _ in self.options)

    def option_text(self, label: OptionLabel) -> str:
        for cand, text in self.options:
            if cand == label:
                return text
        raise KeyError(label)


def _task_from_obj(obj: dict, line_no: int) -> ReasoningTask:
    for key in ("id", "context", "question", "options"):
        if key not in obj:
            raise MissingField(f"missing field {key!r}", line=line_no)
    try:
        options = tuple(
            (normalize_label(label), str(text)) for label, text in obj["options"]
        )
    except UnrecognizedLabel as exc:
        raise InvalidTask(str(exc), line=line_no) from exc
    except (TypeError, ValueError) as exc:
        raise InvalidTask(f"malformed options: {exc}", line=line_no) from exc
    gold = obj.get("gold")
    try:
        return ReasoningTask(
            id=str(obj["id"]),
            context=str(obj["context"]),
            question=str(obj["question"]),
            options=options,
            gold=normalize_label(gold) if gold is not None else None,
        )
    except UnrecognizedLabel as exc:
        raise InvalidTask(str(exc), line=line_no) from exc
    except (DuplicateLabel, InvalidTask) as exc:
        if exc.line is None:
            exc.line = line_no
        raise


def load_dataset(path: str | Path, limit: int | None = None) -> list[ReasoningTask]:
    """Load tasks from a JSONL dataset file, in file order.

    Malformed lines abort with the offending line number.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UnreadableFile(f"cannot read {path}: {exc}") from exc
    tasks: list[ReasoningTask] = []
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise UnreadableFile(f"invalid JSON: {exc.msg}", line=line_no) from exc
        if not isinstance(obj, dict):
            raise UnreadableFile("each line must be a JSON object", line=line_no)
        if line_no == 1 and "schema" in obj:
            continue  # header object
        tasks.append(_task_from_obj(obj, line_no))
        if limit is not None and len(tasks) >= limit:
            break
    return tasks


def task_to_obj(task: ReasoningTask) -> dict:
    obj = {
        "id": task.id,
        "context": task.context,
        "question": task.question,
        "options": [[label.value, text] for label, text in task.options],
    }
    if task.gold is not None:
        obj["gold"] = task.gold.value
    return obj


def write_dataset(tasks: list[ReasoningTask], path: str | Path, header: dict | None = None) -> None:
    """Write tasks as JSONL; inverse of :func:`load_dataset`."""
    path = Path(path)
    lines = []
    if header is not None:
        header = dict(header)
        header.setdefault("schema", "ssv-task/1")
        lines.append(json.dumps(header, sort_keys=True))
    lines.extend(json.dumps(task_to_obj(t), sort_keys=True) for t in tasks)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
