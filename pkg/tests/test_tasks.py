import json

import pytest

from ssv.errors import DuplicateLabel, InvalidTask, MissingField, UnreadableFile, UnrecognizedLabel
from ssv.tasks import (
    OptionLabel,
    ReasoningTask,
    load_dataset,
    normalize_label,
    write_dataset,
)


def test_normalize_strips_parens_whitespace_case():
    assert normalize_label("(C)").value == "C"
    assert normalize_label(" a ").value == "A"
    assert normalize_label("True").value == "A"
    assert normalize_label("false").value == "B"
    assert normalize_label("Unknown").value == "C"


def test_normalize_rejects_garbage():
    with pytest.raises(UnrecognizedLabel):
        normalize_label("maybe")
    with pytest.raises(UnrecognizedLabel):
        normalize_label("")


def test_normalize_idempotent():
    for raw in ["(C)", " a ", "True", "g", "(F)"]:
        once = normalize_label(raw)
        assert normalize_label(once.value) == once


def _write_lines(tmp_path, lines):
    path = tmp_path / "tasks.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_single_task(tmp_path):
    line = json.dumps({"id": "t1", "context": "...", "question": "...",
                       "options": [["A", "fish"], ["B", "hot cakes"]],
                       "gold": "A"})
    tasks = load_dataset(_write_lines(tmp_path, [line]))
    assert len(tasks) == 1
    assert [l.value for l in tasks[0].labels] == ["A", "B"]
    assert tasks[0].gold == OptionLabel("A")


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    assert load_dataset(path) == []


def test_duplicate_label_reports_line(tmp_path):
    good = json.dumps({"id": "a", "context": "c", "question": "q",
                       "options": [["A", "x"], ["B", "y"]]})
    bad = json.dumps({"id": "b", "context": "c", "question": "q",
                      "options": [["A", "x"], ["A", "y"]]})
    with pytest.raises(DuplicateLabel) as err:
        load_dataset(_write_lines(tmp_path, [good, bad]))
    assert err.value.line == 2


def test_missing_field_reports_line(tmp_path):
    bad = json.dumps({"id": "a", "question": "q", "options": [["A", "x"], ["B", "y"]]})
    with pytest.raises(MissingField) as err:
        load_dataset(_write_lines(tmp_path, [bad]))
    assert err.value.line == 1


def test_invalid_json_reports_line(tmp_path):
    with pytest.raises(UnreadableFile) as err:
        load_dataset(_write_lines(tmp_path, ["{not json"]))
    assert err.value.line == 1


def test_header_line_skipped_and_limit(tmp_path):
    header = json.dumps({"schema": "ssv-task/1", "label_map": {"True": "A"}})
    lines = [header] + [
        json.dumps({"id": f"t{i}", "context": "c", "question": "q",
                    "options": [["A", "x"], ["B", "y"]], "gold": "A"})
        for i in range(3)
    ]
    assert len(load_dataset(_write_lines(tmp_path, lines))) == 3
    assert len(load_dataset(_write_lines(tmp_path, lines), limit=2)) == 2


def test_option_count_and_prefix_enforced():
    with pytest.raises(InvalidTask):
        ReasoningTask("x", "c", "q", ((OptionLabel("A"), "only"),))
    with pytest.raises(InvalidTask):
        ReasoningTask("x", "c", "q",
                      ((OptionLabel("B"), "b"), (OptionLabel("C"), "c")))


def test_round_trip(tmp_path):
    tasks = load_dataset(_write_lines(tmp_path, [
        json.dumps({"id": "t1", "context": "a", "question": "b",
                    "options": [["A", "x"], ["B", "y"], ["C", "z"]],
                    "gold": "C"}),
        json.dumps({"id": "t2", "context": "a", "question": "b",
                    "options": [["True", "True"], ["False", "False"]]}),
    ]))
    out = tmp_path / "out.jsonl"
    write_dataset(tasks, out, header={"schema": "ssv-task/1"})
    assert load_dataset(out) == tasks
