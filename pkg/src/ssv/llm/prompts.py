"""Prompt templates and deterministic rendering.

Templates live as text resources with ``{{slot}}`` placeholders; each prompt
kind maps to exactly one template. Few-shot blocks are part of the template
text (configuration, not code).
"""

from __future__ import annotations

import re
from importlib import resources

from ..errors import MissingSlot
from ..tasks import ReasoningTask
from .gateway import PromptKind

_SLOT_RE = re.compile(r"\{\{(\w+)\}\}")
_cache: dict[PromptKind, str] = {}


def template_text(kind: PromptKind) -> str:
    cached = _cache.get(kind)
    if cached is None:
        cached = (resources.files("ssv.llm") / "templates" / f"{kind.value}.txt") \
            .read_text(encoding="utf-8")
        _cache[kind] = cached
    return cached


def render_prompt(kind: PromptKind, **inputs: str) -> str:
    """Fill every template slot; raises MissingSlot on unfilled ones."""
    text = template_text(kind)

    def fill(match: re.Match) -> str:
        name = match.group(1)
        if name not in inputs:
            raise MissingSlot(f"{kind.value} template needs slot {name!r}")
        return str(inputs[name])

    rendered = _SLOT_RE.sub(fill, text)
    if "{{" in rendered:
        raise MissingSlot(f"unresolved slot remains in {kind.value} prompt")
    return rendered


def format_task(task: ReasoningTask) -> str:
    """Problem block: context, question, lettered options."""
    lines = [task.context, task.question]
    for label, text in task.options:
        lines.append(f"({label.value}) {text}")
    return "\n".join(lines)


def format_options(task: ReasoningTask) -> str:
    return "\n".join(f"({label.value}) {text}" for label, text in task.options)
