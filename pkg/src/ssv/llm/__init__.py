"""LLM access: gateway with record/replay, prompt templates, response parsers."""

from .gateway import LlmGateway, LlmRequest, Mode, PromptKind, RateLimit, TranscriptStore
from .parsers import (
    RepairPatch,
    extract_answer_label,
    parse_decomposition,
    parse_instantiations,
    parse_refined_program,
    parse_repair_patch,
    strip_fences,
)
from .prompts import format_options, format_task, render_prompt, template_text
