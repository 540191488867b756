from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ssv.dsl import parse_program
from ssv.llm.gateway import LlmGateway, LlmRequest, Mode, TranscriptStore
from ssv.solver import SolverBackend

FIXTURES = Path(__file__).parent.parent / "src" / "ssv" / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def backend():
    with SolverBackend() as shared:
        yield shared


@pytest.fixture(scope="session")
def technicians():
    return parse_program(fixture_text("technicians.ssv"))


@pytest.fixture(scope="session")
def technicians_exists():
    return parse_program(fixture_text("technicians_exists.ssv"))


@pytest.fixture(scope="session")
def meals():
    return parse_program(fixture_text("meals.ssv"))


class ScriptedGateway(LlmGateway):
    """Replays from a callback instead of a transcript file or the network."""

    def __init__(self, respond):
        super().__init__(mode=Mode.RECORD, store=TranscriptStore(),
                         endpoint="scripted://test")
        self._respond = respond

    def _call_provider(self, request: LlmRequest) -> str:
        return self._respond(request)


@pytest.fixture()
def scripted_gateway():
    return ScriptedGateway
