import json
from pathlib import Path

import pytest

from tmn.core import ComplexQuestion, Context
from tmn.models import ModelRegistry

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_registry(name: str, generate: bool = False) -> tuple[ComplexQuestion, ModelRegistry]:
    path = FIXTURES / f"{name}.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    endpoints = {k: f"mock://{path.name}" for k in ("qa", "next", "score")}
    if generate:
        endpoints["generate"] = f"mock://{path.name}"
    return ComplexQuestion.from_record(data["question"]), ModelRegistry.from_endpoints(endpoints, FIXTURES)


def make_question(text: str, *paragraphs: str, answer=None, qid: str = "q",
                  titles=None) -> ComplexQuestion:
    titles = titles or [None] * len(paragraphs)
    return ComplexQuestion(qid, text, tuple(Context(p, t) for p, t in zip(paragraphs, titles)), answer)


@pytest.fixture
def services():
    return fixture_registry("services_sector", generate=True)


@pytest.fixture
def dead_end():
    return fixture_registry("dead_end")
