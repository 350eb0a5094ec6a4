"""Deterministic stand-ins for the neural services.

Each mock is built from a JSON fixture section:

``qa``
    ``{"answers": {question: answer | {"answer", "score", "context"} | [..]},
    "fuzzy": true, "require_span": true}``. With ``require_span`` an answer is
    only returned for a paragraph that contains it, like a span extractor.
``generate``
    ``{"by_answer": {answer: [question, ..]}, "templates": ["What {vocab}?"]}``.
    Templates may use ``{vocab}``, ``{answer}`` and ``{v0}``, ``{v1}``, ...
``next``
    ``{"script": {history: [candidate, ..]}, "rules": [{"match": regex,
    "candidates": [..]}], "default": [..]}``; a candidate is the raw output
    string or ``{"text", "logprob"}``.
``score``
    ``{"scores": {history-or-sha256: prob}, "default": 0.0}``.
"""

from __future__ import annotations

import hashlib
import re
from typing import Any, Iterable, Optional

from ..textscore import normalize_answer
from .base import GenRequest, Sampling, ScoredAnswer


def _norm_key(text: str) -> str:
    return normalize_answer(text)


def history_sha256(history: str) -> str:
    return hashlib.sha256(history.encode("utf-8")).hexdigest()


class TableQA:
    def __init__(self, answers: dict[str, Any], fuzzy: bool = True, require_span: bool = True):
        self.exact = dict(answers)
        self.fuzzy = {_norm_key(k): v for k, v in answers.items()} if fuzzy else {}
        self.require_span = require_span

    @classmethod
    def from_fixture(cls, data: dict[str, Any]) -> "TableQA":
        return cls(data.get("answers", {}), data.get("fuzzy", True), data.get("require_span", True))

    def _entries(self, question: str) -> list[dict[str, Any]]:
        raw = self.exact.get(question)
        if raw is None:
            raw = self.fuzzy.get(_norm_key(question))
        if raw is None:
            return []
        if not isinstance(raw, list):
            raw = [raw]
        return [e if isinstance(e, dict) else {"answer": e} for e in raw]

    def answer(self, question: str, context: str) -> ScoredAnswer:
        for entry in self._entries(question):
            where = entry.get("context")
            if where and where.lower() not in context.lower():
                continue
            text = entry.get("answer")
            if not text:
                return ScoredAnswer.abstain()
            if self.require_span and text.lower() not in context.lower():
                continue
            return ScoredAnswer(text, float(entry.get("score", 1.0)))
        return ScoredAnswer.abstain()


class _Slots(dict):
    def __missing__(self, key):
        raise KeyError(key)


class TemplateGenerator:
    def __init__(self, by_answer: Optional[dict[str, list[str]]] = None,
                 templates: Iterable[str] = ()):
        self.by_answer = {_norm_key(k): list(v) for k, v in (by_answer or {}).items()}
        self.templates = list(templates)

    @classmethod
    def from_fixture(cls, data: dict[str, Any]) -> "TemplateGenerator":
        return cls(data.get("by_answer"), data.get("templates", ()))

    def generate(self, request: GenRequest) -> list[str]:
        out = list(self.by_answer.get(_norm_key(request.answer), []))
        slots = _Slots(vocab=" ".join(request.vocabulary), answer=request.answer)
        slots.update({f"v{i}": w for i, w in enumerate(request.vocabulary)})
        for template in self.templates:
            try:
                out.append(template.format_map(slots))
            except (KeyError, IndexError):
                continue
        return list(dict.fromkeys(out))[:request.count]


def _candidates(items: Iterable[Any]) -> list[tuple[str, float]]:
    out = []
    for i, item in enumerate(items):
        if isinstance(item, dict):
            out.append((item["text"], float(item.get("logprob", -0.1 * i))))
        else:
            out.append((str(item), -0.1 * i))
    return out


class ScriptedNextGen:
    """Next-question generator driven by a fixed table keyed on the history."""

    def __init__(self, script: Optional[dict[str, list]] = None,
                 rules: Iterable[dict[str, Any]] = (), default: Iterable[Any] = ()):
        self.script = {k: _candidates(v) for k, v in (script or {}).items()}
        self.loose = {" ".join(k.split()): v for k, v in self.script.items()}
        self.rules = [(re.compile(r["match"]), _candidates(r["candidates"])) for r in rules]
        self.default = _candidates(default)

    @classmethod
    def from_fixture(cls, data: dict[str, Any]) -> "ScriptedNextGen":
        return cls(data.get("script"), data.get("rules", ()), data.get("default", ()))

    def lookup(self, history: str) -> list[tuple[str, float]]:
        found = self.script.get(history) or self.loose.get(" ".join(history.split()))
        if found is not None:
            return found
        for pattern, cands in self.rules:
            if pattern.search(history):
                return cands
        return self.default

    def next(self, history: str, count: int, sampling: Sampling = Sampling(),
             seed: Optional[int] = None) -> list[tuple[str, float]]:
        ranked = sorted(self.lookup(history), key=lambda c: -c[1])
        return ranked[:count]


class HashScorer:
    def __init__(self, scores: Optional[dict[str, float]] = None, default: float = 0.0):
        self.scores = dict(scores or {})
        self.default = default

    @classmethod
    def from_fixture(cls, data: dict[str, Any]) -> "HashScorer":
        return cls(data.get("scores"), float(data.get("default", 0.0)))

    def score(self, history: str) -> float:
        if history in self.scores:
            return float(self.scores[history])
        return float(self.scores.get(history_sha256(history), self.default))
