"""Routing of sub-model calls, with the answer-consistency filter for generators."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union
from urllib.parse import urlsplit

from ..calculator import answers_match
from ..core import Chain, Context, ModelId, _EmptyContext, parse_nextgen_output, render_history
from ..errors import ConfigError, NotComplete
from ..hints import Hint
from ..textscore import DEFAULT_OVERLAP_THRESHOLD, overlaps
from .base import (GeneratorService, GenRequest, NextGenCandidate, NextGenService, NullScorer,
                   QAService, Sampling, ScoredAnswer, ScorerService)
from .calc import CalculatorGenerator, CalculatorQA
from .http import HttpGenerator, HttpNextGen, HttpQA, HttpScorer
from .mock import HashScorer, ScriptedNextGen, TableQA, TemplateGenerator

log = logging.getLogger(__name__)

_MOCKS = {"qa": TableQA, "generate": TemplateGenerator, "next": ScriptedNextGen, "score": HashScorer}
_HTTP = {"qa": HttpQA, "generate": HttpGenerator, "next": HttpNextGen, "score": HttpScorer}


def load_service(uri: str, kind: str, base_dir: Union[str, Path] = ".", **http_options):
    """Build a service of ``kind`` (qa, generate, next, score) from its URI.

    ``mock://fixture.json#section`` reads one section of a JSON fixture,
    relative paths resolving against ``base_dir``; the section defaults to
    ``kind``. ``http(s)://`` yields a wire-protocol client and ``null`` is
    accepted for the scorer only.
    """
    if kind not in _MOCKS:
        raise ConfigError(f"unknown service kind {kind!r}")
    if uri == "null":
        if kind != "score":
            raise ConfigError(f"only the scorer may be null (got {kind})")
        return NullScorer()
    parts = urlsplit(uri)
    if parts.scheme in ("http", "https"):
        return _HTTP[kind](uri, **http_options)
    if parts.scheme != "mock":
        raise ConfigError(f"unsupported endpoint {uri!r}")
    path = Path(parts.netloc + parts.path)
    if not path.is_absolute():
        path = Path(base_dir) / path
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"mock fixture not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"mock fixture {path} is not valid JSON: {exc}") from None
    section = parts.fragment or kind
    if section not in data:
        raise ConfigError(f"mock fixture {path} has no {section!r} section")
    return _MOCKS[kind].from_fixture(data[section])


AnyContext = Union[Context, _EmptyContext]


@dataclass
class ModelRegistry:
    qa: dict[ModelId, QAService]
    subq_gen: dict[ModelId, GeneratorService]
    nextgen: NextGenService
    scorer: ScorerService = field(default_factory=NullScorer)
    overlap_threshold: float = DEFAULT_OVERLAP_THRESHOLD
    sampling: Sampling = field(default_factory=Sampling)

    def __post_init__(self):
        self.qa.setdefault(ModelId.CALC, CalculatorQA())
        self.subq_gen.setdefault(ModelId.CALC, CalculatorGenerator())

    @classmethod
    def from_endpoints(cls, endpoints: Mapping[str, str], base_dir: Union[str, Path] = ".",
                       overlap_threshold: float = DEFAULT_OVERLAP_THRESHOLD,
                       **http_options) -> "ModelRegistry":
        """Endpoints keys: ``qa``, ``generate`` (optional), ``next``, ``score`` (optional)."""
        def get(kind, default=None):
            uri = endpoints.get(kind, default)
            if uri is None:
                raise ConfigError(f"no endpoint configured for {kind!r}")
            return load_service(uri, kind, base_dir, **http_options)

        subq = {}
        if endpoints.get("generate"):
            subq[ModelId.SQUAD] = get("generate")
        return cls(qa={ModelId.SQUAD: get("qa")}, subq_gen=subq, nextgen=get("next"),
                   scorer=get("score", "null"), overlap_threshold=overlap_threshold)

    def _qa(self, model: ModelId) -> QAService:
        model = ModelId(model)
        if model is ModelId.EOQ:
            raise ValueError("EOQ is not a question-answering model")
        try:
            return self.qa[model]
        except KeyError:
            raise ConfigError(f"no QA model registered for {model}") from None

    def answer(self, model: ModelId, question: str,
               contexts: Sequence[AnyContext]) -> ScoredAnswer:
        """Answer against each paragraph independently and keep the most confident answer."""
        qa = self._qa(model)
        if ModelId(model) is ModelId.CALC:
            return qa.answer(question, "")
        best = ScoredAnswer.abstain()
        for ctx in contexts:
            got = qa.answer(question, ctx.text)
            if not got.no_answer and (best.no_answer or got.score > best.score):
                best = got
        return best

    def _matches(self, model: ModelId, produced: ScoredAnswer, expected: str) -> bool:
        if produced.no_answer:
            return False
        if model is ModelId.CALC:
            return answers_match(produced.text, expected)
        return overlaps(produced.text, expected, self.overlap_threshold)

    def verified_subquestions(self, model: ModelId, hint: Hint, count: int,
                              seed: Optional[int] = None) -> list[tuple[str, ScoredAnswer]]:
        """Generated sub-questions paired with the answers that validated them."""
        model = ModelId(model)
        if hint.target is not model:
            raise ValueError(f"hint targets {hint.target}, not {model}")
        try:
            gen = self.subq_gen[model]
        except KeyError:
            raise ConfigError(f"no question generator registered for {model}") from None
        request = GenRequest(hint.context.text, hint.answer, hint.vocabulary, count,
                             self.sampling, seed)
        out = []
        for q in dict.fromkeys(gen.generate(request)):
            got = self.answer(model, q, [hint.context])
            if self._matches(model, got, hint.answer):
                out.append((q, got))
        return out

    def generate_subquestions(self, model: ModelId, hint: Hint, count: int,
                              seed: Optional[int] = None) -> list[str]:
        return [q for q, _ in self.verified_subquestions(model, hint, count, seed)]

    def next_candidates(self, history: str, count: int,
                        seed: Optional[int] = None) -> list[NextGenCandidate]:
        out = []
        for text, logprob in self.nextgen.next(history, count, self.sampling, seed):
            try:
                model, question = parse_nextgen_output(text)
            except ValueError:
                log.warning("dropping unparseable next-question output %r", text)
                continue
            out.append(NextGenCandidate(model, question, min(0.0, logprob)))
        return out

    def score_chain(self, chain: Chain) -> float:
        if not chain.complete:
            raise NotComplete("only complete chains are scored")
        value = float(self.scorer.score(render_history(chain)))
        return min(1.0, max(0.0, value))
