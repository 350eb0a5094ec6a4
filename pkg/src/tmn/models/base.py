"""Sub-model interfaces and the values they exchange."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Protocol, Sequence

from ..core import ModelId


@dataclass(frozen=True)
class ScoredAnswer:
    text: str
    score: float
    no_answer: bool = False

    def __post_init__(self):
        if self.no_answer and self.text:
            raise ValueError("a no-answer result carries no text")

    @classmethod
    def abstain(cls) -> "ScoredAnswer":
        return cls("", 0.0, True)


@dataclass(frozen=True)
class Sampling:
    top_p: float = 0.95
    top_k: int = 10
    max_len: int = 40

    def __post_init__(self):
        if not 0 < self.top_p <= 1:
            raise ValueError("top_p must lie in (0, 1]")


@dataclass(frozen=True)
class GenRequest:
    context: str
    answer: str
    vocabulary: tuple[str, ...]
    count: int = 5
    sampling: Sampling = field(default_factory=Sampling)
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "vocabulary", tuple(self.vocabulary))
        if self.count < 1:
            raise ValueError("count must be >= 1")


@dataclass(frozen=True)
class NextGenCandidate:
    model: ModelId
    question: str
    logprob: float = 0.0

    def __post_init__(self):
        if (self.model is ModelId.EOQ) != (not self.question):
            raise ValueError("only the EOQ candidate has an empty question")


class QAService(Protocol):
    def answer(self, question: str, context: str) -> ScoredAnswer: ...


class GeneratorService(Protocol):
    def generate(self, request: GenRequest) -> list[str]: ...


class NextGenService(Protocol):
    def next(self, history: str, count: int, sampling: Sampling,
             seed: Optional[int] = None) -> Sequence[tuple[str, float]]: ...


class ScorerService(Protocol):
    def score(self, history: str) -> float: ...


class NullScorer:
    """Scores every chain 0, leaving only the word-overlap term."""

    def score(self, history: str) -> float:
        return 0.0
