"""Best-first search over decomposition chains, and answer evaluation.

A chain's score is ``theta + weight * delta``, lower being better. ``theta``
never decreases as a chain grows and ``delta`` is only added on completion,
so once a complete chain is known, partial chains whose ``theta`` already
exceeds its score can be dropped.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

from .core import (MAX_CHAIN_STEPS, Chain, ChainStep, ComplexQuestion, ModelId, derive_seed,
                   render_history)
from .errors import EmptyQuestion, NoChainFound
from .models import ModelRegistry
from .textscore import Lexicon, answer_em, answer_f1, theta

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    n0: int = 15
    decay: float = 0.5
    scorer_weight: float = 10.0
    max_steps: int = MAX_CHAIN_STEPS
    greedy: bool = False
    budget: int = 500
    seed: Optional[int] = None

    def __post_init__(self):
        if self.n0 < 1:
            raise ValueError("n0 must be >= 1")
        if not 0 < self.decay <= 1:
            raise ValueError("decay must lie in (0, 1]")
        if self.scorer_weight < 0:
            raise ValueError("scorer_weight must be >= 0")
        if self.max_steps < 1 or self.budget < 0:
            raise ValueError("max_steps must be >= 1 and budget >= 0")

    @classmethod
    def preset(cls, name: str, **overrides) -> "SearchConfig":
        """``default`` samples 15 questions first; ``halving`` samples 10 (10, 5, 2, 1, ...)."""
        base = {"default": {}, "halving": {"n0": 10, "decay": 0.5}}
        if name not in base:
            raise ValueError(f"unknown search preset {name!r}")
        return cls(**{**base[name], **overrides})

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "SearchConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown search settings: {sorted(unknown)}")
        return cls(**data)


def sampling_schedule(config: SearchConfig, depth: int) -> int:
    """How many next questions to sample for a chain of ``depth`` steps."""
    # exact rational arithmetic so 15 * 0.5**1 floors to 7, never 7.499..
    return max(1, math.floor(config.n0 * Fraction(repr(config.decay)) ** depth))


def chain_score(chain: Chain, weight: float = 10.0) -> float:
    if chain.complete and chain.delta is not None:
        return chain.theta + weight * chain.delta
    return chain.theta


@dataclass(frozen=True)
class ScoredChain:
    chain: Chain
    score: float


@dataclass(frozen=True)
class SearchResult:
    answer: str
    chain: Chain
    score: float
    explored: int
    completed: tuple[ScoredChain, ...] = ()

    def to_record(self) -> dict[str, Any]:
        return {
            "id": self.chain.question.id,
            "answer": self.answer,
            "score": self.score,
            "explored": self.explored,
            "chain": [{"model": s.model.value, "question": s.question, "answer": s.answer}
                      for s in self.chain.steps],
        }


ExpandHook = Callable[[Chain, Sequence[Chain]], None]


def _theta(chain: Chain, lexicon: Optional[Lexicon]) -> float:
    try:
        return theta(chain, lexicon)
    except EmptyQuestion:
        # nothing to measure novelty against; search then ranks on delta alone
        return 0.0


def answer_question(question: ComplexQuestion, registry: ModelRegistry,
                    config: SearchConfig = SearchConfig(),
                    on_expand: Optional[ExpandHook] = None,
                    lexicon: Optional[Lexicon] = None) -> SearchResult:
    """Find the lowest-scoring complete decomposition of ``question``.

    ``explored`` counts sub-model answer calls and never exceeds the budget.
    Greedy mode asks for one candidate per step, so the frontier never holds
    more than one chain. ``on_expand(parent, children)`` sees every expansion.
    """
    order = itertools.count()
    frontier: list[tuple[float, int, Chain]] = [(0.0, next(order), Chain(question))]
    best: Optional[ScoredChain] = None
    completed: list[ScoredChain] = []
    explored = 0
    exhausted = False

    while frontier and not exhausted:
        key, _, chain = heapq.heappop(frontier)
        if best is not None and key > best.score:
            break
        depth = len(chain)
        count = 1 if config.greedy else sampling_schedule(config, depth)
        seed = derive_seed(config.seed, question.id, *(s.question for s in chain.steps))
        candidates = registry.next_candidates(render_history(chain), count, seed)
        children: list[Chain] = []
        for cand in candidates:
            if cand.model is ModelId.EOQ:
                if not chain.steps:
                    continue
                delta = registry.score_chain(chain.mark_complete())
                done = chain.mark_complete(delta)
                scored = ScoredChain(done, chain_score(done, config.scorer_weight))
                completed.append(scored)
                children.append(done)
                if best is None or scored.score < best.score:
                    best = scored
                continue
            if depth >= config.max_steps:
                continue
            if explored >= config.budget:
                exhausted = True
                break
            explored += 1
            got = registry.answer(cand.model, cand.question, question.contexts)
            if got.no_answer:
                continue
            steps = chain.steps + (ChainStep(cand.model, cand.question, got.text, got.score),)
            grown = chain.append_step(steps[-1], _theta(Chain(question, steps), lexicon))
            children.append(grown)
            heapq.heappush(frontier, (grown.theta, next(order), grown))
        if on_expand is not None:
            on_expand(chain, children)

    if best is None:
        raise NoChainFound(f"no complete chain for {question.id!r} after {explored} calls")
    return SearchResult(best.chain.final_answer() or "", best.chain, best.score, explored,
                        tuple(completed))


# -- evaluation --------------------------------------------------------------

@dataclass(frozen=True)
class QuestionScore:
    id: str
    em: float
    f1: float
    classes: tuple[str, ...] = ()


@dataclass(frozen=True)
class EvalReport:
    em: float
    f1: float
    per_question: tuple[QuestionScore, ...]
    by_class: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_record(self, scale: float = 1.0) -> dict[str, Any]:
        return {
            "em": self.em * scale,
            "f1": self.f1 * scale,
            "count": len(self.per_question),
            "by_class": {c: {"em": v["em"] * scale, "f1": v["f1"] * scale, "count": v["count"]}
                         for c, v in self.by_class.items()},
        }


def _classes(rec: Mapping[str, Any]) -> tuple[str, ...]:
    raw = rec.get("classes", rec.get("class"))
    if raw is None:
        return ()
    if isinstance(raw, str):
        return (raw,)
    return tuple(raw)


def evaluate(predictions: Iterable[Mapping[str, Any]],
             gold: Iterable[Mapping[str, Any]]) -> EvalReport:
    """Mean EM and F1 of predictions against gold answers, matched by id.

    A prediction whose id has no gold record is an error. A null answer scores 0.
    """
    gold_by_id = {str(g["id"]): g for g in gold}
    scores = []
    for p in predictions:
        pid = str(p["id"])
        if pid not in gold_by_id:
            raise KeyError(f"prediction {pid!r} has no gold answer")
        g = gold_by_id[pid]
        pred, ref = p.get("answer"), g.get("answer") or ""
        if pred is None:
            em, f1 = 0.0, 0.0
        else:
            em, f1 = float(answer_em(pred, ref)), answer_f1(pred, ref)
        scores.append(QuestionScore(pid, em, f1, _classes(g) or _classes(p)))
    by_class: dict[str, dict[str, float]] = {}
    for name in sorted({c for s in scores for c in s.classes}):
        members = [s for s in scores if name in s.classes]
        by_class[name] = {"em": _mean(s.em for s in members), "f1": _mean(s.f1 for s in members),
                          "count": len(members)}
    return EvalReport(_mean(s.em for s in scores), _mean(s.f1 for s in scores), tuple(scores),
                      by_class)


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return math.fsum(values) / len(values) if values else 0.0


__all__ = [
    "EvalReport", "QuestionScore", "ScoredChain", "SearchConfig", "SearchResult",
    "answer_question", "chain_score", "evaluate", "sampling_schedule",
]
