"""Training data for the next-question generator, chain scorer and question generators.

Hint chains are turned into verified decompositions by sampling sub-questions
step by step; decompositions that stay close to the complex question's words
are then serialized as training examples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence

from .core import (Chain, ChainStep, ComplexQuestion, derive_seed, format_nextgen_output,
                   parse_nextgen_output, render_history)
from .errors import EmptyQuestion
from .hints import Hint, HintChain, classify, extract_hints
from .models import ModelRegistry
from .textscore import Lexicon, answer_f1, chain_metrics, essential_words, theta

DEFAULT_PER_STEP = 5
DEFAULT_CAP = 50
POSITIVE_F1 = 0.2
DISTRACTOR_RANGE = (2, 7)


@dataclass(frozen=True)
class TrainingExample:
    input: str
    output: str

    def __post_init__(self):
        parse_nextgen_output(self.output)

    def to_record(self) -> dict[str, str]:
        return {"input": self.input, "output": self.output}


@dataclass(frozen=True)
class ScorerExample:
    history: str
    label: str

    def __post_init__(self):
        if self.label not in ("positive", "negative"):
            raise ValueError(f"bad label {self.label!r}")

    def to_record(self) -> dict[str, str]:
        return {"history": self.history, "label": self.label}


@dataclass(frozen=True)
class QGenExample:
    context: str
    answer: str
    vocabulary: tuple[str, ...]
    question: str

    def to_record(self) -> dict[str, Any]:
        return {"context": self.context, "vocab": list(self.vocabulary),
                "answer": self.answer, "question": self.question}


# -- decompositions ----------------------------------------------------------

def _expand(registry: ModelRegistry, question: ComplexQuestion, hints: HintChain,
            per_step: int, seed: Optional[int], chain_index: int):
    """Depth-first over the verified sub-questions of each hint in turn."""
    stack: list[tuple[ChainStep, ...]] = [()]
    while stack:
        steps = stack.pop()
        if len(steps) == len(hints):
            yield steps
            continue
        hint: Hint = hints[len(steps)]
        step_seed = derive_seed(seed, question.id, chain_index, *(s.question for s in steps))
        found = registry.verified_subquestions(hint.target, hint, per_step, step_seed)
        # reversed so the first candidate is expanded first
        for q, got in reversed(found[:per_step]):
            stack.append(steps + (ChainStep(hint.target, q, got.text, got.score),))


def build_decompositions(question: ComplexQuestion, chains: Sequence[HintChain],
                         registry: ModelRegistry, per_step: int = DEFAULT_PER_STEP,
                         cap: int = DEFAULT_CAP, seed: Optional[int] = None,
                         lexicon: Optional[Lexicon] = None) -> list[Chain]:
    """Every chain of verified sub-questions that follows one of the hint chains.

    At most ``cap`` chains are kept, lowest word-novelty first. Chains with the
    same steps reached from different hint chains are kept once.
    """
    found: list[Chain] = []
    seen: set[tuple] = set()
    for i, hints in enumerate(chains):
        for steps in _expand(registry, question, hints, per_step, seed, i):
            key = tuple((s.model, s.question, s.answer) for s in steps)
            if key in seen:
                continue
            seen.add(key)
            partial = Chain(question, steps)
            try:
                th = theta(partial, lexicon)
            except EmptyQuestion:
                return []
            found.append(Chain(question, steps, complete=True, theta=th))
    order = sorted(range(len(found)), key=lambda k: (found[k].theta, k))
    return [found[k] for k in order[:cap]]


def filter_decompositions(chains: Iterable[Chain], theta_max: float = 0.3, mu_max: float = 0.3,
                          sum_max: float = 0.4, lexicon: Optional[Lexicon] = None) -> list[Chain]:
    return [c for c in chains if chain_metrics(c, lexicon).passes(theta_max, mu_max, sum_max)]


def decompose(question: ComplexQuestion, registry: ModelRegistry, per_step: int = DEFAULT_PER_STEP,
              cap: int = DEFAULT_CAP, seed: Optional[int] = None,
              thresholds: tuple[float, float, float] = (0.3, 0.3, 0.4),
              lexicon: Optional[Lexicon] = None) -> list[Chain]:
    """classify, extract hints, build and filter, for one complex question."""
    if not question.gold_answer:
        return []
    classes = classify(question)
    hints = extract_hints(question, classes)
    built = build_decompositions(question, hints, registry, per_step, cap, seed, lexicon)
    return filter_decompositions(built, *thresholds, lexicon=lexicon)


# -- emitters ----------------------------------------------------------------

def emit_nextgen_examples(chains: Iterable[Chain]) -> list[TrainingExample]:
    """One example per step plus the closing [EOQ] example, per chain.

    Duplicate chains produce duplicate examples.
    """
    out = []
    for chain in chains:
        for i, step in enumerate(chain.steps):
            out.append(TrainingExample(render_history(chain.prefix(i)),
                                       format_nextgen_output(step.model, step.question)))
        out.append(TrainingExample(render_history(chain.prefix(len(chain))),
                                   format_nextgen_output("EOQ")))
    return out


def emit_scorer_examples(question: ComplexQuestion, sampled_chains: Iterable[Chain],
                         f1_threshold: float = POSITIVE_F1) -> list[ScorerExample]:
    """Label each chain by the F1 of its final answer against the gold answer.

    An F1 equal to the threshold counts as positive.
    """
    gold = question.gold_answer or ""
    out = []
    for chain in sampled_chains:
        f1 = answer_f1(chain.final_answer() or "", gold)
        label = "positive" if f1 >= f1_threshold else "negative"
        out.append(ScorerExample(render_history(chain), label))
    return out


def _word_class(word: str) -> str:
    return "num" if any(ch.isdigit() for ch in word) else "alpha"


def prep_qgen_training(squad_records: Sequence[dict[str, Any]],
                       distractor_range: tuple[int, int] = DISTRACTOR_RANGE,
                       seed: Optional[int] = None,
                       lexicon: Optional[Lexicon] = None) -> list[QGenExample]:
    """Question-generator examples whose vocabulary mixes in distractor words.

    Each record gets ``j ~ U[lo, hi]`` distractors drawn from the essential
    words of other questions on the same paragraph, falling back to every
    other question when the paragraph has only one. Distractors of the same
    kind (numeric or alphabetic) as the question's own words are preferred.
    """
    lo, hi = distractor_range
    if not 0 <= lo <= hi:
        raise ValueError(f"bad distractor range {distractor_range}")
    rng = random.Random(seed)
    words = [essential_words(r["question"], lexicon) for r in squad_records]
    by_context: dict[str, list[int]] = {}
    for i, r in enumerate(squad_records):
        by_context.setdefault(r["context"], []).append(i)
    out = []
    for i, rec in enumerate(squad_records):
        gold = words[i]
        siblings = [k for k in by_context[rec["context"]] if k != i]
        if not siblings:
            siblings = [k for k in range(len(squad_records)) if k != i]
        pool = list(dict.fromkeys(w for k in siblings for w in words[k] if w not in gold))
        kinds = {_word_class(w) for w in gold}
        similar = [w for w in pool if _word_class(w) in kinds]
        j = rng.randint(lo, hi)
        if len(similar) >= j:
            pool = similar
        distractors = rng.sample(pool, min(j, len(pool)))
        vocab = gold.to_list() + distractors
        rng.shuffle(vocab)
        out.append(QGenExample(rec["context"], rec["answer"], tuple(vocab), rec["question"]))
    return out


__all__ = [
    "QGenExample", "ScorerExample", "TrainingExample", "build_decompositions", "decompose",
    "emit_nextgen_examples", "emit_scorer_examples", "filter_decompositions", "prep_qgen_training",
]
