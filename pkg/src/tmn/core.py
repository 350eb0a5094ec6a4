"""Domain types: questions, contexts, decomposition chains and their text forms."""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .errors import AlreadyComplete, EmptyChain, HistoryParseError

MAX_CHAIN_STEPS = 5
EOQ_TOKEN = "[EOQ]"


def derive_seed(seed: Optional[int], *parts: Any) -> Optional[int]:
    """A stable 63-bit seed for one sub-task, or None when unseeded."""
    if seed is None:
        return None
    key = "\x1f".join([str(seed)] + [str(p) for p in parts]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big") >> 1


class ModelId(str, enum.Enum):
    SQUAD = "SQUAD"
    CALC = "CALC"
    EOQ = "EOQ"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Context:
    text: str
    title: Optional[str] = None

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ValueError("context text must be non-empty")


class _EmptyContext:
    """The empty paragraph used by calculator steps."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    text = ""
    title = None

    def __repr__(self) -> str:
        return "EMPTY_CONTEXT"

    def __reduce__(self):
        return (_EmptyContext, ())


EMPTY_CONTEXT = _EmptyContext()


@dataclass(frozen=True)
class ComplexQuestion:
    id: str
    text: str
    contexts: tuple[Context, ...]
    gold_answer: Optional[str] = None
    dataset_tag: Optional[str] = None

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ValueError("question text must be non-empty")
        object.__setattr__(self, "contexts", tuple(self.contexts))
        if not self.contexts:
            raise ValueError(f"question {self.id!r} has no contexts")

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "ComplexQuestion":
        contexts = []
        for c in rec.get("contexts") or []:
            if isinstance(c, str):
                contexts.append(Context(c))
            else:
                contexts.append(Context(c["text"], c.get("title")))
        return cls(
            id=str(rec["id"]),
            text=rec["question"],
            contexts=tuple(contexts),
            gold_answer=rec.get("answer"),
            dataset_tag=rec.get("dataset_tag"),
        )

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "id": self.id,
            "question": self.text,
            "contexts": [{"title": c.title, "text": c.text} for c in self.contexts],
            "answer": self.gold_answer,
        }
        if self.dataset_tag is not None:
            rec["dataset_tag"] = self.dataset_tag
        return rec


@dataclass(frozen=True)
class ChainStep:
    model: ModelId
    question: str
    answer: str
    answer_score: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "model", ModelId(self.model))
        if self.model is ModelId.EOQ:
            raise ValueError("EOQ cannot be a chain step")
        if not self.question:
            raise ValueError("step question must be non-empty")


@dataclass(frozen=True)
class Chain:
    """A (partial) decomposition of a complex question.

    Chains are values: :meth:`append_step` and :meth:`mark_complete` return
    new chains and leave the receiver untouched.
    """

    question: ComplexQuestion
    steps: tuple[ChainStep, ...] = ()
    complete: bool = False
    theta: float = 0.0
    delta: Optional[float] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.complete and not self.steps:
            raise EmptyChain("a complete chain needs at least one step")
        if self.delta is not None and not self.complete:
            raise ValueError("delta is only defined on complete chains")
        if self.theta < 0:
            raise ValueError("theta must be non-negative")

    def __len__(self) -> int:
        return len(self.steps)

    def append_step(self, step: ChainStep, theta_new: float) -> "Chain":
        if self.complete:
            raise AlreadyComplete("cannot extend a complete chain")
        if theta_new < self.theta:
            raise ValueError(f"theta may not decrease ({self.theta} -> {theta_new})")
        return replace(self, steps=self.steps + (step,), theta=theta_new)

    def mark_complete(self, delta: Optional[float] = None) -> "Chain":
        if not self.steps:
            raise EmptyChain("cannot complete a chain with no steps")
        if self.complete:
            raise AlreadyComplete("chain is already complete")
        if delta is not None and not 0.0 <= delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {delta}")
        return replace(self, complete=True, delta=delta)

    def final_answer(self) -> Optional[str]:
        return self.steps[-1].answer if self.steps else None

    def prefix(self, n: int) -> "Chain":
        """The partial chain made of the first ``n`` steps."""
        return Chain(self.question, self.steps[:n], theta=0.0)


def append_step(chain: Chain, step: ChainStep, theta_new: float) -> Chain:
    return chain.append_step(step, theta_new)


def mark_complete(chain: Chain, delta: Optional[float] = None) -> Chain:
    return chain.mark_complete(delta)


# -- history serialization ---------------------------------------------------

_DELIMS = re.compile(r"(QC:|Q:|A:)")


def escape_field(text: str) -> str:
    return _DELIMS.sub(r"\\\1", text.replace("\\", "\\\\"))


def render_history(chain: Chain) -> str:
    """Serialize ``qc`` and the Q/A pairs as ``QC: .. Q: .. A: ..``."""
    parts = ["QC: " + escape_field(chain.question.text)]
    for step in chain.steps:
        parts.append("Q: " + escape_field(step.question))
        parts.append("A: " + escape_field(step.answer))
    return " ".join(parts)


def parse_history(text: str) -> tuple[str, list[tuple[str, str]]]:
    """Inverse of :func:`render_history`: ``(qc, [(q1, a1), ...])``."""
    if not text.startswith("QC: "):
        raise HistoryParseError("history must start with 'QC: '")
    fields: list[tuple[str, list[str]]] = [("QC", [])]
    i = 4
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            if i + 1 >= n:
                raise HistoryParseError(f"dangling escape at {i}")
            fields[-1][1].append(text[i + 1])
            i += 2
        elif text.startswith(" Q: ", i):
            fields.append(("Q", []))
            i += 4
        elif text.startswith(" A: ", i):
            fields.append(("A", []))
            i += 4
        else:
            fields[-1][1].append(ch)
            i += 1
    kinds = [k for k, _ in fields[1:]]
    if kinds != ["Q", "A"] * (len(kinds) // 2) or len(kinds) % 2:
        raise HistoryParseError("history must alternate Q: and A: fields")
    values = ["".join(chars) for _, chars in fields]
    pairs = [(values[k], values[k + 1]) for k in range(1, len(values), 2)]
    return values[0], pairs


# -- next-question surface form -----------------------------------------------

_PREFIXED = re.compile(r"^\s*\((SQUAD|CALC)\)\s*(.+?)\s*$", re.S)


def format_nextgen_output(model: ModelId, question: str = "") -> str:
    model = ModelId(model)
    if model is ModelId.EOQ:
        return EOQ_TOKEN
    return f"({model.value}) {question}"


def parse_nextgen_output(text: str) -> tuple[ModelId, str]:
    """Split ``"(CALC) diff(2003, 2002)"`` into its model and question.

    Raises ValueError for anything that is neither a prefixed question nor
    the end-of-questions marker.
    """
    if text.strip() == EOQ_TOKEN:
        return ModelId.EOQ, ""
    m = _PREFIXED.match(text)
    if not m:
        raise ValueError(f"unparseable next-question output: {text!r}")
    return ModelId(m.group(1)), m.group(2)
