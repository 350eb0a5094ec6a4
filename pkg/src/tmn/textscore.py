"""Lexical scoring: essential words, vocabulary pruning, chain metrics, EM/F1."""

from __future__ import annotations

import hashlib
import re
import string
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .core import Chain, Context
from .errors import EmptyQuestion

ESSENTIAL_TAGS = frozenset({"NOUN", "VERB", "NUM", "PROPN", "ADJ", "RB", "ADV"})
CALC_KEYWORDS = frozenset({"diff", "not", "if_then", "days", "months", "years"})
DEFAULT_OVERLAP_THRESHOLD = 0.8

_TOKEN = re.compile(r"\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?|\w+(?:'\w+)*")
_ARTICLES = re.compile(r"\b(a|an|the)\b")

Tagger = Callable[[Sequence[str]], Sequence[str]]


class TokenSet:
    """Insertion-ordered set of lowercase tokens."""

    __slots__ = ("_items",)

    def __init__(self, items: Iterable[str] = ()):
        self._items = dict.fromkeys(items)

    def __iter__(self) -> Iterator[str]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item: object) -> bool:
        return item in self._items

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TokenSet):
            return self._items.keys() == other._items.keys()
        if isinstance(other, (set, frozenset)):
            return self._items.keys() == other
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._items))

    def __repr__(self) -> str:
        return "TokenSet(%r)" % list(self._items)

    def __sub__(self, other: Iterable[str]) -> "TokenSet":
        drop = set(other)
        return TokenSet(t for t in self._items if t not in drop)

    def __or__(self, other: Iterable[str]) -> "TokenSet":
        return TokenSet([*self._items, *other])

    def to_list(self) -> list[str]:
        return list(self._items)


def stopwords_path() -> Path:
    return Path(str(resources.files("tmn") / "data" / "stopwords.txt"))


@lru_cache(maxsize=8)
def load_stopwords(path: Optional[str] = None) -> frozenset[str]:
    p = Path(path) if path else stopwords_path()
    words = (line.strip().lower() for line in p.read_text(encoding="utf-8").splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


def stopwords_sha256(path: Optional[str] = None) -> str:
    p = Path(path) if path else stopwords_path()
    return hashlib.sha256(p.read_bytes()).hexdigest()


@dataclass(frozen=True)
class Lexicon:
    """Stopword list plus an optional part-of-speech tagger plug-in.

    ``tagger`` receives the candidate tokens and returns one coarse tag per
    token; only tokens tagged with one of ``ESSENTIAL_TAGS`` survive.
    """

    stopwords: frozenset[str] = field(default_factory=load_stopwords)
    tagger: Optional[Tagger] = None


_default_lexicon: Optional[Lexicon] = None


def default_lexicon() -> Lexicon:
    global _default_lexicon
    if _default_lexicon is None:
        _default_lexicon = Lexicon()
    return _default_lexicon


def set_default_lexicon(lexicon: Optional[Lexicon]) -> None:
    global _default_lexicon
    _default_lexicon = lexicon


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; numbers keep their decimal point, lose thousands commas."""
    text = text.replace("’", "'").lower()
    return [t.replace(",", "") if t[0].isdigit() else t for t in _TOKEN.findall(text)]


def essential_words(text: str, lexicon: Optional[Lexicon] = None) -> TokenSet:
    lex = lexicon or default_lexicon()
    toks = [t for t in tokenize(text) if t not in lex.stopwords and t.strip(string.punctuation + "_")]
    if lex.tagger is not None and toks:
        tags = lex.tagger(toks)
        toks = [t for t, tag in zip(toks, tags) if tag in ESSENTIAL_TAGS]
    return TokenSet(toks)


def zeta(question: str, own_doc: Context, other_doc: Optional[Context],
         mode: str = "prose", lexicon: Optional[Lexicon] = None) -> TokenSet:
    """Question vocabulary pruned of terms exclusive to the other document.

    ``mode="prose"`` keeps Φ(question) minus other-exclusive terms.
    ``mode="formal"`` returns only the other-exclusive terms.
    """
    words = essential_words(question, lexicon)
    if other_doc is None or not other_doc.text:
        return words if mode == "prose" else TokenSet()
    own = set(tokenize(own_doc.text))
    exclusive = set(tokenize(other_doc.text)) - own
    if mode == "prose":
        return words - exclusive
    if mode == "formal":
        return TokenSet(w for w in words if w in exclusive)
    raise ValueError(f"unknown zeta mode {mode!r}")


# -- chain metrics -----------------------------------------------------------

@dataclass(frozen=True)
class ChainMetrics:
    theta: float
    mu: float
    nu: int
    new_words: int
    uncovered_words: int
    question_words: int

    def passes(self, theta_max=0.3, mu_max=0.3, sum_max=0.4) -> bool:
        # compare the sum on integer counts so 0.1 + 0.3 cannot drift past 0.4
        total = (self.new_words + self.uncovered_words) / self.question_words
        return self.theta < theta_max and self.mu < mu_max and total < sum_max and self.nu == 0


def _new_words(chain: Chain, qc_words: TokenSet, lex: Lexicon) -> set[str]:
    new: set[str] = set()
    answer_tokens: set[str] = set()
    for step in chain.steps:
        for w in essential_words(step.question, lex):
            if w not in qc_words and w not in answer_tokens and w not in CALC_KEYWORDS:
                new.add(w)
        answer_tokens.update(tokenize(step.answer))
    return new


def _uncovered(chain: Chain, qc_words: TokenSet, lex: Lexicon) -> list[str]:
    covered: set[str] = set()
    for step in chain.steps:
        covered.update(essential_words(step.question, lex))
    return [w for w in qc_words if w not in covered]


def _question_words(chain: Chain, lex: Lexicon) -> TokenSet:
    words = essential_words(chain.question.text, lex)
    if not words:
        raise EmptyQuestion(f"question {chain.question.id!r} has no essential words")
    return words


def theta(chain: Chain, lexicon: Optional[Lexicon] = None) -> float:
    lex = lexicon or default_lexicon()
    qc_words = _question_words(chain, lex)
    return len(_new_words(chain, qc_words, lex)) / len(qc_words)


def mu(chain: Chain, lexicon: Optional[Lexicon] = None) -> float:
    lex = lexicon or default_lexicon()
    qc_words = _question_words(chain, lex)
    return len(_uncovered(chain, qc_words, lex)) / len(qc_words)


def nu(chain: Chain, lexicon: Optional[Lexicon] = None) -> int:
    """Number of intermediate answers never reused later in the chain."""
    lex = lexicon or default_lexicon()
    steps = chain.steps
    if len(steps) < 2:
        return 0
    final_tokens = set(tokenize(steps[-1].answer))
    unused = 0
    for i, step in enumerate(steps[:-1]):
        ans = set(essential_words(step.answer, lex)) or set(tokenize(step.answer))
        later = set(final_tokens)
        for s in steps[i + 1:]:
            later.update(tokenize(s.question))
        if not ans & later:
            unused += 1
    return unused


def chain_metrics(chain: Chain, lexicon: Optional[Lexicon] = None) -> ChainMetrics:
    lex = lexicon or default_lexicon()
    qc_words = _question_words(chain, lex)
    n = len(qc_words)
    new = len(_new_words(chain, qc_words, lex))
    unc = len(_uncovered(chain, qc_words, lex))
    return ChainMetrics(new / n, unc / n, nu(chain, lex), new, unc, n)


# -- answer metrics ----------------------------------------------------------

_PUNCT = set(string.punctuation)


def _strip_punct(text: str) -> str:
    out = []
    for i, ch in enumerate(text):
        if ch in _PUNCT:
            between_digits = 0 < i < len(text) - 1 and text[i - 1].isdigit() and text[i + 1].isdigit()
            if ch == "." and between_digits:
                out.append(ch)
            continue
        out.append(ch)
    return "".join(out)


def normalize_answer(text: str) -> str:
    """Lowercase, drop punctuation (decimal points survive) and articles."""
    text = _strip_punct(text.lower())
    text = _ARTICLES.sub(" ", text)
    return " ".join(text.split())


def answer_em(prediction: str, gold: str) -> int:
    return int(normalize_answer(prediction) == normalize_answer(gold))


def answer_f1(prediction: str, gold: str) -> float:
    pred = normalize_answer(prediction).split()
    ref = normalize_answer(gold).split()
    if not pred or not ref:
        return float(pred == ref)
    common = sum((Counter(pred) & Counter(ref)).values())
    if common == 0:
        return 0.0
    # 2PR/(P+R) reduces to 2c/(|pred|+|ref|); exact for the usual small counts
    return 2 * common / (len(pred) + len(ref))


def overlaps(prediction: str, target: str, threshold: float = DEFAULT_OVERLAP_THRESHOLD) -> bool:
    if not normalize_answer(prediction):
        return False
    return answer_f1(prediction, target) >= threshold
