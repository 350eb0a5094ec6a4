"""Question classification and distant-supervision hint extraction.

A hint ``<context, answer, vocabulary>`` describes one reasoning step: the
paragraph to ask about, the answer the sub-question must produce, and the
words the sub-question should use. A :class:`HintChain` is one candidate
reasoning path for a complex question.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from itertools import permutations
from typing import Any, Iterable, Optional, Sequence, Union

from .calculator import Date, Diff, IfThen, Not, Number, Text, answers_match, eval_calc
from .calculator.parser import DATE_PATTERNS, date_from_match, number_from_text
from .calculator.values import UNITS
from .core import EMPTY_CONTEXT, ComplexQuestion, Context, ModelId, _EmptyContext
from .errors import CalcError, NoGoldAnswer
from .textscore import essential_words, load_stopwords, normalize_answer, tokenize, zeta

DEFAULT_WINDOW = 20
DIFFERENCE_CAP = 50


class QuestionClass(str, enum.Enum):
    DIFFERENCE = "difference"
    COMPARISON = "comparison"
    COMPLEMENTATION = "complementation"
    COMPOSITION = "composition"
    CONJUNCTION = "conjunction"
    OUT_OF_SCOPE = "out_of_scope"

    def __str__(self) -> str:
        return self.value


# Difference-question patterns, matched against the lowercased question.
DIFFERENCE_MUST_MATCH = [
    ".*how many (days|months|years).*",
    ".*how many.*(days|months|years).* between .*",
    ".*how many.* shorter .+ than .*",
    ".*how many.* shorter .+ compar.*",
    ".*how many.* longer .+ than .*",
    ".*how many.* longer .+ compar.*",
    ".*how many.* less .+ than .*",
    ".*how many.* less .+ compar.*",
    ".*how many.* more .+ than .*",
    ".*how many.* more .+ compar.*",
    ".*difference.*",
]
DIFFERENCE_SHOULD_NOT_MATCH = [
    ".*minimum.*",
    ".*maximum.*",
    ".*longest.*",
    ".*shortest.*",
    ".*highest.*",
    ".*lowest.*",
    ".*first.*",
    ".*last.*",
    ".*second.*",
    ".*third.*",
    ".*fourth.*",
    ".*how many touchdown.*",
    ".*how many field goal.*",
    ".*how many point.*",
    ".*more touchdown.*",
    ".*more field goal.*",
    ".*more point.*",
]
COMPARISON_PATTERN = r"([^,]+)[:,](.*) or (.*)\?"
COMPLEMENTATION_PATTERN = r"^(.*percent.*)(\Wnot\W|n't\W)(.*)$"

_MUST = [re.compile(p) for p in DIFFERENCE_MUST_MATCH]
_MUST_NOT = [re.compile(p) for p in DIFFERENCE_SHOULD_NOT_MATCH]
_COMPARISON = re.compile(COMPARISON_PATTERN, re.I)
_COMPLEMENT = re.compile(COMPLEMENTATION_PATTERN)
_UNIT_MENTION = re.compile(r"\b(day|month|year)s?\b")

_PROSE_DATES = [(k, re.compile(r"(?<![\w.,])" + p.pattern, p.flags)) for k, p in DATE_PATTERNS]
_PROSE_NUMBER = re.compile(r"(?<![\w.,])-?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?(?!\w)(?:\s*%)?")
_WORD = re.compile(r"\w+")


@dataclass(frozen=True)
class ValueMention:
    value: Union[Number, Date]
    char_span: tuple[int, int]
    context_index: int = 0
    text: str = ""

    def render(self) -> str:
        return self.value.render()


@dataclass(frozen=True)
class Hint:
    context: Union[Context, _EmptyContext]
    answer: str
    vocabulary: tuple[str, ...]
    target: ModelId
    step_index: int
    context_index: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "vocabulary", tuple(self.vocabulary))
        if self.step_index < 1:
            raise ValueError("step_index starts at 1")
        if self.target is ModelId.CALC and (
                not self.vocabulary or self.vocabulary[0] not in ("diff", "not", "if_then")):
            raise ValueError("calculator hints must name a calculator function first")

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {}
        if self.context_index is None:
            rec["empty"] = True
        else:
            rec["context_index"] = self.context_index
        rec.update(answer=self.answer, vocab=list(self.vocabulary), target=self.target.value)
        return rec


HintChain = tuple[Hint, ...]


def _check_chain(hints: Sequence[Hint], gold: str) -> HintChain:
    if [h.step_index for h in hints] != list(range(1, len(hints) + 1)):
        raise ValueError("hint step indices must be 1..k")
    if hints[-1].answer != gold:
        raise ValueError("last hint must carry the gold answer")
    return tuple(hints)


# -- classification ----------------------------------------------------------

def is_difference(text: str) -> bool:
    q = text.lower()
    return any(p.match(q) for p in _MUST) and not any(p.match(q) for p in _MUST_NOT)


def comparison_entities(text: str) -> Optional[tuple[str, str]]:
    m = _COMPARISON.match(text)
    if not m:
        return None
    e1, e2 = m.group(2).strip(), m.group(3).strip()
    return (e1, e2) if e1 and e2 else None


def is_complementation(text: str) -> bool:
    return bool(_COMPLEMENT.match(text.lower()))


def _contains(doc: str, phrase: str) -> bool:
    p = normalize_answer(phrase)
    return bool(p) and f" {p} " in f" {normalize_answer(doc)} "


def title_mention(title: Optional[str], text: str) -> Optional[str]:
    """Longest run of the title's words found in ``text`` (case-insensitive).

    Returns the matching span of ``text`` so the mention keeps its casing.
    """
    if not title:
        return None
    words = _WORD.findall(title)
    stop = load_stopwords()
    for length in range(len(words), 0, -1):
        for start in range(len(words) - length + 1):
            part = words[start:start + length]
            if all(w.lower() in stop for w in part):
                continue
            pattern = r"\b" + r"\W+".join(re.escape(w) for w in part) + r"\b"
            m = re.search(pattern, text, re.I)
            if m:
                return m.group()
    return None


def _composition_pairs(question: ComplexQuestion, gold: str):
    ctxs = question.contexts
    for i, j in permutations(range(len(ctxs)), 2):
        d1, d2 = ctxs[i], ctxs[j]
        if _contains(d2.text, gold) and not _contains(d1.text, gold):
            e1 = title_mention(d2.title, d1.text)
            if e1:
                yield i, j, e1


def _conjunction_pairs(question: ComplexQuestion, gold: str):
    ctxs = question.contexts
    for i in range(len(ctxs)):
        for j in range(i + 1, len(ctxs)):
            if _contains(ctxs[i].text, gold) and _contains(ctxs[j].text, gold):
                yield i, j


def classify(question: ComplexQuestion) -> frozenset[QuestionClass]:
    classes = set()
    text = question.text
    if is_difference(text):
        classes.add(QuestionClass.DIFFERENCE)
    if comparison_entities(text):
        classes.add(QuestionClass.COMPARISON)
    if is_complementation(text):
        classes.add(QuestionClass.COMPLEMENTATION)
    gold = question.gold_answer
    if gold and len(question.contexts) >= 2:
        if any(_composition_pairs(question, gold)):
            classes.add(QuestionClass.COMPOSITION)
        if any(_conjunction_pairs(question, gold)):
            classes.add(QuestionClass.CONJUNCTION)
    return frozenset(classes or {QuestionClass.OUT_OF_SCOPE})


# -- value extraction --------------------------------------------------------

def _token_index(spans: list[tuple[int, int]], pos: int) -> int:
    for k, (s, e) in enumerate(spans):
        if pos < e:
            return k
    return len(spans)


def extract_values(context: Context, near_entity: Optional[str] = None,
                   window: int = DEFAULT_WINDOW, context_index: int = 0) -> list[ValueMention]:
    """Dates and numbers mentioned in ``context``, in textual order.

    Bare four-digit years come out once, as year-precision dates; the
    calculator reads them as numbers wherever a number is needed.
    """
    text = context.text
    found: list[tuple[int, int, int, Union[Number, Date]]] = []
    for prio, (kind, pat) in enumerate(_PROSE_DATES):
        for m in pat.finditer(text):
            try:
                found.append((m.start(), -(m.end() - m.start()), prio, date_from_match(kind, m)))
            except ValueError:
                continue
    for m in _PROSE_NUMBER.finditer(text):
        found.append((m.start(), -(m.end() - m.start()), len(_PROSE_DATES),
                      number_from_text(m.group())))
    found.sort(key=lambda t: (t[0], t[1], t[2]))
    mentions: list[ValueMention] = []
    taken_until = -1
    for start, neg_len, _, value in found:
        if start < taken_until:
            continue
        end = start - neg_len
        taken_until = end
        mentions.append(ValueMention(value, (start, end), context_index, text[start:end]))
    if near_entity is None:
        return mentions
    spans = [m.span() for m in _WORD.finditer(text)]
    anchors = [_token_index(spans, m.start())
               for m in re.finditer(re.escape(near_entity), text, re.I)]
    if not anchors:
        return []
    return [vm for vm in mentions
            if min(abs(_token_index(spans, vm.char_span[0]) - a) for a in anchors) <= window]


# -- hint extraction ---------------------------------------------------------

def _unit_hint(text: str) -> Optional[str]:
    m = _UNIT_MENTION.search(text.lower())
    return m.group(1) + "s" if m else None


def _diff_units(x, y, unit_hint):
    if isinstance(x, Date) and isinstance(y, Date):
        if x.is_bare_year and y.is_bare_year:
            return [None] + ([unit_hint] if unit_hint else [])
        return [unit_hint] if unit_hint else list(UNITS)
    return [None]


def _answer_text(vm: ValueMention) -> str:
    return vm.text.rstrip("% ").strip() if isinstance(vm.value, Number) else vm.text


def _all_mentions(question: ComplexQuestion) -> list[ValueMention]:
    out = []
    for i, ctx in enumerate(question.contexts):
        out.extend(extract_values(ctx, context_index=i))
    return out


def _difference_chains(question: ComplexQuestion, gold: str, qc_vocab: tuple[str, ...],
                       cap: int) -> list[HintChain]:
    unit_hint = _unit_hint(question.text)
    mentions = _all_mentions(question)
    triples = []
    seen = set()
    for m1, m2 in permutations(mentions, 2):
        if m1.render() == m2.render():
            continue
        for unit in _diff_units(m1.value, m2.value, unit_hint):
            key = (m1.render(), m2.render(), unit)
            if key in seen:
                continue
            try:
                result = eval_calc(Diff(m1.value, m2.value, unit))
            except CalcError:
                continue
            if not answers_match(result, gold):
                continue
            seen.add(key)
            if m1.context_index == m2.context_index:
                distance = abs(m1.char_span[0] - m2.char_span[0])
            else:
                distance = float("inf")
            triples.append((distance, m1, m2, unit))
    triples.sort(key=lambda t: t[0])
    chains = []
    ctxs = question.contexts
    for _, m1, m2, unit in triples[:cap]:
        calc_vocab = ("diff", m1.render(), m2.render()) + ((unit,) if unit else ())
        chains.append(_check_chain([
            Hint(ctxs[m1.context_index], _answer_text(m1), qc_vocab, ModelId.SQUAD, 1, m1.context_index),
            Hint(ctxs[m2.context_index], _answer_text(m2), qc_vocab, ModelId.SQUAD, 2, m2.context_index),
            Hint(EMPTY_CONTEXT, gold, calc_vocab, ModelId.CALC, 3),
        ], gold))
    return chains


def _if_then_reaches(n1, n2, e1: str, e2: str, gold: str) -> bool:
    for op in ("<", ">"):
        try:
            if answers_match(eval_calc(IfThen(n1, op, n2, Text(e1), Text(e2))), gold):
                return True
        except CalcError:
            return False
    return False


def _comparison_chains(question: ComplexQuestion, gold: str, window: int) -> list[HintChain]:
    ents = comparison_entities(question.text)
    if not ents:
        return []
    e1, e2 = ents
    qc_words = essential_words(question.text)
    ctxs = question.contexts
    pairs = []
    if len(ctxs) == 1:
        near1 = extract_values(ctxs[0], e1, window, 0)
        near2 = extract_values(ctxs[0], e2, window, 0)
        v1 = tuple(qc_words - tokenize(e2))
        v2 = tuple(qc_words - tokenize(e1))
        pairs.append((near1, near2, v1, v2))
    else:
        for i, j in permutations(range(len(ctxs)), 2):
            d1, d2 = ctxs[i], ctxs[j]
            if not (_contains(d1.text, e1) or _contains(d1.title or "", e1)):
                continue
            if not (_contains(d2.text, e2) or _contains(d2.title or "", e2)):
                continue
            pairs.append((extract_values(d1, context_index=i), extract_values(d2, context_index=j),
                          tuple(zeta(question.text, d1, d2)), tuple(zeta(question.text, d2, d1))))
    chains, seen = [], set()
    for near1, near2, v1, v2 in pairs:
        for n1 in near1:
            for n2 in near2:
                key = (n1.render(), n2.render())
                if n1.render() == n2.render() or key in seen:
                    continue
                if not _if_then_reaches(n1.value, n2.value, e1, e2, gold):
                    continue
                seen.add(key)
                chains.append(_check_chain([
                    Hint(ctxs[n1.context_index], _answer_text(n1), v1, ModelId.SQUAD, 1, n1.context_index),
                    Hint(ctxs[n2.context_index], _answer_text(n2), v2, ModelId.SQUAD, 2, n2.context_index),
                    Hint(EMPTY_CONTEXT, gold, ("if_then", n1.render(), n2.render(), e1, e2), ModelId.CALC, 3),
                ], gold))
    return chains


def _complementation_chains(question: ComplexQuestion, gold: str,
                            qc_vocab: tuple[str, ...]) -> list[HintChain]:
    chains, seen = [], set()
    for m in _all_mentions(question):
        if not isinstance(m.value, Number) or not 0 <= m.value.value <= 100:
            continue
        if m.render() in seen or not answers_match(eval_calc(Not(m.value)), gold):
            continue
        seen.add(m.render())
        ctx = question.contexts[m.context_index]
        chains.append(_check_chain([
            Hint(ctx, _answer_text(m), qc_vocab, ModelId.SQUAD, 1, m.context_index),
            Hint(EMPTY_CONTEXT, gold, ("not", m.render()), ModelId.CALC, 2),
        ], gold))
    return chains


def _composition_chains(question: ComplexQuestion, gold: str) -> list[HintChain]:
    ctxs = question.contexts
    chains = []
    for i, j, e1 in _composition_pairs(question, gold):
        d1, d2 = ctxs[i], ctxs[j]
        v2 = zeta(question.text, d2, d1) | tokenize(e1)
        chains.append(_check_chain([
            Hint(d1, e1, tuple(zeta(question.text, d1, d2)), ModelId.SQUAD, 1, i),
            Hint(d2, gold, tuple(v2), ModelId.SQUAD, 2, j),
        ], gold))
    return chains


def _conjunction_chains(question: ComplexQuestion, gold: str) -> list[HintChain]:
    ctxs = question.contexts
    return [_check_chain([
        Hint(ctxs[i], gold, tuple(zeta(question.text, ctxs[i], ctxs[j])), ModelId.SQUAD, 1, i),
        Hint(ctxs[j], gold, tuple(zeta(question.text, ctxs[j], ctxs[i])), ModelId.SQUAD, 2, j),
    ], gold) for i, j in _conjunction_pairs(question, gold)]


def extract_hints(question: ComplexQuestion, classes: Optional[Iterable[QuestionClass]] = None,
                  window: int = DEFAULT_WINDOW, cap: int = DIFFERENCE_CAP) -> list[HintChain]:
    """Every hint chain consistent with the gold answer, grouped by class."""
    gold = question.gold_answer
    if not gold:
        raise NoGoldAnswer(f"question {question.id!r} has no gold answer")
    classes = classify(question) if classes is None else frozenset(classes)
    qc_vocab = tuple(essential_words(question.text))
    chains: list[HintChain] = []
    if QuestionClass.DIFFERENCE in classes:
        chains += _difference_chains(question, gold, qc_vocab, cap)
    if QuestionClass.COMPARISON in classes:
        chains += _comparison_chains(question, gold, window)
    if QuestionClass.COMPLEMENTATION in classes:
        chains += _complementation_chains(question, gold, qc_vocab)
    if QuestionClass.COMPOSITION in classes:
        chains += _composition_chains(question, gold)
    if QuestionClass.CONJUNCTION in classes:
        chains += _conjunction_chains(question, gold)
    return chains


def in_scope(question: ComplexQuestion) -> bool:
    classes = classify(question)
    if classes == {QuestionClass.OUT_OF_SCOPE} or not question.gold_answer:
        return False
    return bool(extract_hints(question, classes))


def hints_record(question: ComplexQuestion, classes: Iterable[QuestionClass],
                 chains: Sequence[HintChain]) -> dict[str, Any]:
    return {
        "id": question.id,
        "classes": sorted(c.value for c in classes),
        "chains": [[h.to_record() for h in chain] for chain in chains],
    }


def hint_from_record(rec: dict[str, Any], question: ComplexQuestion, step_index: int) -> Hint:
    if rec.get("empty"):
        ctx, idx = EMPTY_CONTEXT, None
    else:
        idx = rec["context_index"]
        ctx = question.contexts[idx]
    return Hint(ctx, rec["answer"], tuple(rec["vocab"]), ModelId(rec["target"]), step_index, idx)
