"""In-process adapters that expose the calculator as a QA model and generator."""

from __future__ import annotations

from ..calculator import calc_answer, enumerate_calc_questions, parse_value
from ..calculator.enumerate import OPS
from ..calculator.values import UNITS, Text
from ..errors import CalcError, ParseError
from .base import GenRequest, ScoredAnswer


class CalculatorQA:
    def answer(self, question: str, context: str = "") -> ScoredAnswer:
        try:
            return ScoredAnswer(calc_answer(question), 1.0)
        except (ParseError, CalcError):
            return ScoredAnswer.abstain()


class CalculatorGenerator:
    """Enumerates calculator questions from a ``[op, operands..]`` vocabulary."""

    def generate(self, request: GenRequest) -> list[str]:
        vocab = list(request.vocabulary)
        ops = OPS
        entity_pair = None
        unit = None
        if vocab and vocab[0] in OPS:
            ops = (vocab[0],)
            args = vocab[1:]
            if vocab[0] == "if_then" and len(args) >= 4:
                entity_pair = (args[2], args[3])
                args = args[:2]
            if vocab[0] == "diff" and args and args[-1] in UNITS:
                unit = args[-1]
                args = args[:-1]
        else:
            args = vocab
        values = [v for v in map(parse_value, args) if not isinstance(v, Text)]
        questions = enumerate_calc_questions(values, entity_pair, request.answer, unit, ops)
        return questions[:request.count]
