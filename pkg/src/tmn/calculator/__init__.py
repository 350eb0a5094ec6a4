"""The symbolic calculator sub-model and its question generator."""

from .enumerate import answers_match, enumerate_calc_questions
from .evaluate import compare_values, eval_calc
from .parser import (CalcExpression, Diff, IfThen, Not, parse_calc_question, parse_value,
                     render_calc)
from .values import (UNITS, CalcValue, Date, Number, Text, add_months, days_between,
                     format_decimal, months_between, years_between)


def calc_answer(question: str) -> str:
    """Parse and evaluate one calculator question."""
    return eval_calc(parse_calc_question(question))


__all__ = [
    "CalcExpression", "CalcValue", "Date", "Diff", "IfThen", "Not", "Number", "Text", "UNITS",
    "add_months", "answers_match", "calc_answer", "compare_values", "days_between",
    "enumerate_calc_questions", "eval_calc", "format_decimal", "months_between",
    "parse_calc_question", "parse_value", "render_calc", "years_between",
]
