"""Exhaustive calculator question generation filtered by the expected answer."""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from ..errors import CalcError
from ..textscore import normalize_answer
from .evaluate import compare_values, eval_calc
from .parser import Diff, IfThen, Not, render_calc
from .values import UNITS, CalcValue, Date, Number, Text, parse_decimal

OPS = ("diff", "not", "if_then")
COMPARATORS = ("<", ">", "≠")


def answers_match(produced: str, expected: str) -> bool:
    """Numeric answers compare by value, everything else by normalized text."""
    a, b = parse_decimal(produced), parse_decimal(expected)
    if a is not None and b is not None:
        return a == b
    return normalize_answer(produced) == normalize_answer(expected)


def _unique(values: Iterable) -> list[CalcValue]:
    # a bare year and the same integer as a number are one operand
    out, rendered = [], set()
    for v in values:
        if not isinstance(v, (Number, Date, Text)):
            v = v.value
        if isinstance(v, Text) or v.render() in rendered:
            continue
        rendered.add(v.render())
        out.append(v)
    return out


def _diff_units(x: CalcValue, y: CalcValue, unit_hint: Optional[str]) -> list[Optional[str]]:
    if isinstance(x, Date) and isinstance(y, Date):
        if x.is_bare_year and y.is_bare_year:
            return [None] + ([unit_hint] if unit_hint else [])
        return [unit_hint] if unit_hint else list(UNITS)
    return [None]


def candidate_expressions(values: Sequence, entity_pair: Optional[tuple[str, str]] = None,
                          unit_hint: Optional[str] = None, ops: Iterable[str] = OPS):
    ops = set(ops)
    vals = _unique(values)
    if "diff" in ops:
        for x, y in combinations(vals, 2):
            try:
                order = compare_values(x, y)
            except CalcError:
                continue
            if order < 0:
                x, y = y, x
            for unit in _diff_units(x, y, unit_hint):
                yield Diff(x, y, unit)
    if "not" in ops:
        for x in vals:
            if isinstance(x, Number) and 0 <= x.value <= 100:
                yield Not(x)
    if "if_then" in ops and entity_pair:
        e1, e2 = (Text(e) for e in entity_pair)
        for x, y in permutations(vals, 2):
            try:
                compare_values(x, y)
            except CalcError:
                continue
            for op in COMPARATORS:
                yield IfThen(x, op, y, e1, e2)


def enumerate_calc_questions(values: Sequence, entity_pair: Optional[tuple[str, str]] = None,
                             target_answer: str = "", unit_hint: Optional[str] = None,
                             ops: Iterable[str] = OPS) -> list[str]:
    """All calculator questions over ``values`` whose answer is ``target_answer``.

    ``values`` may hold calculator values or value mentions (anything with a
    ``.value`` attribute).
    """
    out: dict[str, None] = {}
    for expr in candidate_expressions(values, entity_pair, unit_hint, ops):
        try:
            result = eval_calc(expr)
        except CalcError:
            continue
        if answers_match(result, target_answer):
            out.setdefault(render_calc(expr))
    return list(out)
