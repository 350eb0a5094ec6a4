"""Parser for the calculator question language.

Grammar::

    question := diff "(" operand "," operand ["," unit] ")"
              | not "(" number ")"
              | if_then "(" operand cmp operand "," text "," text ")"
    cmp      := "<" | ">" | "≠" | "!="
    unit     := days | months | years

Operands are read as dates when they fit the date grammar, otherwise as
numbers. Several readings can apply to one operand ("May 3, 1999, 2000" has
a comma inside the date), so operand readers yield every candidate and the
caller backtracks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from ..errors import ParseError
from .values import CalcValue, Date, Number, Text, month_number, parse_decimal

_MONTH = (r"(?:jan(?:uary|\.)?|feb(?:ruary|\.)?|mar(?:ch|\.)?|apr(?:il|\.)?|may|june?|july?"
          r"|aug(?:ust|\.)?|sep(?:t(?:ember|\.)?|\.)?|oct(?:ober|\.)?|nov(?:ember|\.)?|dec(?:ember|\.)?)")
_ORD = r"(?:st|nd|rd|th)?"

# ordered longest-form first
DATE_PATTERNS = [
    ("dmy", re.compile(rf"(\d{{1,2}}){_ORD}\s+({_MONTH})\s*,?\s+(\d{{1,4}})(?!\d)", re.I)),
    ("mdy", re.compile(rf"({_MONTH})\s+(\d{{1,2}}){_ORD}\s*,?\s+(\d{{1,4}})(?!\d)", re.I)),
    ("my", re.compile(rf"({_MONTH})\s*,?\s+(\d{{4}})(?!\d)", re.I)),
    ("y", re.compile(r"([1-9]\d{3})(?!\d)(?!\.\d)(?!\s*%)")),
]
NUMBER_PATTERN = re.compile(r"[-+]?(?:\d{1,3}(?:,\d{3})+|\d+|(?=\.\d))(?:\.\d+)?(?:\s*%)?")
_PLAIN_NUMBER = re.compile(r"[-+]?\d+(?:\.\d+)?(?:\s*%)?")
DATE_RANGE = re.compile(r"\d{3,4}\s*[-–]\s*\d{2,4}(?!\d)")
_FUNC = re.compile(r"\s*([A-Za-z_]\w*)\s*\(")
_UNIT = re.compile(r"(day|month|year)s?\b", re.I)
_CMP = re.compile(r"<|>|≠|!=")
_OPERAND_END = re.compile(r"\s*(?:,|\)|<|>|≠|!=|$)")


@dataclass(frozen=True)
class Diff:
    x: CalcValue
    y: CalcValue
    unit: Optional[str] = None


@dataclass(frozen=True)
class Not:
    x: Number


@dataclass(frozen=True)
class IfThen:
    x: CalcValue
    op: str
    y: CalcValue
    then: Text
    else_: Text


CalcExpression = Union[Diff, Not, IfThen]


def date_from_match(kind: str, m: re.Match) -> Date:
    if kind == "dmy":
        return Date(int(m.group(3)), month_number(m.group(2)), int(m.group(1)))
    if kind == "mdy":
        return Date(int(m.group(3)), month_number(m.group(1)), int(m.group(2)))
    if kind == "my":
        return Date(int(m.group(2)), month_number(m.group(1)), 1, precision="month")
    return Date(int(m.group(1)), precision="year")


def number_from_text(text: str) -> Number:
    return Number(parse_decimal(text), percent=text.rstrip().endswith("%"))


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.err_pos = -1
        self.err_reason = "malformed question"

    def fail(self, pos: int, reason: str) -> None:
        if pos > self.err_pos:
            self.err_pos, self.err_reason = pos, reason

    def ws(self, pos: int) -> int:
        while pos < len(self.s) and self.s[pos].isspace():
            pos += 1
        return pos

    def expect(self, pos: int, lit: str) -> Optional[int]:
        pos = self.ws(pos)
        if self.s.startswith(lit, pos):
            return pos + len(lit)
        self.fail(pos, f"expected {lit!r}")
        return None

    def at_end(self, pos: int) -> bool:
        pos = self.ws(pos)
        if pos == len(self.s):
            return True
        self.fail(pos, "unexpected trailing text")
        return False

    def operand(self, pos: int, dates: bool = True) -> Iterator[tuple[CalcValue, int]]:
        pos = self.ws(pos)
        if DATE_RANGE.match(self.s, pos):
            raise ParseError("unsupported operand format (date range)", pos, self.s)
        found = False
        if dates:
            for kind, pat in DATE_PATTERNS:
                m = pat.match(self.s, pos)
                if m and _OPERAND_END.match(self.s, m.end()):
                    try:
                        value = date_from_match(kind, m)
                    except ValueError:
                        self.fail(pos, "invalid calendar date")
                        continue
                    found = True
                    yield value, m.end()
        m = NUMBER_PATTERN.match(self.s, pos)
        if m and m.group() and _OPERAND_END.match(self.s, m.end()):
            found = True
            yield number_from_text(m.group()), m.end()
        if m and m.group() and "," in m.group():
            # "100,200" may also be two operands
            m2 = _PLAIN_NUMBER.match(self.s, pos)
            if m2 and _OPERAND_END.match(self.s, m2.end()):
                found = True
                yield number_from_text(m2.group()), m2.end()
        if not found:
            self.fail(pos, "unsupported operand format")

    def parse(self) -> CalcExpression:
        m = _FUNC.match(self.s)
        if not m:
            raise ParseError("expected function call", self.ws(0), self.s)
        name = m.group(1).lower()
        pos = m.end()
        if name == "diff":
            result = self.diff(pos)
        elif name == "not":
            result = self.not_(pos)
        elif name == "if_then":
            result = self.if_then(pos)
        else:
            raise ParseError(f"unknown function {name!r}", m.start(1), self.s)
        if result is None:
            raise ParseError(self.err_reason, max(self.err_pos, 0), self.s)
        return result

    def diff(self, pos: int) -> Optional[Diff]:
        for x, p1 in self.operand(pos):
            p2 = self.expect(p1, ",")
            if p2 is None:
                continue
            for y, p3 in self.operand(p2):
                p4 = self.expect(p3, ")")
                if p4 is not None and self.at_end(p4):
                    return Diff(x, y)
                p4 = self.expect(p3, ",")
                if p4 is None:
                    continue
                p4 = self.ws(p4)
                um = _UNIT.match(self.s, p4)
                if not um:
                    self.fail(p4, "expected unit (days, months or years)")
                    continue
                p5 = self.expect(um.end(), ")")
                if p5 is not None and self.at_end(p5):
                    return Diff(x, y, um.group(1).lower() + "s")
        return None

    def not_(self, pos: int) -> Optional[Not]:
        for x, p1 in self.operand(pos, dates=False):
            p2 = self.expect(p1, ")")
            if p2 is not None and self.at_end(p2):
                return Not(x)
        return None

    def if_then(self, pos: int) -> Optional[IfThen]:
        for x, p1 in self.operand(pos):
            p1 = self.ws(p1)
            cm = _CMP.match(self.s, p1)
            if not cm:
                self.fail(p1, "expected comparison operator (<, >, ≠)")
                continue
            op = "≠" if cm.group() == "!=" else cm.group()
            for y, p2 in self.operand(cm.end()):
                p3 = self.expect(p2, ",")
                if p3 is None:
                    continue
                rest = self.s[p3:]
                close = rest.rstrip()
                if not close.endswith(")"):
                    self.fail(len(self.s), "expected ')'")
                    continue
                body = close[:-1]
                comma = body.find(",")
                if comma < 0:
                    self.fail(p3, "if_then needs two branch values")
                    continue
                then, else_ = body[:comma].strip(), body[comma + 1:].strip()
                if not then or not else_:
                    self.fail(p3, "empty if_then branch")
                    continue
                return IfThen(x, op, y, Text(then), Text(else_))
        return None


def parse_calc_question(text: str) -> CalcExpression:
    """Parse ``diff(..)``, ``not(..)`` or ``if_then(..)`` into an expression."""
    return _Parser(text).parse()


def parse_value(text: str) -> CalcValue:
    """Read one standalone operand (date, number, or text as a last resort)."""
    s = text.strip()
    for kind, pat in DATE_PATTERNS:
        m = pat.fullmatch(s)
        if m:
            try:
                return date_from_match(kind, m)
            except ValueError:
                break
    if NUMBER_PATTERN.fullmatch(s) and parse_decimal(s) is not None:
        return number_from_text(s)
    return Text(s)


def render_calc(expr: CalcExpression) -> str:
    if isinstance(expr, Diff):
        args = [expr.x.render(), expr.y.render()] + ([expr.unit] if expr.unit else [])
        return f"diff({', '.join(args)})"
    if isinstance(expr, Not):
        return f"not({expr.x.render()})"
    return (f"if_then({expr.x.render()} {expr.op} {expr.y.render()}, "
            f"{expr.then.render()}, {expr.else_.render()})")


