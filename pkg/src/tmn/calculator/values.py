"""Calculator operand values and calendar arithmetic."""

from __future__ import annotations

import calendar
import datetime as _dt
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Optional, Union

MONTHS = ("january", "february", "march", "april", "may", "june", "july",
          "august", "september", "october", "november", "december")
MONTH_ABBR = {m[:3]: i + 1 for i, m in enumerate(MONTHS)}
MONTH_ABBR["sept"] = 9

UNITS = ("days", "months", "years")


def month_number(name: str) -> Optional[int]:
    name = name.lower().rstrip(".")
    if name in MONTHS:
        return MONTHS.index(name) + 1
    return MONTH_ABBR.get(name)


def format_decimal(value: Decimal) -> str:
    """Minimal decimal rendering: ``87.4`` not ``87.40``, ``100`` not ``1E+2``."""
    if value == 0:
        return "0"
    return format(value.normalize(), "f")


def parse_decimal(text: str) -> Optional[Decimal]:
    t = text.strip().replace(",", "").rstrip("%").strip()
    if not t:
        return None
    try:
        d = Decimal(t)
    except InvalidOperation:
        return None
    return d if d.is_finite() else None


@dataclass(frozen=True)
class Number:
    value: Decimal
    percent: bool = False

    def __post_init__(self):
        if not isinstance(self.value, Decimal):
            object.__setattr__(self, "value", Decimal(str(self.value)))

    def render(self) -> str:
        return format_decimal(self.value)

    def is_year_like(self) -> bool:
        return self.value == self.value.to_integral_value() and 1 <= self.value <= 9999


@dataclass(frozen=True)
class Date:
    """A proleptic-Gregorian date.

    ``precision`` records imputation: ``"month"`` means the day defaulted to 1,
    ``"year"`` means both month and day defaulted to January 1st.
    """

    year: int
    month: int = 1
    day: int = 1
    precision: str = "day"

    def __post_init__(self):
        if self.precision not in ("day", "month", "year"):
            raise ValueError(f"bad precision {self.precision!r}")
        if not 1 <= self.year <= 9999 or not 1 <= self.month <= 12:
            raise ValueError(f"invalid date {self.year}-{self.month}-{self.day}")
        if not 1 <= self.day <= calendar.monthrange(self.year, self.month)[1]:
            raise ValueError(f"invalid date {self.year}-{self.month}-{self.day}")

    @property
    def is_bare_year(self) -> bool:
        return self.precision == "year"

    def to_date(self) -> _dt.date:
        return _dt.date(self.year, self.month, self.day)

    def ordinal(self) -> int:
        return self.to_date().toordinal()

    def render(self) -> str:
        if self.precision == "year":
            return str(self.year)
        month = MONTHS[self.month - 1].capitalize()
        if self.precision == "month":
            return f"{month} {self.year}"
        return f"{self.day} {month} {self.year}"


@dataclass(frozen=True)
class Text:
    text: str

    def render(self) -> str:
        return self.text


CalcValue = Union[Number, Date, Text]


def render_value(v: CalcValue) -> str:
    return v.render()


def add_months(d: _dt.date, k: int) -> _dt.date:
    """Shift by ``k`` months, clamping the day to the target month's length."""
    idx = d.year * 12 + (d.month - 1) + k
    year, month = divmod(idx, 12)
    month += 1
    day = min(d.day, calendar.monthrange(year, month)[1])
    return _dt.date(year, month, day)


def days_between(a: _dt.date, b: _dt.date) -> int:
    return abs(b.toordinal() - a.toordinal())


def months_between(a: _dt.date, b: _dt.date) -> int:
    """Whole completed months between two dates (order-insensitive).

    A month counts once its (clamped) anniversary day has been reached, so
    31 January -> 28 February is one month in a common year.
    """
    if b < a:
        a, b = b, a
    k = (b.year - a.year) * 12 + (b.month - a.month)
    if k > 0 and add_months(a, k) > b:
        k -= 1
    return k


def years_between(a: _dt.date, b: _dt.date) -> int:
    return months_between(a, b) // 12
