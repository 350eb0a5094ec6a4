from __future__ import annotations

from decimal import Decimal
from typing import Union

from ..errors import CalcError, IncomparableOperands, UnitMismatch
from .parser import CalcExpression, Diff, IfThen, Not
from .values import (CalcValue, Date, Number, Text, days_between, format_decimal,
                     months_between, years_between)

HUNDRED = Decimal(100)


def coerce_pair(x: CalcValue, y: CalcValue) -> tuple[CalcValue, CalcValue]:
    """Bring two operands to a common kind (both Number or both Date).

    A bare year meeting a plain number is read as that number.
    """
    if isinstance(x, Text) or isinstance(y, Text):
        raise IncomparableOperands(f"cannot compare {x!r} and {y!r}")
    if type(x) is type(y):
        return x, y
    if isinstance(x, Date) and x.is_bare_year:
        return Number(Decimal(x.year)), y
    if isinstance(y, Date) and y.is_bare_year:
        return x, Number(Decimal(y.year))
    raise IncomparableOperands(f"cannot compare {x!r} and {y!r}")


def _as_number(x: CalcValue) -> Number:
    if isinstance(x, Number):
        return x
    if isinstance(x, Date) and x.is_bare_year:
        return Number(Decimal(x.year))
    raise IncomparableOperands(f"expected a number, got {x!r}")


def _diff(expr: Diff) -> str:
    x, y = coerce_pair(expr.x, expr.y)
    unit = expr.unit
    if isinstance(x, Number):
        if unit is None:
            return format_decimal(abs(x.value - y.value))
        if not (x.is_year_like() and y.is_year_like()):
            raise UnitMismatch(f"unit {unit!r} given for plain numbers")
        x, y = Date(int(x.value), precision="year"), Date(int(y.value), precision="year")
    if unit is None:
        if x.is_bare_year and y.is_bare_year:
            return str(abs(x.year - y.year))
        unit = "days"
    a, b = x.to_date(), y.to_date()
    if unit == "days":
        return str(days_between(a, b))
    if unit == "months":
        return str(months_between(a, b))
    if unit == "years":
        return str(years_between(a, b))
    raise UnitMismatch(f"unknown unit {unit!r}")


def _key(v: Union[Number, Date]):
    return v.value if isinstance(v, Number) else v.ordinal()


def _if_then(expr: IfThen) -> str:
    x, y = coerce_pair(expr.x, expr.y)
    kx, ky = _key(x), _key(y)
    if expr.op == "<":
        holds = kx < ky
    elif expr.op == ">":
        holds = kx > ky
    elif expr.op in ("≠", "!="):
        holds = kx != ky
    else:
        raise CalcError(f"unsupported comparison {expr.op!r}")
    return expr.then.text if holds else expr.else_.text


def eval_calc(expr: CalcExpression) -> str:
    if isinstance(expr, Diff):
        return _diff(expr)
    if isinstance(expr, Not):
        return format_decimal(HUNDRED - _as_number(expr.x).value)
    if isinstance(expr, IfThen):
        return _if_then(expr)
    raise TypeError(f"not a calculator expression: {expr!r}")


def compare_values(x: CalcValue, y: CalcValue) -> int:
    """-1/0/1 ordering of two comparable operands."""
    a, b = coerce_pair(x, y)
    ka, kb = _key(a), _key(b)
    return (ka > kb) - (ka < kb)
