from collections.abc import Iterable
from fractions import Fraction

from app.config import DEFAULT_TOLERANCE

# Точные значения хранятся как Fraction, результаты симуляции как float
Value = Fraction | float

ZERO = Fraction(0)
ONE = Fraction(1)


def all_exact(values: Iterable[Value]) -> bool:
    return all(isinstance(value, Fraction) for value in values)


def close(a: Value, b: Value, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """
    Сравнение значений: точное для рациональных, с допуском для вещественных.
    """
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= tolerance


def at_most(a: Value, b: Value, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a <= b
    return float(a) <= float(b) + tolerance


def total(values: Iterable[Value]) -> Value:
    """
    Сумма, сохраняющая точность, если все слагаемые рациональные.
    """
    items = list(values)
    if all_exact(items):
        return sum(items, ZERO)
    return float(sum(float(item) for item in items))


def maximum(values: Iterable[Value]) -> Value:
    items = list(values)
    if not items:
        return ZERO
    return max(items)


def zero_like(values: Iterable[Value]) -> Value:
    return ZERO if all_exact(values) else 0.0


def to_value(raw: int | float | str | Fraction) -> Value:
    """
    Целые числа и строки вида "1/3" становятся точными, вещественные остаются float.
    """
    if isinstance(raw, bool):
        raise TypeError("boolean is not a number")
    if isinstance(raw, (int, Fraction)):
        return Fraction(raw)
    if isinstance(raw, str):
        return Fraction(raw.strip())
    return float(raw)
