"""Small shared helpers: exact rationals, search budgets, bit tricks."""

from __future__ import annotations

import os
import time
from fractions import Fraction
from typing import Iterator, Union

Rational = Union[int, float, str, Fraction]

BUDGET_ENV = "LINFOREST_BUDGET_MS"


class SearchBudgetExceeded(RuntimeError):
    """A search ran out of its time budget before reaching a verdict.

    Distinct from a negative answer: the solver does not know.
    """


def as_fraction(x: Rational) -> Fraction:
    """Convert user input to an exact rational.

    Floats go through their decimal repr so that ``0.1`` means 1/10.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


class Budget:
    """Wall-clock deadline shared by nested searches.

    ``Budget(None)`` never expires. The check is amortised: the clock is
    only read every ``stride`` calls to :meth:`tick`.
    """

    __slots__ = ("ms", "deadline", "_count", "stride")

    def __init__(self, ms: float | None = None, stride: int = 256):
        self.ms = ms
        self.deadline = None if ms is None else time.monotonic() + ms / 1000.0
        self._count = 0
        self.stride = stride

    @classmethod
    def from_env(cls, default_ms: float | None = None) -> "Budget":
        raw = os.environ.get(BUDGET_ENV)
        if raw:
            return cls(float(raw))
        return cls(default_ms)

    def tick(self) -> None:
        if self.deadline is None:
            return
        self._count += 1
        if self._count >= self.stride:
            self._count = 0
            if time.monotonic() > self.deadline:
                raise SearchBudgetExceeded(f"search budget of {self.ms} ms exhausted")

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m
