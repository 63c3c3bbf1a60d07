"""The Romik map on the closed quarter circle and its digit expansions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import OutsideQuarterCircleError, RomikError
from .field import QFE
from .quadspace import CirclePoint

__all__ = [
    "Tail",
    "RationalExpansion",
    "DigitStream",
    "FIXED_ONE",
    "FIXED_THREE",
    "digit",
    "digit_all",
    "t_map",
    "iter_digits",
    "expand_stream",
    "expand_rational",
    "expand_rational_both",
]

THREE_FIFTHS = Fraction(3, 5)
FOUR_FIFTHS = Fraction(4, 5)

FIXED_ONE = CirclePoint(1, 0)
FIXED_THREE = CirclePoint(0, 1)


class Tail(enum.Enum):
    ONES = 1
    THREES = 3

    @property
    def digit(self) -> int:
        return self.value


@dataclass(frozen=True)
class RationalExpansion:
    """A finite digit prefix followed by ``1`` or ``3`` repeated forever."""

    prefix: tuple
    tail: Tail

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))

    def digits(self, n: int) -> list[int]:
        out = list(self.prefix[:n])
        out.extend([self.tail.digit] * (n - len(out)))
        return out

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "tail": self.tail.name}

    def __str__(self):
        body = ",".join(str(d) for d in self.prefix)
        tail = f"{self.tail.digit}^inf"
        return f"[{body},{tail}]" if body else f"[{tail}]"


def _check_quarter(p: CirclePoint) -> None:
    if not p.in_quarter():
        raise OutsideQuarterCircleError(f"{p} is not on the closed quarter circle")


def digit_all(p: CirclePoint) -> frozenset:
    """Every valid digit of ``p``; two digits at ``(4/5, 3/5)`` and ``(3/5, 4/5)``."""
    _check_quarter(p)
    lo = p.x.cmp(THREE_FIFTHS)
    hi = p.x.cmp(FOUR_FIFTHS)
    if hi > 0:
        return frozenset({1})
    if hi == 0:
        return frozenset({1, 2})
    if lo > 0:
        return frozenset({2})
    if lo == 0:
        return frozenset({2, 3})
    return frozenset({3})


def digit(p: CirclePoint) -> int:
    """Canonical digit: the smaller one at a boundary point."""
    return min(digit_all(p))


def t_map(p: CirclePoint) -> CirclePoint:
    _check_quarter(p)
    x, y = p.x, p.y
    den = 3 - 2 * x - 2 * y
    if den.sign() <= 0:
        raise RomikError(f"denominator 3 - 2x - 2y vanished at {p}")
    return CirclePoint(abs(2 - x - 2 * y) / den, abs(2 - 2 * x - y) / den)


def iter_digits(p: CirclePoint) -> Iterator[int]:
    """Endless canonical digit stream of ``p``; bound it with ``islice``."""
    while True:
        yield digit(p)
        p = t_map(p)


def expand_stream(p: CirclePoint, n: int) -> list[int]:
    _check_quarter(p)
    out = []
    for _ in range(n):
        out.append(digit(p))
        p = t_map(p)
    return out


@dataclass(frozen=True)
class DigitStream:
    """A point together with the digits emitted so far.

    ``extend`` returns a new stream; the original is untouched.
    """

    point: CirclePoint
    emitted: tuple = ()
    current: CirclePoint | None = field(default=None, compare=False)

    def extend(self, n: int) -> DigitStream:
        p = self.current if self.current is not None else self.point
        out = list(self.emitted)
        for _ in range(n):
            out.append(digit(p))
            p = t_map(p)
        return DigitStream(self.point, tuple(out), p)


def expand_rational(p: CirclePoint) -> RationalExpansion:
    """Canonical expansion of a rational point.

    Each step replaces the point by its Berggren parent, so the hypotenuse
    of the reduced triple strictly drops and the loop ends at ``(1, 0)``
    or ``(0, 1)``.
    """
    if not p.is_rational:
        raise RomikError(f"{p} is not a rational point")
    _check_quarter(p)
    prefix = []
    while True:
        if p == FIXED_ONE:
            return RationalExpansion(prefix, Tail.ONES)
        if p == FIXED_THREE:
            return RationalExpansion(prefix, Tail.THREES)
        prefix.append(digit(p))
        p = t_map(p)


def expand_rational_both(p: CirclePoint) -> tuple[RationalExpansion, RationalExpansion]:
    """Both expansions of a rational point other than the two fixed points.

    The first ends ``2, 1^inf`` or ``2, 3^inf``; the second swaps that 2 for
    the other digit valid at the boundary point reached just before the tail.
    """
    if p in (FIXED_ONE, FIXED_THREE):
        raise RomikError(f"{p} is a fixed point and has a unique expansion")
    canon = expand_rational(p)
    head, last = canon.prefix[:-1], canon.prefix[-1]
    if canon.tail is Tail.ONES:
        # last boundary point is (3/5, 4/5): digits 2 and 3
        assert last == 2
        return canon, RationalExpansion(head + (3,), Tail.ONES)
    # last boundary point is (4/5, 3/5): digits 1 and 2
    assert last == 1
    return RationalExpansion(head + (2,), Tail.THREES), canon
