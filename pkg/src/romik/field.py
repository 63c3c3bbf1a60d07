"""Exact arithmetic in Q and in real quadratic fields Q(sqrt D).

Elements are immutable and hashable.  A value whose irrational part is zero
is always stored with ``d == 0``, so two equal numbers compare and hash the
same regardless of how they were produced.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import IncompatibleFieldsError, RomikError, SearchLimitError

__all__ = [
    "QFE",
    "FundamentalUnit",
    "as_qfe",
    "squarefree_part",
    "is_squarefree",
    "fundamental_unit",
    "qfe_to_json",
    "qfe_from_json",
    "parse_qfe",
]

DEFAULT_UNIT_SEARCH_CAP = 10**6


def squarefree_part(n: int) -> tuple[int, int]:
    """Split ``n`` as ``D * f**2`` with ``D`` squarefree.  Returns ``(D, f)``."""
    if n < 1:
        raise RomikError(f"squarefree_part needs a positive integer, got {n}")
    d, f = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            f *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return d * n, f


def is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_part(n)[1] == 1


class QFE:
    """An element ``a + b*sqrt(d)`` of Q(sqrt d).

    ``d`` is a squarefree integer > 1, or 0 for the rational subfield.
    Python ints and Fractions mix freely with QFE operands.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if b and d:
            if d < 0:
                raise RomikError("only real quadratic fields are supported")
            if d == 1:
                a, b, d = a + b, Fraction(0), 0
            elif not is_squarefree(d):
                raise RomikError(f"d = {d} is not squarefree")
        elif b:
            raise RomikError("nonzero irrational part needs d > 1")
        if not b:
            d = 0
        self.a = a
        self.b = b
        self.d = d

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> QFE:
        obj = object.__new__(cls)
        if not b:
            d = 0
        obj.a = a
        obj.b = b
        obj.d = d
        return obj

    @classmethod
    def sqrt(cls, n) -> QFE:
        """Exact square root of a non-negative rational ``n``."""
        n = Fraction(n)
        if n < 0:
            raise RomikError("square root of a negative number")
        if n == 0:
            return cls._raw(Fraction(0), Fraction(0), 0)
        # sqrt(p/q) = sqrt(p*q)/q
        d, f = squarefree_part(n.numerator * n.denominator)
        coef = Fraction(f, n.denominator)
        if d == 1:
            return cls._raw(coef, Fraction(0), 0)
        return cls._raw(Fraction(0), coef, d)

    # -- structure -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.d == 0

    def conj(self) -> QFE:
        if not self.b:
            return self
        return QFE._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a

    def sign(self) -> int:
        a, b = self.a, self.b
        if not b:
            return (a > 0) - (a < 0)
        if not a:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: the larger of a**2 and b**2*d wins
        lhs, rhs = a * a, b * b * self.d
        if a > 0:
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __abs__(self) -> QFE:
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    # -- arithmetic ----------------------------------------------------

    def _common(self, other):
        if isinstance(other, QFE):
            if self.d != other.d and self.d and other.d:
                raise IncompatibleFieldsError(
                    f"cannot combine elements of Q(sqrt {self.d}) and Q(sqrt {other.d})"
                )
            return other.a, other.b, self.d or other.d
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0), self.d
        return None

    def __add__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        return QFE._raw(self.a + c[0], self.b + c[1], c[2])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        return QFE._raw(self.a - c[0], self.b - c[1], c[2])

    def __rsub__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        return QFE._raw(c[0] - self.a, c[1] - self.b, c[2])

    def __neg__(self) -> QFE:
        return QFE._raw(-self.a, -self.b, self.d)

    def __pos__(self) -> QFE:
        return self

    def __mul__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        a2, b2, d = c
        a1, b1 = self.a, self.b
        if not b2:
            return QFE._raw(a1 * a2, b1 * a2, d)
        if not b1:
            return QFE._raw(a1 * a2, a1 * b2, d)
        return QFE._raw(a1 * a2 + b1 * b2 * d, a1 * b2 + a2 * b1, d)

    __rmul__ = __mul__

    def inverse(self) -> QFE:
        if not self:
            raise ZeroDivisionError("division by zero in Q(sqrt D)")
        if not self.b:
            return QFE._raw(1 / self.a, Fraction(0), 0)
        n = self.norm()
        return QFE._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QFE):
            self._common(other)
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("division by zero in Q(sqrt D)")
            return QFE._raw(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int) -> QFE:
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = QFE._raw(Fraction(1), Fraction(0), 0)
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QFE):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Rational)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    # -- conversion ----------------------------------------------------

    def as_fraction(self) -> Fraction:
        if self.b:
            raise RomikError(f"{self} is irrational")
        return self.a

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QFE({str(self)!r})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        b = self.b
        if b == 1:
            irr = f"√{self.d}"
        elif b == -1:
            irr = f"-√{self.d}"
        else:
            irr = f"{b}√{self.d}"
        if not self.a:
            return irr
        if irr.startswith("-"):
            return f"{self.a}{irr}"
        return f"{self.a}+{irr}"


def as_qfe(x) -> QFE:
    if isinstance(x, QFE):
        return x
    if isinstance(x, str):
        return parse_qfe(x)
    return QFE._raw(Fraction(x), Fraction(0), 0)


@dataclass(frozen=True)
class FundamentalUnit:
    value: QFE
    d: int


def fundamental_unit(d: int, max_iter: int = DEFAULT_UNIT_SEARCH_CAP) -> FundamentalUnit:
    """Smallest unit > 1 of the ring of integers of Q(sqrt d).

    Searches ``x**2 - d*y**2 = -4`` then ``+4`` for y = 1, 2, ...; the
    unit is ``(x + y*sqrt d)/2``.  When d is not 1 mod 4 the ring of
    integers is Z[sqrt d], so only even x, y are admissible.
    """
    if d < 2 or not is_squarefree(d):
        raise RomikError(f"d = {d} must be a squarefree integer > 1")
    half_ok = d % 4 == 1
    for y in range(1, max_iter + 1):
        if not half_ok and y % 2:
            continue
        for rhs in (-4, 4):
            x2 = d * y * y + rhs
            if x2 <= 0:
                continue
            x = math.isqrt(x2)
            if x * x != x2 or (not half_ok and x % 2):
                continue
            # x, y same parity is automatic from x**2 = d*y**2 +- 4 with d odd
            return FundamentalUnit(QFE(Fraction(x, 2), Fraction(y, 2), d), d)
    raise SearchLimitError(f"no unit found for d = {d} with y <= {max_iter}")


# -- text and JSON ------------------------------------------------------

_TERM = re.compile(
    r"""
    (?P<sign>[+-]?)
    (?:
        (?P<coef>\d+(?:/\d+)?)?\*?
        (?:√|sqrt\(?)(?P<d>\d+)\)?
        (?:/(?P<den>\d+))?
      |
        (?P<rat>\d+(?:/\d+)?)
    )
    """,
    re.VERBOSE,
)


def parse_qfe(text: str) -> QFE:
    """Parse strings like ``3/5``, ``1/2+1/2√3``, ``√3/2``, ``3-2*sqrt(2)``."""
    s = text.replace(" ", "")
    if not s:
        raise RomikError("empty number")
    pos = 0
    total = QFE()
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (pos and not m.group("sign")):
            raise RomikError(f"cannot parse number {text!r}")
        neg = m.group("sign") == "-"
        if m.group("rat") is not None:
            term = QFE(Fraction(m.group("rat")))
        else:
            coef = Fraction(m.group("coef") or 1)
            if m.group("den"):
                coef /= int(m.group("den"))
            term = QFE.sqrt(int(m.group("d"))) * coef
        total = total - term if neg else total + term
        pos = m.end()
    return total


def qfe_to_json(x) -> dict:
    x = as_qfe(x)
    return {"a": str(x.a), "b": str(x.b), "d": x.d}


def qfe_from_json(obj: dict) -> QFE:
    return QFE(Fraction(obj["a"]), Fraction(obj.get("b", "0")), int(obj.get("d", 0)))
