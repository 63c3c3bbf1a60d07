"""The Pythagorean quadratic space ``x1**2 + x2**2 - x3**2`` over Q(sqrt D).

Vectors are 3-tuples and matrices are 3-tuples of row 3-tuples.  Entries may
be Python ints, Fractions or :class:`~romik.field.QFE`; every function here
only uses ``+``, ``-``, ``*`` (and ``/`` in :func:`reflect`) so integer
inputs stay integral and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .errors import NotOnCircleError, RomikError
from .field import QFE, as_qfe, qfe_from_json, qfe_to_json

__all__ = [
    "Vec3",
    "Mat3",
    "CirclePoint",
    "M1",
    "M2",
    "M3",
    "U1",
    "U2",
    "U3",
    "H",
    "IDENTITY",
    "MATRICES",
    "mat_const",
    "q_form",
    "bilinear",
    "triple_product",
    "reflect",
    "reflection_matrix",
    "matvec",
    "matmul",
    "transpose",
    "det",
    "mat_word",
    "is_q_orthogonal",
    "q_cross",
    "vconj",
    "vscale",
    "vneg",
    "project",
    "act",
    "vec_to_json",
    "vec_from_json",
    "mat_to_json",
    "mat_from_json",
]

Vec3 = tuple
Mat3 = tuple

M1 = ((-1, 2, 2), (-2, 1, 2), (-2, 2, 3))
M2 = ((1, 2, 2), (2, 1, 2), (2, 2, 3))
M3 = ((1, -2, 2), (2, -1, 2), (2, -2, 3))
U1 = ((1, 0, 0), (0, -1, 0), (0, 0, 1))
U2 = ((-1, 0, 0), (0, -1, 0), (0, 0, 1))
U3 = ((-1, 0, 0), (0, 1, 0), (0, 0, 1))
H = ((-1, -2, 2), (-2, -1, 2), (-2, -2, 3))
IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
FORM_MATRIX = ((1, 0, 0), (0, 1, 0), (0, 0, -1))

MATRICES = {"M1": M1, "M2": M2, "M3": M3, "U1": U1, "U2": U2, "U3": U3, "H": H}
BERGGREN = {1: M1, 2: M2, 3: M3}
UNFOLD = {1: U1, 2: U2, 3: U3}


def mat_const(name: str) -> Mat3:
    try:
        return MATRICES[name.upper()]
    except KeyError:
        raise RomikError(f"unknown matrix {name!r}; expected one of {sorted(MATRICES)}") from None


def q_form(v: Vec3):
    return v[0] * v[0] + v[1] * v[1] - v[2] * v[2]


def bilinear(u: Vec3, v: Vec3):
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2]


def triple_product(u: Vec3, v: Vec3, w: Vec3):
    """Euclidean ``(u x v) . w``."""
    return (
        (u[1] * v[2] - u[2] * v[1]) * w[0]
        + (u[2] * v[0] - u[0] * v[2]) * w[1]
        + (u[0] * v[1] - u[1] * v[0]) * w[2]
    )


def _divide(p, q):
    if isinstance(p, int) and isinstance(q, int):
        return Fraction(p, q)
    return p / q


def reflect(z: Vec3, x: Vec3) -> Vec3:
    """Reflection of ``x`` in the Q-orthogonal complement of ``z``."""
    qz = q_form(z)
    if not qz:
        raise RomikError("cannot reflect in a Q-null vector")
    k = 2 * _divide(bilinear(x, z), qz)
    return tuple(_norm(xi - k * zi) for xi, zi in zip(x, z))


def _norm(x):
    # collapse integral Fractions back to int so matrices stay comparable
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def reflection_matrix(z: Vec3) -> Mat3:
    cols = [reflect(z, e) for e in IDENTITY]
    return transpose(tuple(cols))


def transpose(m: Mat3) -> Mat3:
    return tuple(zip(*m))


def matvec(m: Mat3, v: Vec3) -> Vec3:
    return tuple(r[0] * v[0] + r[1] * v[1] + r[2] * v[2] for r in m)


def matmul(a: Mat3, b: Mat3) -> Mat3:
    cols = transpose(b)
    return tuple(tuple(r[0] * c[0] + r[1] * c[1] + r[2] * c[2] for c in cols) for r in a)


def det(m: Mat3):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def mat_word(word: Sequence[int]) -> Mat3:
    """The ordered product ``M_{d1} M_{d2} ... M_{dk}``."""
    if not word:
        raise RomikError("empty digit word")
    for d in word:
        if d not in BERGGREN:
            raise RomikError(f"digit {d!r} is not in {{1, 2, 3}}")
    return reduce(matmul, (BERGGREN[d] for d in word))


def is_q_orthogonal(m: Mat3) -> bool:
    return matmul(matmul(transpose(m), FORM_MATRIX), m) == FORM_MATRIX


def q_cross(v1: Vec3, v2: Vec3) -> Vec3:
    a1, b1, c1 = v1
    a2, b2, c2 = v2
    return (b1 * c2 - b2 * c1, a2 * c1 - a1 * c2, a2 * b1 - a1 * b2)


def vconj(v: Vec3) -> Vec3:
    return tuple(x.conj() if isinstance(x, QFE) else x for x in v)


def vscale(k, v: Vec3) -> Vec3:
    return tuple(k * x for x in v)


def vneg(v: Vec3) -> Vec3:
    return tuple(-x for x in v)


@dataclass(frozen=True)
class CirclePoint:
    """A point ``(x, y)`` with ``x**2 + y**2 == 1`` exactly."""

    x: QFE
    y: QFE

    def __post_init__(self):
        x, y = as_qfe(self.x), as_qfe(self.y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x * x + y * y != 1:
            raise NotOnCircleError(f"({x}, {y}) is not on the unit circle")

    @property
    def d(self) -> int:
        return self.x.d or self.y.d

    @property
    def is_rational(self) -> bool:
        return self.x.is_rational and self.y.is_rational

    def in_quarter(self) -> bool:
        return self.x.sign() >= 0 and self.y.sign() >= 0

    def conj(self) -> CirclePoint:
        return CirclePoint(self.x.conj(), self.y.conj())

    def lift(self) -> Vec3:
        return (self.x, self.y, QFE(1))

    def __iter__(self):
        yield self.x
        yield self.y

    def __str__(self):
        return f"({self.x}, {self.y})"


def project(v: Vec3) -> CirclePoint:
    x1, x2, x3 = (as_qfe(c) for c in v)
    if not x3:
        raise RomikError("cannot project a vector with vanishing third coordinate")
    if q_form((x1, x2, x3)):
        raise NotOnCircleError("only Q-null vectors project onto the circle")
    return CirclePoint(x1 / x3, x2 / x3)


def act(m: Mat3, p: CirclePoint) -> CirclePoint:
    return project(matvec(m, p.lift()))


def vec_to_json(v: Vec3) -> list:
    return [qfe_to_json(x) for x in v]


def vec_from_json(obj: list) -> Vec3:
    return tuple(qfe_from_json(x) for x in obj)


def mat_to_json(m: Mat3) -> list:
    return [vec_to_json(r) for r in m]


def mat_from_json(obj: list) -> Mat3:
    return tuple(vec_from_json(r) for r in obj)
