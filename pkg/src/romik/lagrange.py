"""Periodic expansions and quadratic points.

Covers the construction of purely periodic points from a digit word, exact
period detection for quadratic points, the conjugate-expansion check, the
``v x_Q v^sigma`` sequence used to bound orbits, and explorations of
Berggren graphs over a fixed real quadratic field.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .dynamics import digit, expand_rational, expand_stream, t_map
from .errors import DegenerateWordError, InvariantError, RomikError, SearchLimitError
from .field import QFE, FundamentalUnit, fundamental_unit, squarefree_part
from .quadspace import (
    BERGGREN,
    H,
    UNFOLD,
    CirclePoint,
    Vec3,
    det,
    mat_word,
    matmul,
    matvec,
    project,
    q_cross,
    q_form,
    vconj,
    vneg,
    vscale,
)

__all__ = [
    "PeriodicPointData",
    "ExpansionResult",
    "WSequence",
    "GaloisReport",
    "NkkCount",
    "TripleClass",
    "CircularRoot",
    "admissible_words",
    "primitive_root",
    "word_discriminant",
    "construct_periodic",
    "detect_period",
    "integralize",
    "w_sequence",
    "galois_check",
    "count_nkk",
    "normalize_class",
    "circular_root",
    "graph_children",
    "default_max_iter",
]

_INVERSE = {j: matmul(UNFOLD[j], H) for j in (1, 2, 3)}
GALOIS_SIGNS = {1: (1, -1), 2: (-1, -1), 3: (-1, 1)}


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvariantError(msg)


def default_max_iter() -> int:
    return int(os.environ.get("ROMIK_MAX_ITER", 10**6))


def _check_word(word) -> tuple:
    word = tuple(int(d) for d in word)
    if not word:
        raise RomikError("empty digit word")
    if any(d not in (1, 2, 3) for d in word):
        raise RomikError(f"digits must be 1, 2 or 3: {word}")
    return word


def is_admissible(word) -> bool:
    word = _check_word(word)
    return set(word) not in ({1}, {3})


def admissible_words(k: int):
    """All words of length ``k`` except ``1^k`` and ``3^k``, in lexicographic order."""
    for w in product((1, 2, 3), repeat=k):
        if set(w) not in ({1}, {3}):
            yield w


def primitive_root(word: Sequence[int]) -> tuple:
    """Shortest ``u`` with ``word == u * m``."""
    word = tuple(word)
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == word[:p] * (n // p):
            return word[:p]
    return word


def word_discriminant(word) -> int:
    """Discriminant ``(t - e)**2 - 4`` of the quadratic factor of the char. polynomial."""
    m = mat_word(_check_word(word))
    t = m[0][0] + m[1][1] + m[2][2]
    e = det(m)
    return (t - e) ** 2 - 4


# -- purely periodic points ----------------------------------------------


@dataclass(frozen=True)
class PeriodicPointData:
    word: tuple
    point: CirclePoint
    lambda1: QFE
    lambda3: int
    d: int
    matrix: tuple = field(repr=False, compare=False)

    @property
    def lambda2(self) -> QFE:
        return self.lambda1.conj()

    @property
    def v1(self) -> Vec3:
        return self.point.lift()

    @property
    def v2(self) -> Vec3:
        return vconj(self.v1)

    @property
    def v3(self) -> Vec3:
        return q_cross(self.v1, self.v2)

    def to_json(self) -> dict:
        from .field import qfe_to_json

        return {
            "word": list(self.word),
            "point": [qfe_to_json(self.point.x), qfe_to_json(self.point.y)],
            "point_text": [str(self.point.x), str(self.point.y)],
            "lambda1": qfe_to_json(self.lambda1),
            "lambda1_text": str(self.lambda1),
            "lambda3": self.lambda3,
            "d": self.d,
        }


def _kernel_point(a: tuple) -> tuple[QFE, QFE]:
    """Solve ``a @ (x, y, 1) == 0`` from the first pair of independent rows."""
    for i, j in ((0, 1), (0, 2), (1, 2)):
        ri, rj = a[i], a[j]
        den = ri[0] * rj[1] - ri[1] * rj[0]
        if den:
            x = (ri[1] * rj[2] - ri[2] * rj[1]) / den
            y = (ri[2] * rj[0] - ri[0] * rj[2]) / den
            return x, y
    raise InvariantError("eigenspace solve is singular")


def construct_periodic(word: Sequence[int]) -> PeriodicPointData:
    """The point whose expansion is ``word`` repeated forever.

    It is the projection of the eigenvector of ``M_{d1}...M_{dk}`` for the
    eigenvalue ``lambda1 > 1``, which is a root of the quadratic factor
    ``x**2 - (t - e) x + 1`` left after dividing out ``x - det``.
    """
    word = _check_word(word)
    if not is_admissible(word):
        raise DegenerateWordError(f"{word} gives a rational fixed point")
    m = mat_word(word)
    t = m[0][0] + m[1][1] + m[2][2]
    s = (
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1]
    )
    e = det(m)
    _require(e in (1, -1), f"det of {word} is {e}")
    p = t - e
    _require(s == 1 + e * p, f"char. polynomial of {word} has no root at det")
    disc = p * p - 4
    if disc <= 0:
        raise DegenerateWordError(f"{word}: discriminant {disc} is not positive")
    d, f = squarefree_part(disc)
    if d == 1:
        raise DegenerateWordError(f"{word}: discriminant {disc} is a perfect square")
    lam = QFE(Fraction(p, 2), Fraction(f, 2), d)

    shifted = tuple(
        tuple(QFE(m[i][j]) - (lam if i == j else 0) for j in range(3)) for i in range(3)
    )
    x, y = _kernel_point(shifted)
    point = CirclePoint(x, y)
    v = point.lift()

    _require(matvec(m, v) == vscale(lam, v), f"{word}: eigenvector check failed")
    _require(lam > 1, f"{word}: lambda1 = {lam} is not > 1")
    _require(lam * lam.conj() == 1, f"{word}: lambda1 is not a unit of norm 1")
    lam2 = lam.conj()
    _require(lam2 > 0 and lam2 < 1, f"{word}: conjugate eigenvalue outside (0, 1)")
    _require(x.sign() > 0 and y.sign() > 0, f"{word}: point not inside the quarter circle")
    _require(
        tuple(expand_stream(point, len(word))) == word,
        f"{word}: point is not in the cylinder set of the word",
    )
    v3 = q_cross(v, vconj(v))
    _require(matvec(m, v3) == vscale(e, v3), f"{word}: cross product is not a det-eigenvector")
    return PeriodicPointData(word, point, lam, e, d, m)


# -- period detection ----------------------------------------------------


@dataclass(frozen=True)
class ExpansionResult:
    preperiod: tuple
    period: tuple

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    def __str__(self):
        pre = ",".join(map(str, self.preperiod))
        per = ",".join(map(str, self.period))
        return f"[{pre + ',' if pre else ''}({per})^inf]"


def detect_period(p: CirclePoint, max_iter: int | None = None) -> ExpansionResult:
    """Minimal preperiod and primitive period of the expansion of ``p``.

    Visited points are kept in a dict keyed by their exact coordinates; the
    first repeat fixes both the preperiod length and the cycle length.  A
    rational point is answered from its terminating expansion.
    """
    if p.is_rational:
        r = expand_rational(p)
        return ExpansionResult(r.prefix, (r.tail.digit,))
    limit = default_max_iter() if max_iter is None else max_iter
    seen = {}
    digits = []
    for i in range(limit + 1):
        if p in seen:
            j = seen[p]
            return ExpansionResult(tuple(digits[:j]), tuple(digits[j:]))
        seen[p] = i
        digits.append(digit(p))
        p = t_map(p)
    raise SearchLimitError(f"no period found within {limit} iterations")


# -- integral representatives and the w-sequence ---------------------------


def integralize(p: CirclePoint) -> Vec3:
    """Clear denominators of ``(x, y, 1)`` and strip the integer content.

    The result has coordinates in Z[sqrt D], so in the ring of integers.
    """
    x, y = p.x, p.y
    dens = [q.denominator for q in (x.a, x.b, y.a, y.b)]
    scale = math.lcm(*dens)
    coeffs = [int(q * scale) for q in (x.a, x.b, y.a, y.b)] + [scale]
    g = math.gcd(*coeffs)
    k = Fraction(scale, g)
    return (x * k, y * k, QFE(k))


def _lattice_coords(w: Vec3, d: int) -> tuple | None:
    """Integers ``n`` with ``w == (sqrt d / 2) * n``, or None."""
    out = []
    for c in w:
        if c.a or (c.d not in (0, d)):
            return None
        n = 2 * c.b
        if n.denominator != 1:
            return None
        out.append(int(n))
    return tuple(out)


def _above_neg_sqrt(x: QFE, w: Fraction) -> bool:
    # x > -sqrt(w) for w > 0, where x**2 is rational
    return x.sign() >= 0 or (x * x).as_fraction() < w


def _below_sqrt(x: QFE, w: Fraction) -> bool:
    return x.sign() <= 0 or (x * x).as_fraction() < w


def hyperboloid_side_ok(w: Vec3, big_w: Fraction) -> bool:
    """Sign constraints for ``v x_Q v'`` when ``v`` represents a quarter-circle point."""
    s3 = w[2].sign()
    if s3 > 0:
        return _above_neg_sqrt(w[0], big_w) and _above_neg_sqrt(w[1], big_w)
    if s3 < 0:
        return _below_sqrt(w[0], big_w) and _below_sqrt(w[1], big_w)
    return True


@dataclass(frozen=True)
class WSequence:
    d: int
    w0: Vec3
    terms: tuple
    W: Fraction
    signs: tuple
    digits: tuple
    lattice: tuple
    max_abs_x3: QFE
    cycle_start: int | None = None
    cycle_length: int | None = None

    @property
    def x3_stable(self) -> bool | None:
        """Whether the max of ``|x3|`` over the first full cycle is the overall max."""
        if self.cycle_start is None:
            return None
        end = self.cycle_start + self.cycle_length + 1
        if end > len(self.terms):
            return None
        head = max(abs(w[2]) for w in self.terms[:end])
        return head == self.max_abs_x3

    def to_json(self) -> dict:
        from .quadspace import vec_to_json

        return {
            "d": self.d,
            "W": str(self.W),
            "w0": vec_to_json(self.w0),
            "lattice": [list(t) for t in self.lattice],
            "signs": list(self.signs),
            "digits": list(self.digits),
            "max_abs_x3": str(self.max_abs_x3),
            "cycle_start": self.cycle_start,
            "cycle_length": self.cycle_length,
        }


def w_sequence(p: CirclePoint, n: int) -> WSequence:
    """``w_k = v_k x_Q conj(v_k)`` along the first ``n`` steps of the orbit of ``p``.

    Every term is checked against the invariants it must satisfy: constant
    form value, membership in ``(sqrt D Z / 2)**3``, the signed one-step
    recurrence, agreement with the signed cumulative product, and the
    hyperboloid sign constraints.
    """
    if p.is_rational:
        raise RomikError("w-sequence needs an irrational quadratic point")
    d = p.d
    v = integralize(p)
    w0 = q_cross(v, vconj(v))
    big_w = q_form(w0).as_fraction()
    _require(big_w > 0, f"Q(w0) = {big_w} is not positive")
    lat0 = _lattice_coords(w0, d)
    _require(lat0 is not None, f"w0 = {w0} is not in the half-lattice")
    _require(hyperboloid_side_ok(w0, big_w), "w0 violates the hyperboloid sign constraints")

    terms = [w0]
    signs = [1]
    digits = []
    lattice = [lat0]
    unsigned = w0
    point = p
    seen = {p: 0}
    cycle_start = cycle_length = None
    for k in range(1, n + 1):
        j = digit(point)
        a = _INVERSE[j]
        v = matvec(a, v)
        point = t_map(point)
        _require(project(v) == point, f"step {k}: v_k does not represent T^k(p)")
        w = q_cross(v, vconj(v))
        flip = -1 if j == 2 else 1
        _require(w == vscale(flip, matvec(a, terms[-1])), f"step {k}: one-step recurrence failed")
        unsigned = matvec(a, unsigned)
        sign = signs[-1] * flip
        _require(w == (unsigned if sign == 1 else vneg(unsigned)), f"step {k}: product formula failed")
        _require(q_form(w) == big_w, f"step {k}: Q(w) != W")
        lat = _lattice_coords(w, d)
        _require(lat is not None, f"step {k}: w outside the half-lattice")
        _require(hyperboloid_side_ok(w, big_w), f"step {k}: hyperboloid sign constraint failed")
        terms.append(w)
        signs.append(sign)
        digits.append(j)
        lattice.append(lat)
        if cycle_start is None:
            if point in seen:
                cycle_start = seen[point]
                cycle_length = k - cycle_start
            else:
                seen[point] = k

    if cycle_start is not None:
        for i in range(cycle_start, len(terms) - cycle_length):
            _require(terms[i] == terms[i + cycle_length], f"w-sequence not periodic at {i}")

    return WSequence(
        d=d,
        w0=w0,
        terms=tuple(terms),
        W=big_w,
        signs=tuple(signs),
        digits=tuple(digits),
        lattice=tuple(lattice),
        max_abs_x3=max(abs(w[2]) for w in terms),
        cycle_start=cycle_start,
        cycle_length=cycle_length,
    )


# -- conjugate expansion ---------------------------------------------------


@dataclass(frozen=True)
class GaloisReport:
    word: tuple
    conjugate: tuple
    expected_signs: tuple
    observed_signs: tuple
    target: tuple
    detected: ExpansionResult

    @property
    def signs_ok(self) -> bool:
        return self.expected_signs == self.observed_signs

    @property
    def period_ok(self) -> bool:
        return self.detected.preperiod == () and self.detected.period == primitive_root(self.target)

    @property
    def passed(self) -> bool:
        return self.signs_ok and self.period_ok

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "conjugate": [str(c) for c in self.conjugate],
            "expected_signs": list(self.expected_signs),
            "observed_signs": list(self.observed_signs),
            "target_period": list(self.target),
            "detected": self.detected.to_json(),
            "passed": self.passed,
        }


def galois_check(word: Sequence[int], max_iter: int | None = None) -> GaloisReport:
    """Compare the conjugate of a periodic point against the reversed word.

    For ``word = d1..dk`` the conjugate coordinates have the signs fixed by
    ``dk`` and their absolute values expand as ``(d_{k-1} .. d1 dk)``
    repeated.
    """
    data = construct_periodic(word)
    w = data.word
    ax, ay = data.point.x.conj(), data.point.y.conj()
    observed = (ax.sign(), ay.sign())
    target = tuple(reversed(w[:-1])) + (w[-1],)
    detected = detect_period(CirclePoint(abs(ax), abs(ay)), max_iter)
    return GaloisReport(w, (ax, ay), GALOIS_SIGNS[w[-1]], observed, target, detected)


# -- field-level explorations -------------------------------------------------


@dataclass(frozen=True)
class NkkCount:
    k: int
    d: int
    count: int
    witnesses: tuple
    degenerate: tuple = ()

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "count": self.count,
            "witnesses": [list(w) for w in self.witnesses],
            "degenerate": [list(w) for w in self.degenerate],
        }


def count_nkk(k: int, d: int) -> NkkCount:
    """Number of length-``k`` words whose periodic point lies in Q(sqrt d).

    Words whose discriminant is a perfect square would give a rational
    periodic point; they are listed separately instead of counted.
    """
    if k < 1:
        raise RomikError("k must be >= 1")
    if d < 2 or squarefree_part(d)[1] != 1:
        raise RomikError(f"d = {d} must be a squarefree integer > 1")
    hits, degenerate = [], []
    for w in admissible_words(k):
        disc = word_discriminant(w)
        if disc <= 0:
            degenerate.append(w)
            continue
        core, _ = squarefree_part(disc)
        if core == 1:
            degenerate.append(w)
        elif core == d:
            hits.append(w)
    return NkkCount(k, d, len(hits), tuple(hits), tuple(degenerate))


@dataclass(frozen=True)
class TripleClass:
    representative: Vec3
    d: int

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.representative) + "]"


def normalize_class(v: Vec3, unit: QFE) -> Vec3:
    """Scale ``v`` by a power of ``unit`` so its third coordinate lies in ``[1, unit)``."""
    z = v[2]
    if z.sign() <= 0:
        raise RomikError("class representatives need a positive third coordinate")
    inv = unit.inverse()
    while z >= unit:
        v = vscale(inv, v)
        z = v[2]
    while z < 1:
        v = vscale(unit, v)
        z = v[2]
    return v


@dataclass(frozen=True)
class CircularRoot:
    word: tuple
    d: int
    classes: tuple
    edges: tuple  # (source index, target index, digit)
    unit: FundamentalUnit | None = None

    def to_json(self) -> dict:
        from .quadspace import vec_to_json

        return {
            "word": list(self.word),
            "d": self.d,
            "unit": None if self.unit is None else str(self.unit.value),
            "classes": [
                {"text": str(c), "representative": vec_to_json(c.representative)}
                for c in self.classes
            ],
            "edges": [{"source": s, "target": t, "label": f"M{j}"} for s, t, j in self.edges],
        }


def circular_root(word: Sequence[int], with_unit_normalization: bool = True) -> CircularRoot:
    """Unit classes of the rotations of ``word`` and the ``M_j`` edges joining them.

    Rotation ``i`` starts at digit ``d_i``; ``M_{d_i}`` carries the class of
    rotation ``i + 1`` onto the class of rotation ``i``.
    """
    word = primitive_root(_check_word(word))
    k = len(word)
    reps = []
    d = None
    for i in range(k):
        data = construct_periodic(word[i:] + word[:i])
        d = data.d
        reps.append(integralize(data.point))
    unit = None
    if with_unit_normalization:
        unit = fundamental_unit(d)
        reps = [normalize_class(v, unit.value) for v in reps]
    classes = tuple(TripleClass(v, d) for v in reps)
    edges = tuple(((i + 1) % k, i, word[i]) for i in range(k))
    return CircularRoot(word, d, classes, edges, unit)


def graph_children(root: CircularRoot, depth: int = 1) -> list[tuple[Vec3, Vec3, int]]:
    """Edges ``(parent, child, j)`` growing off the cycle, ``depth`` levels deep.

    At each cycle class the one ``M_j`` that stays on the cycle is skipped.
    """
    out = []
    frontier = []
    on_cycle = {(s, j) for s, _, j in root.edges}
    for i, cls in enumerate(root.classes):
        v = cls.representative
        for j in (1, 2, 3):
            if (i, j) in on_cycle:
                continue
            child = matvec(BERGGREN[j], v)
            out.append((v, child, j))
            frontier.append(child)
    for _ in range(depth - 1):
        nxt = []
        for v in frontier:
            for j in (1, 2, 3):
                child = matvec(BERGGREN[j], v)
                out.append((v, child, j))
                nxt.append(child)
        frontier = nxt
    return out
