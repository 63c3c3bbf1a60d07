"""Exit criteria for the library, runnable from pytest and from ``romik selftest``.

Every check is exact; the only tolerances are wall-clock budgets.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .berggren import ROOTS, descend, enumerate_bfs, enumerate_oracle, is_funnel, parent, walk_tree
from .dynamics import expand_rational, expand_rational_both, expand_stream, Tail
from .field import QFE
from .lagrange import (
    admissible_words,
    circular_root,
    construct_periodic,
    detect_period,
    galois_check,
    normalize_class,
    primitive_root,
    w_sequence,
)
from .quadspace import (
    BERGGREN,
    MATRICES,
    CirclePoint,
    H,
    act,
    bilinear,
    det,
    matmul,
    matvec,
    q_cross,
    q_form,
    vscale,
)

# Both Berggren trees to depth 2, keyed by the edge path from the root.
DEPTH_TWO_TREES = {
    (3, 4, 5): {
        (): (3, 4, 5),
        (1,): (15, 8, 17), (2,): (21, 20, 29), (3,): (5, 12, 13),
        (1, 1): (35, 12, 37), (1, 2): (65, 72, 97), (1, 3): (33, 56, 65),
        (2, 1): (77, 36, 85), (2, 2): (119, 120, 169), (2, 3): (39, 80, 89),
        (3, 1): (45, 28, 53), (3, 2): (55, 48, 73), (3, 3): (7, 24, 25),
    },
    (4, 3, 5): {
        (): (4, 3, 5),
        (1,): (12, 5, 13), (2,): (20, 21, 29), (3,): (8, 15, 17),
        (1, 1): (24, 7, 25), (1, 2): (48, 55, 73), (1, 3): (28, 45, 53),
        (2, 1): (80, 39, 89), (2, 2): (120, 119, 169), (2, 3): (36, 77, 85),
        (3, 1): (56, 33, 65), (3, 2): (72, 65, 97), (3, 3): (12, 35, 37),
    },
}

SEED = 20190101


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.name} ({self.seconds:.2f}s): {self.detail}"


def _node_line(root, path, triple) -> str:
    a, b, c = triple
    return json.dumps({"a": a, "b": b, "c": c, "path": list(path), "root": list(root)})


def depth_two_trees() -> tuple[bool, str]:
    want = sorted(
        _node_line(root, path, t) for root, nodes in DEPTH_TWO_TREES.items() for path, t in nodes.items()
    )
    got = sorted(
        _node_line(n.root, n.path, n.triple) for r in ROOTS for n in walk_tree(r, 2)
    )
    ok = "\n".join(got).encode() == "\n".join(want).encode() and len(got) == 26
    return ok, f"{len(got)} nodes, byte-identical={ok}"


def oracle_equivalence(bounds=(100, 1000, 10_000)) -> tuple[bool, str]:
    parts = []
    ok = True
    for c in bounds:
        bfs, orc = enumerate_bfs(c), enumerate_oracle(c)
        same = bfs == orc
        ok &= same
        parts.append(f"c<={c}: {len(bfs)} triples, equal={same}")
    return ok, "; ".join(parts)


def funnel_vertices(c_max: int = 1000) -> tuple[bool, str]:
    bad = []
    triples = sorted(enumerate_oracle(c_max), key=lambda t: (t[2], t))
    for t in triples:
        r = is_funnel(t)
        if t in ROOTS:
            good = (
                r.indegree == 0 and r.outdegree_ok and r.children_larger and not r.passed
            )
        else:
            good = r.passed
        if not good:
            bad.append(t)
    return not bad, f"{len(triples)} triples checked, roots flagged indegree 0, failures={bad[:5]}"


def lagrange_round_trip(k_max: int = 5) -> tuple[bool, str]:
    bad = []
    count = 0
    for k in range(1, k_max + 1):
        for w in admissible_words(k):
            count += 1
            data = construct_periodic(w)
            res = detect_period(data.point)
            stream = expand_stream(data.point, 3 * k)
            if res.preperiod or res.period != primitive_root(w) or stream != list(w) * 3:
                bad.append(w)
    expected = sum(3**k - 2 for k in range(1, k_max + 1))
    ok = not bad and count == expected
    return ok, f"{count} words (expected {expected}), failures={bad[:5]}"


def conjugate_expansion(k_max: int = 4) -> tuple[bool, str]:
    bad = []
    count = 0
    for k in range(1, k_max + 1):
        for w in admissible_words(k):
            count += 1
            if not galois_check(w).passed:
                bad.append(w)
    return not bad, f"{count} words, failures={bad[:5]}"


def named_points() -> tuple[bool, str]:
    r3 = QFE.sqrt(3)
    half = Fraction(1, 2)
    two = construct_periodic((2,))
    ok_two = two.point == CirclePoint(QFE.sqrt(2) / 2, QFE.sqrt(2) / 2) and two.lambda1 == 3 + 2 * QFE.sqrt(2)
    p31 = construct_periodic((3, 1))
    ok_31 = p31.point == CirclePoint(half, r3 / 2) and p31.lambda1 == 7 + 4 * r3 and p31.d == 3
    root = circular_root((3, 1))
    reps = [c.representative for c in root.classes]
    want = [(QFE(1), r3, QFE(2)), (r3, QFE(1), QFE(2))]
    eps = root.unit.value
    moved = normalize_class(matvec(BERGGREN[1], want[0]), eps)
    labels = sorted((s, t, j) for s, t, j in root.edges)
    ok_root = reps == want and eps == 2 + r3 and moved == want[1] and labels == [(0, 1, 1), (1, 0, 3)]
    ok = ok_two and ok_31 and ok_root
    return ok, f"(2): {ok_two}; (3,1): {ok_31}; circular root [1,√3,2],[√3,1,2] with ε=2+√3: {ok_root}"


def random_eventually_periodic(rng: random.Random) -> CirclePoint:
    k = rng.randint(1, 4)
    while True:
        w = tuple(rng.choice((1, 2, 3)) for _ in range(k))
        if set(w) not in ({1}, {3}):
            break
    prefix = [rng.choice((1, 2, 3)) for _ in range(rng.randint(0, 4))]
    p = construct_periodic(w).point
    for d in reversed(prefix):
        p = act(BERGGREN[d], p)
    return p


def w_sequence_invariants(samples: int = 50, seed: int = SEED) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for i in range(samples):
        p = random_eventually_periodic(rng)
        # enough steps to run past the preperiod and round the cycle twice
        seq = w_sequence(p, 4 + 2 * 4 + 2)
        if seq.cycle_start is None or seq.x3_stable is not True:
            bad.append(i)
    return not bad, f"{samples} points, every term checked exactly, failures={bad}"


def descent_criterion(samples: int = 10_000, seed: int = SEED, bound: int = 60) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    hits = 0
    for _ in range(samples):
        a = rng.randint(-bound, bound)
        b = rng.randint(-bound, bound)
        c = rng.choice([x for x in range(-bound, bound + 1) if x])
        c2 = matvec(H, (a, b, c))[2]
        between = 1 < Fraction(a + b, c) < 2
        hits += between
        if (abs(c2) < abs(c)) != between:
            bad += 1
    return bad == 0, f"{samples} vectors, {hits} inside the strip, mismatches={bad}"


def rational_expansions(c_max: int = 1000) -> tuple[bool, str]:
    p = CirclePoint(Fraction(3, 5), Fraction(4, 5))
    q = CirclePoint(Fraction(5, 13), Fraction(12, 13))
    first = expand_rational_both(p)
    second = expand_rational_both(q)
    ok_p = [(e.prefix, e.tail) for e in first] == [((2,), Tail.ONES), ((3,), Tail.ONES)]
    ok_q = [(e.prefix, e.tail) for e in second] == [((3, 2), Tail.ONES), ((3, 3), Tail.ONES)]
    bad = []
    triples = enumerate_oracle(c_max)
    for t in triples:
        steps = descend(t)
        # the canonical prefix also records the step from the root to (1,0,1) or (0,1,1)
        _, root_digit = parent(steps[-1][0] if steps else t)
        if list(expand_rational(t_point(t)).prefix) != [j for _, j in steps] + [root_digit]:
            bad.append(t)
    ok = ok_p and ok_q and not bad
    return ok, f"(3/5,4/5): {ok_p}; (5/13,12/13): {ok_q}; {len(triples)} triples, mismatches={bad[:5]}"


def t_point(t) -> CirclePoint:
    return CirclePoint(Fraction(t[0], t[2]), Fraction(t[1], t[2]))


def _random_qfe(rng: random.Random, d: int) -> QFE:
    return QFE(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), rng.randint(-5, 5), d)


def _random_vec(rng, d):
    return tuple(_random_qfe(rng, d) for _ in range(3))


def _random_null(rng: random.Random) -> tuple:
    m = rng.randint(1, 12)
    n = rng.randint(0, m)
    a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
    if rng.random() < 0.5:
        a, b = b, a
    k = Fraction(rng.choice((-3, -2, -1, 1, 2, 3)), rng.randint(1, 3))
    return (QFE(a * rng.choice((1, -1)) * k), QFE(b * rng.choice((1, -1)) * k), QFE(c * k))


def cross_product_algebra(samples: int = 10_000, seed: int = SEED) -> tuple[bool, str]:
    rng = random.Random(seed)
    names = sorted(MATRICES)
    bad_eq = bad_null = 0
    for _ in range(samples):
        d = rng.choice((2, 3, 5, 6, 7))
        a = MATRICES[rng.choice(names)]
        for _ in range(rng.randint(0, 2)):
            a = matmul(a, MATRICES[rng.choice(names)])
        v1, v2 = _random_vec(rng, d), _random_vec(rng, d)
        lhs = q_cross(matvec(a, v1), matvec(a, v2))
        rhs = vscale(det(a), matvec(a, q_cross(v1, v2)))
        bad_eq += lhs != rhs
        n1 = _random_null(rng)
        bad_null += q_form(q_cross(n1, v2)) != bilinear(n1, v2) ** 2
    ok = bad_eq == 0 and bad_null == 0
    return ok, f"{samples} samples, equivariance failures={bad_eq}, null-norm failures={bad_null}"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float | None]] = [
    (1, "depth-2 tree reproduction", depth_two_trees, 1.0),
    (2, "BFS/Euclid oracle equivalence", oracle_equivalence, 30.0),
    (3, "funnel vertices, c <= 1000", funnel_vertices, None),
    (4, "periodic round trip, k <= 5", lagrange_round_trip, 120.0),
    (5, "conjugate expansion, k <= 4", conjugate_expansion, None),
    (6, "named periodic points and circular root", named_points, None),
    (7, "w-sequence invariants", w_sequence_invariants, None),
    (8, "descent criterion", descent_criterion, None),
    (9, "rational expansions", rational_expansions, None),
    (10, "cross-product algebra", cross_product_algebra, None),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn, budget in CRITERIA:
        if num == number:
            start = time.perf_counter()
            ok, detail = fn()
            elapsed = time.perf_counter() - start
            if budget is not None and elapsed >= budget:
                ok = False
                detail += f"; over the {budget:g}s budget"
            return CriterionResult(num, name, ok, detail, elapsed)
    raise KeyError(number)


def run_all() -> list[CriterionResult]:
    return [run_criterion(num) for num, *_ in CRITERIA]
