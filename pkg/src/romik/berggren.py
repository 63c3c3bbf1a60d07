"""Berggren trees of primitive Pythagorean triples.

Triples are plain integer 3-tuples so enumeration stays in fast ``int``
arithmetic.  The two trees are rooted at (3, 4, 5) and (4, 3, 5).
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .dynamics import digit, digit_all
from .errors import RomikError
from .quadspace import BERGGREN, UNFOLD, H, CirclePoint, matmul, matvec

__all__ = [
    "Triple",
    "Terminal",
    "TreeNode",
    "FunnelReport",
    "ROOTS",
    "is_primitive_triple",
    "children",
    "parent",
    "descend",
    "walk_tree",
    "enumerate_bfs",
    "enumerate_oracle",
    "is_funnel",
]


class Triple(NamedTuple):
    a: int
    b: int
    c: int

    def point(self) -> CirclePoint:
        return CirclePoint(Fraction(self.a, self.c), Fraction(self.b, self.c))


class Terminal(NamedTuple):
    """The vectors (1, 0, 1) or (0, 1, 1) reached by stepping below a root."""

    vector: tuple


ROOTS = (Triple(3, 4, 5), Triple(4, 3, 5))

_INVERSE = {j: matmul(UNFOLD[j], H) for j in (1, 2, 3)}


def is_primitive_triple(v) -> bool:
    a, b, c = v
    return a > 0 and b > 0 and c > 0 and a * a + b * b == c * c and math.gcd(a, b, c) == 1


def _check(t) -> Triple:
    t = Triple(*t)
    if not is_primitive_triple(t):
        raise RomikError(f"{tuple(t)} is not a primitive Pythagorean triple")
    return t


def children(t) -> tuple[Triple, Triple, Triple]:
    t = _check(t)
    return tuple(Triple(*matvec(BERGGREN[j], t)) for j in (1, 2, 3))


def parent(t) -> tuple[Triple | Terminal, int]:
    """Parent of ``t`` and the digit ``j`` with ``t = M_j * parent``."""
    t = _check(t)
    j = digit(t.point())
    v = matvec(_INVERSE[j], t)
    if t in ROOTS:
        return Terminal(v), j
    return Triple(*v), j


def descend(t) -> list[tuple[Triple, int]]:
    """Parent chain of ``t`` down to a root, as ``(parent, digit)`` pairs."""
    t = _check(t)
    chain = []
    while t not in ROOTS:
        t, j = parent(t)
        chain.append((t, j))
    return chain


@dataclass(frozen=True)
class TreeNode:
    triple: Triple
    path: tuple
    root: Triple


def walk_tree(root, depth: int) -> Iterator[TreeNode]:
    """Breadth-first walk of one tree down to ``depth`` levels below the root."""
    root = Triple(*root)
    if root not in ROOTS:
        raise RomikError(f"{tuple(root)} is not a Berggren root")
    queue = deque([TreeNode(root, (), root)])
    while queue:
        node = queue.popleft()
        yield node
        if len(node.path) < depth:
            for j, child in zip((1, 2, 3), children(node.triple)):
                queue.append(TreeNode(child, node.path + (j,), root))


def enumerate_bfs(c_max: int) -> set[Triple]:
    """All tree vertices with hypotenuse at most ``c_max``.

    Children always have a larger hypotenuse, so a child over the bound can be
    pruned together with its whole subtree.
    """
    found = set()
    heap = [(r.c, r) for r in ROOTS if r.c <= c_max]
    heapq.heapify(heap)
    mats = (BERGGREN[1], BERGGREN[2], BERGGREN[3])
    while heap:
        _, t = heapq.heappop(heap)
        if t in found:
            raise RomikError(f"{t} reached twice; the trees are not disjoint")
        found.add(t)
        for m in mats:
            child = Triple(*matvec(m, t))
            if child.c <= c_max:
                heapq.heappush(heap, (child.c, child))
    return found


def enumerate_oracle(c_max: int) -> set[Triple]:
    """Primitive triples with ``c <= c_max`` from Euclid's parametrization."""
    out = set()
    m = 2
    while m * m + 1 <= c_max:
        for n in range(1, m):
            if (m - n) % 2 == 1 and math.gcd(m, n) == 1:
                a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
                if c <= c_max:
                    out.add(Triple(a, b, c))
                    out.add(Triple(b, a, c))
        m += 1
    return out


@dataclass(frozen=True)
class FunnelReport:
    triple: Triple
    outdegree: int
    indegree: int
    children_larger: bool
    parent_smaller: bool
    is_root: bool
    boundary_digits: frozenset

    @property
    def outdegree_ok(self) -> bool:
        return self.outdegree == 3

    @property
    def indegree_ok(self) -> bool:
        return self.indegree == 1

    @property
    def monotone_ok(self) -> bool:
        return self.children_larger and self.parent_smaller

    @property
    def passed(self) -> bool:
        return self.outdegree_ok and self.indegree_ok and self.monotone_ok

    def to_json(self) -> dict:
        return {
            "triple": list(self.triple),
            "outdegree": self.outdegree,
            "indegree": self.indegree,
            "children_larger": self.children_larger,
            "parent_smaller": self.parent_smaller,
            "is_root": self.is_root,
            "passed": self.passed,
        }


def is_funnel(t) -> FunnelReport:
    """Check the three funnel-vertex properties of ``t`` directly.

    Indegree counts the ``j`` for which ``U_j H t`` is again a primitive
    triple; the roots have indegree 0.
    """
    t = _check(t)
    kids = [matvec(BERGGREN[j], t) for j in (1, 2, 3)]
    ups = [matvec(_INVERSE[j], t) for j in (1, 2, 3)]
    parents = [u for u in ups if is_primitive_triple(u)]
    return FunnelReport(
        triple=t,
        outdegree=sum(is_primitive_triple(k) for k in kids),
        indegree=len(parents),
        children_larger=all(k[2] > t.c for k in kids),
        parent_smaller=bool(parents) and all(p[2] < t.c for p in parents),
        is_root=t in ROOTS,
        boundary_digits=digit_all(t.point()),
    )
