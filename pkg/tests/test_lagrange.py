from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from romik.errors import DegenerateWordError, RomikError, SearchLimitError
from romik.field import QFE, squarefree_part
from romik.lagrange import (
    admissible_words,
    circular_root,
    construct_periodic,
    count_nkk,
    default_max_iter,
    detect_period,
    galois_check,
    graph_children,
    integralize,
    is_admissible,
    normalize_class,
    primitive_root,
    w_sequence,
    word_discriminant,
)
from romik.quadspace import BERGGREN, CirclePoint, act, mat_word, matvec, project, q_form

R2, R3 = QFE.sqrt(2), QFE.sqrt(3)
F = Fraction

admissible = st.lists(st.sampled_from((1, 2, 3)), min_size=1, max_size=6).map(tuple).filter(is_admissible)


def _mp(x: QFE):
    return mpmath.mpf(x.a.numerator) / x.a.denominator + (
        mpmath.mpf(x.b.numerator) / x.b.denominator
    ) * mpmath.sqrt(x.d)


def test_admissible_words_counts():
    for k in range(1, 6):
        words = list(admissible_words(k))
        assert len(words) == 3**k - 2
        assert len(set(words)) == len(words)
        assert (1,) * k not in words and (3,) * k not in words


def test_primitive_root():
    assert primitive_root((3, 1, 3, 1)) == (3, 1)
    assert primitive_root((2, 2, 2)) == (2,)
    assert primitive_root((1, 2, 1)) == (1, 2, 1)


def test_named_periodic_points():
    two = construct_periodic((2,))
    assert two.point == CirclePoint(R2 / 2, R2 / 2)
    assert two.lambda1 == 3 + 2 * R2 and two.lambda3 == -1 and two.d == 2
    p = construct_periodic((3, 1))
    assert p.point == CirclePoint(F(1, 2), R3 / 2)
    assert p.lambda1 == 7 + 4 * R3 and p.lambda2 == 7 - 4 * R3 and p.lambda3 == 1
    assert p.v3 == (R3, 0, R3 / 2)


@pytest.mark.parametrize("word", [(1,), (3,), (1, 1), (3, 3, 3)])
def test_degenerate_words(word):
    with pytest.raises(DegenerateWordError):
        construct_periodic(word)


def test_bad_words():
    with pytest.raises(RomikError):
        construct_periodic(())
    with pytest.raises(RomikError):
        construct_periodic((1, 4))


@given(admissible)
@settings(max_examples=60, deadline=None)
def test_periodic_point_matches_floating_eigenvector(word):
    # independent oracle: dominant eigenvector from a 60-digit numerical solve
    data = construct_periodic(word)
    with mpmath.workdps(60):
        m = mpmath.matrix([[int(x) for x in row] for row in mat_word(word)])
        vals, vecs = mpmath.eig(m)
        i = max(range(3), key=lambda k: mpmath.re(vals[k]))
        v = [mpmath.re(vecs[k, i]) for k in range(3)]
        x, y = v[0] / v[2], v[1] / v[2]
        assert abs(x - _mp(data.point.x)) < mpmath.mpf(10) ** -40
        assert abs(y - _mp(data.point.y)) < mpmath.mpf(10) ** -40
        assert abs(mpmath.re(vals[i]) - _mp(data.lambda1)) < mpmath.mpf(10) ** -30


@given(admissible)
@settings(max_examples=60, deadline=None)
def test_word_discriminant_matches_char_poly(word):
    m = mat_word(word)
    lam = construct_periodic(word).lambda1
    t = m[0][0] + m[1][1] + m[2][2]
    e = construct_periodic(word).lambda3
    assert lam * lam - (t - e) * lam + 1 == 0
    assert squarefree_part(word_discriminant(word))[0] == construct_periodic(word).d


@given(admissible, st.lists(st.sampled_from((1, 2, 3)), max_size=4))
@settings(max_examples=60, deadline=None)
def test_detect_period_eventually_periodic(word, prefix):
    p = construct_periodic(word).point
    for j in reversed(prefix):
        p = act(BERGGREN[j], p)
    res = detect_period(p)
    full = list(res.preperiod) + list(res.period) * (len(prefix) + len(word))
    assert full[: len(prefix) + len(word)] == list(prefix) + list(word)
    assert len(res.preperiod) <= len(prefix)
    assert res.period == primitive_root(res.period)


def test_detect_period_rational_and_limits(monkeypatch):
    assert detect_period(CirclePoint(F(3, 5), F(4, 5))).period == (1,)
    assert str(detect_period(CirclePoint(F(1, 2), R3 / 2))) == "[(3,1)^inf]"
    p = construct_periodic((1, 2, 3, 2, 1)).point
    with pytest.raises(SearchLimitError):
        detect_period(p, max_iter=2)
    monkeypatch.setenv("ROMIK_MAX_ITER", "7")
    assert default_max_iter() == 7


def test_galois_example():
    rep = galois_check((3, 1))
    assert rep.conjugate == (F(1, 2), -R3 / 2)
    assert rep.observed_signs == (1, -1)
    assert rep.passed


@given(admissible)
@settings(max_examples=60, deadline=None)
def test_galois_property(word):
    assert galois_check(word).passed


def test_integralize():
    assert integralize(CirclePoint(F(1, 2), R3 / 2)) == (QFE(1), R3, QFE(2))
    assert integralize(CirclePoint(F(3, 5), F(4, 5))) == (3, 4, 5)
    # only rational content is removed
    assert integralize(CirclePoint(R2 / 2, R2 / 2)) == (R2, R2, QFE(2))


def test_w_sequence_example():
    seq = w_sequence(CirclePoint(F(1, 2), R3 / 2), 6)
    assert seq.w0 == (4 * R3, 0, 2 * R3)
    assert seq.W == 36
    assert seq.lattice[0] == (8, 0, 4)
    assert seq.cycle_length == 2 and seq.x3_stable
    assert all(q_form(w) == 36 for w in seq.terms)


@given(admissible, st.lists(st.sampled_from((1, 2, 3)), max_size=3))
@settings(max_examples=40, deadline=None)
def test_w_sequence_property(word, prefix):
    p = construct_periodic(word).point
    for j in reversed(prefix):
        p = act(BERGGREN[j], p)
    seq = w_sequence(p, len(prefix) + 2 * len(word) + 1)
    signs = [1]
    for j in seq.digits:
        signs.append(signs[-1] * (-1 if j == 2 else 1))
    assert list(seq.signs) == signs
    assert seq.cycle_start is not None


def test_w_sequence_rejects_rational():
    with pytest.raises(RomikError):
        w_sequence(CirclePoint(F(3, 5), F(4, 5)), 3)


def _count_oracle(k, d):
    n = 0
    for w in admissible_words(k):
        try:
            n += construct_periodic(w).d == d
        except DegenerateWordError:
            pass
    return n


@pytest.mark.parametrize("k, d", [(1, 2), (2, 3), (2, 7), (3, 2), (3, 5), (4, 3), (4, 2)])
def test_count_nkk_against_construction(k, d):
    assert count_nkk(k, d).count == _count_oracle(k, d)


def test_count_nkk_examples():
    assert count_nkk(2, 7).count == 0
    assert count_nkk(1, 2).witnesses == ((2,),)
    assert (3, 1) in count_nkk(2, 3).witnesses
    with pytest.raises(RomikError):
        count_nkk(2, 4)


def test_normalize_class():
    eps = 2 + R3
    v = (QFE(1), R3, QFE(2))
    assert normalize_class(tuple(c * eps**3 for c in v), eps) == v
    assert normalize_class(tuple(c * eps**-2 for c in v), eps) == v
    with pytest.raises(RomikError):
        normalize_class((QFE(1), QFE(0), QFE(-1)), eps)


def test_circular_root_31():
    root = circular_root((3, 1, 3, 1))
    assert root.word == (3, 1)
    assert [c.representative for c in root.classes] == [(QFE(1), R3, QFE(2)), (R3, QFE(1), QFE(2))]
    assert root.unit.value == 2 + R3
    assert sorted(root.edges) == [(0, 1, 1), (1, 0, 3)]
    assert str(root.classes[0]) == "[1, √3, 2]"


@given(admissible)
@settings(max_examples=30, deadline=None)
def test_circular_root_edges_are_berggren_moves(word):
    root = circular_root(word)
    for s, t, j in root.edges:
        src = root.classes[s].representative
        tgt = root.classes[t].representative
        assert project(matvec(BERGGREN[j], src)) == project(tgt)
    eps = root.unit.value
    assert all(1 <= c.representative[2] < eps for c in root.classes)


def test_graph_children():
    root = circular_root((3, 1))
    edges = graph_children(root, 1)
    # two classes, three moves each, one move per class stays on the cycle
    assert len(edges) == 4
    assert len(graph_children(root, 2)) == 4 + 12
