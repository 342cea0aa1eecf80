import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from spancalc.finset import FinSet
from spancalc.errors import FootMismatch, Mismatch, ShapeError, ShapeMismatch
from spancalc.fixtures import intro_add, intro_copy
from spancalc.spans import (
    NatMatrix,
    SpanBicategory,
    all_labelled_spans,
    associator,
    automorphism_2cells,
    automorphism_count,
    compose_spans,
    enumerate_matrices,
    enumerate_spans,
    find_inverse_span,
    hcompose2,
    identity_2cell,
    identity_span,
    inverse_2cell,
    is_equivalence,
    is_permutation_matrix,
    isomorphisms,
    left_unitor,
    matmul,
    operad_compose,
    right_unitor,
    span,
    span_matrix,
    spans_isomorphic,
    vcompose2,
)


@st.composite
def spans_between(draw, x, y, max_apex=3):
    n = draw(st.integers(0, max_apex if x and y else 0))
    lv = draw(st.lists(st.integers(0, max(x - 1, 0)), min_size=n, max_size=n))
    rv = draw(st.lists(st.integers(0, max(y - 1, 0)), min_size=n, max_size=n))
    return span(x, y, lv, rv)


@st.composite
def chains(draw, length, max_foot=2, max_apex=3):
    feet = draw(st.lists(st.integers(0, max_foot), min_size=length + 1, max_size=length + 1))
    return [draw(spans_between(a, b, max_apex)) for a, b in zip(feet, feet[1:])]


def test_intro_composite():
    c = compose_spans(intro_copy(), intro_add())
    assert (c.left_foot.size, c.apex.size, c.right_foot.size) == (3, 8, 4)
    assert span_matrix(c).to_rows() == [[1, 0, 0, 3], [1, 0, 0, 1], [0, 1, 0, 1]]


def test_diag_then_add():
    diag = span(1, 2, (0, 0), (0, 1))
    add = span(2, 1, (0, 1), (0, 0))
    c = compose_spans(diag, add)
    assert (c.left_foot.size, c.apex.size, c.right_foot.size) == (1, 2, 1)


def test_foot_mismatch():
    with pytest.raises(FootMismatch):
        compose_spans(intro_add(), intro_copy())


def test_identity_is_unit_up_to_2cell():
    s = intro_copy()
    assert spans_isomorphic(compose_spans(identity_span(3), s), s) is not None
    assert left_unitor(s).target == s
    assert right_unitor(s).target == s


def test_span_matrix_examples():
    assert span_matrix(identity_span(3)).to_rows() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert span_matrix(span(2, 3, [], [])).total() == 0


def test_matmul_shape_error():
    with pytest.raises(ShapeError):
        matmul(NatMatrix(1, 2, (0, 0)), NatMatrix(1, 2, (0, 0)))


def test_matrix_functor_small():
    for x, y, z in itertools.product(range(3), repeat=3):
        for s in enumerate_spans(x, y, 2):
            for t in enumerate_spans(y, z, 2):
                assert span_matrix(compose_spans(s, t)) == matmul(span_matrix(s), span_matrix(t))


def test_iso_witness_iff_equal_matrix():
    for x, y in itertools.product(range(3), repeat=2):
        spans = all_labelled_spans(x, y, 2)
        for s, t in itertools.product(spans, repeat=2):
            w = spans_isomorphic(s, t)
            assert (w is not None) == (span_matrix(s) == span_matrix(t))
            if w is not None:
                assert w.source == s and w.target == t


def test_enumerate_spans_counts():
    assert [s.apex.size for s in enumerate_spans(1, 1, 3)] == [0, 1, 2, 3]
    assert len(enumerate_spans(1, 0, 5)) == 1
    assert len(enumerate_spans(2, 2, 1)) == 5
    # one representative per matrix
    reps = enumerate_spans(2, 2, 3)
    assert len({span_matrix(s) for s in reps}) == len(reps)
    assert len(reps) == sum(math.comb(4 + k - 1, k) for k in range(4))


def test_enumerate_matrices_order_is_stable():
    a = list(enumerate_matrices(2, 2, 2))
    assert a == list(enumerate_matrices(2, 2, 2))
    assert [m.total() for m in a] == sorted(m.total() for m in a)


def test_automorphism_examples():
    assert len(automorphism_2cells(span(1, 1, (0, 0, 0), (0, 0, 0)))) == 6
    assert len(automorphism_2cells(identity_span(3))) == 1
    assert len(automorphism_2cells(span(2, 1, (0, 1), (0, 0)))) == 1


def test_automorphism_count_formula():
    for x, y in itertools.product(range(3), repeat=2):
        for s in enumerate_spans(x, y, 4):
            assert len(automorphism_2cells(s)) == automorphism_count(span_matrix(s))


def test_two_cell_algebra():
    s = span(1, 1, (0, 0), (0, 0))
    ident = identity_2cell(s)
    assert vcompose2(ident, ident) == ident
    for a in automorphism_2cells(s):
        assert vcompose2(a, inverse_2cell(a)) == identity_2cell(a.target)
    with pytest.raises(Mismatch):
        vcompose2(identity_2cell(identity_span(1)), ident)


def test_interchange_exhaustive():
    for x, y, z in itertools.product(range(3), repeat=3):
        for s in enumerate_spans(x, y, 2):
            for t in enumerate_spans(y, z, 2):
                auts_s, auts_t = automorphism_2cells(s), automorphism_2cells(t)
                for a, a2 in itertools.product(auts_s, repeat=2):
                    for b, b2 in itertools.product(auts_t, repeat=2):
                        lhs = vcompose2(hcompose2(b, a), hcompose2(b2, a2))
                        rhs = hcompose2(vcompose2(b, b2), vcompose2(a, a2))
                        assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(chains(3))
def test_associator_relates_bracketings(ch):
    s, t, r = ch
    a = associator(s, t, r)
    assert a.source == compose_spans(compose_spans(s, t), r)
    assert a.target == compose_spans(s, compose_spans(t, r))


@settings(max_examples=40, deadline=None)
@given(chains(4, max_foot=2, max_apex=2))
def test_pentagon(ch):
    s, t, r, q = ch
    # ((st)r)q => (st)(rq) => s(t(rq))
    top = vcompose2(associator(s, t, compose_spans(r, q)), associator(compose_spans(s, t), r, q))
    # ((st)r)q => (s(tr))q => s((tr)q) => s(t(rq))
    a1 = hcompose2(identity_2cell(q), associator(s, t, r))
    a2 = associator(s, compose_spans(t, r), q)
    a3 = hcompose2(associator(t, r, q), identity_2cell(s))
    assert top == vcompose2(a3, vcompose2(a2, a1))


@settings(max_examples=40, deadline=None)
@given(chains(2))
def test_triangle(ch):
    s, t = ch
    ids = identity_span(s.right_foot)
    lhs = vcompose2(hcompose2(left_unitor(t), identity_2cell(s)), associator(s, ids, t))
    rhs = hcompose2(identity_2cell(t), right_unitor(s))
    assert lhs == rhs


def test_equivalence_iff_permutation_matrix():
    for x, y in itertools.product(range(3), repeat=2):
        for s in all_labelled_spans(x, y, 3):
            eq = is_equivalence(s)
            assert eq == is_permutation_matrix(span_matrix(s))
            assert eq == (find_inverse_span(s, 3) is not None)


def test_equivalence_examples():
    assert is_equivalence(identity_span(2))
    assert is_equivalence(span(2, 2, (1, 0), (0, 1)))
    assert not is_equivalence(span(1, 2, (0, 0), (0, 1)))


def _operad_oracle(sigma, family):
    # lay out target blocks in the order given by sigma, then look each element up
    blocks = sorted(range(len(sigma)), key=lambda x: sigma[x])
    layout = [(x, k) for x in blocks for k in range(len(family[x]))]
    where = {p: i for i, p in enumerate(layout)}
    return tuple(where[(x, family[x][k])] for x in range(len(sigma)) for k in range(len(family[x])))


def test_operad_compose_examples():
    assert operad_compose((0, 1), [(0,), (0, 1)]) == (0, 1, 2)
    assert operad_compose((1, 0), [(0,), (0, 1)]) == (2, 0, 1)
    assert operad_compose((0,), [(2, 0, 1)]) == (2, 0, 1)
    with pytest.raises(ShapeMismatch):
        operad_compose((0, 0), [(0,), (0,)])


def test_operad_compose_matches_oracle():
    for k in range(1, 4):
        for sizes in itertools.product(range(3), repeat=k):
            fams = [list(itertools.permutations(range(n))) for n in sizes]
            for sigma in itertools.permutations(range(k)):
                for family in itertools.product(*fams):
                    got = operad_compose(sigma, list(family))
                    assert got == _operad_oracle(sigma, family)
                    assert sorted(got) == list(range(sum(sizes)))


def test_bicategory_hom_and_isomorphisms():
    B = SpanBicategory(2)
    assert len(B.hom(FinSet(1), FinSet(1))) == 3
    s = span(1, 1, (0, 0), (0, 0))
    assert len(isomorphisms(s, s)) == 2
