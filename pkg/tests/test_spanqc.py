import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from spancalc.errors import FootMismatch, IndexRange, InvalidCell
from spancalc.fixtures import intro_add, intro_copy
from spancalc.simplex import check_n1_property, coface, codegeneracy
from spancalc.spanqc import (
    BoundedSpanComplex,
    SpanCell,
    barratt_eccles_compare,
    cell_from_nerve,
    cell_of_span,
    cell_shape,
    check_product_finality,
    complete_cell,
    compose_via_cell,
    degeneracy,
    face,
    homspace,
    homspace_block_sum,
    merge_faces,
    nerve_from_cell,
    point_cell,
    product_cone,
    reindex,
    reverse_cell,
    span_of_cell,
    validate_cell,
)
from spancalc.spans import (
    NatMatrix,
    compose_spans,
    enumerate_spans,
    identity_span,
    span,
    span_matrix,
    spans_isomorphic,
)


@pytest.fixture(scope="module")
def complex1():
    return BoundedSpanComplex(1)


@pytest.fixture(scope="module")
def cells2():
    X = BoundedSpanComplex(2)
    return [X.cells(d) for d in range(3)]


def test_cell_shape_sizes():
    ivs, _, pairs, _, _, _ = cell_shape(2)
    assert len(ivs) == 6
    # (0,2) contains 5 others, (0,1) and (1,2) contain 2 each
    assert len(pairs) == 9


def test_span_cell_round_trip():
    s = intro_copy()
    c = cell_of_span(s)
    assert validate_cell(c)
    assert span_of_cell(c) == s
    with pytest.raises(InvalidCell):
        span_of_cell(point_cell(2))


def test_compose_via_cell_long_edge():
    c = compose_via_cell(intro_copy(), intro_add())
    assert validate_cell(c)
    assert c.edge(0, 2) == compose_spans(intro_copy(), intro_add())
    assert face(c, 1) == cell_of_span(c.edge(0, 2))
    with pytest.raises(FootMismatch):
        compose_via_cell(intro_add(), intro_copy())


def test_validate_rejects_non_pullback():
    c = compose_via_cell(span(1, 1, (0,), (0,)), span(1, 1, (0, 0), (0, 0)))
    assert validate_cell(c)
    # shrink F(0,2) to a single element: no longer the pullback
    ivs, iidx, pairs, _, _, _ = cell_shape(2)
    sizes = list(c.sizes)
    sizes[iidx[(0, 2)]] = 1
    values = [v[:1] if a == (0, 2) else v for (a, _), v in zip(pairs, c.values)]
    assert not validate_cell(SpanCell(2, tuple(sizes), tuple(values)))


def test_validate_rejects_non_functorial():
    c = compose_via_cell(span(1, 2, (0, 0), (0, 1)), span(2, 1, (0, 1), (0, 0)))
    _, _, pairs, pidx, _, _ = cell_shape(2)
    values = list(c.values)
    k = pidx[((0, 2), (1, 1))]
    values[k] = tuple(1 - v for v in values[k])
    assert not validate_cell(SpanCell(2, c.sizes, tuple(values)))


def test_face_index_range():
    with pytest.raises(IndexRange):
        face(point_cell(1), 0)
    with pytest.raises(IndexRange):
        degeneracy(cell_of_span(identity_span(1)), 2)


def test_simplicial_identities_on_cells(cells2):
    for d in (1, 2):
        for F in cells2[d]:
            for j in range(d + 1):
                for i in range(j):
                    if d >= 2:
                        assert face(face(F, j), i) == face(face(F, i), j - 1)
                s = degeneracy(F, j)
                assert validate_cell(s)
                assert face(s, j) == F and face(s, j + 1) == F


def test_reindex_composes(cells2):
    # reindexing along a composite is reindexing twice
    for F in cells2[2][:200]:
        for phi in ((0, 0, 2), (0, 1, 1, 2), (2,), (0, 2, 2)):
            G = reindex(F, phi)
            assert validate_cell(G)
        assert reindex(reindex(F, codegeneracy(2, 1)), coface(3, 2)) == F


def test_reverse_is_an_involution(cells2):
    for F in cells2[2]:
        R = reverse_cell(F)
        assert validate_cell(R)
        assert reverse_cell(R) == F
        assert R.edge(0, 2) == span(F.size((2, 2)), F.size((0, 0)),
                                    F.edge(0, 2).rmap.values, F.edge(0, 2).lmap.values)


def test_nerve_round_trip(cells2):
    for F in cells2[2]:
        assert cell_from_nerve(nerve_from_cell(F)) == F


def test_bounded_complex_counts(complex1):
    assert len(complex1.cells(0)) == 2
    # spans with feet and apex of size <= 1: 0<-0->0, 0<-0->1, 1<-0->0, 1<-0->1, 1<-1->1
    assert len(complex1.cells(1)) == 5


def test_bounded_complex_inner_horns(complex1):
    rep = check_n1_property(complex1, 4, n_min=2, boundaries=False)
    assert rep.all_unique
    assert rep.get("L3_1").horns > 0 and rep.get("L4_2").horns > 0


def test_complete_cell_finds_the_composite():
    s, t = span(1, 2, (0, 0), (0, 1)), span(2, 1, (0, 1, 1), (0, 0, 0))
    c = compose_via_cell(s, t)
    merged = merge_faces(2, {0: cell_of_span(t), 2: cell_of_span(s)})
    sizes, known = merged
    sizes[(0, 2)] = c.size((0, 2))
    found = complete_cell(2, sizes, known)
    # one filler per labelling of the composite apex
    assert len(found) == math.factorial(c.size((0, 2)))
    assert all(spans_isomorphic(F.edge(0, 2), c.edge(0, 2)) for F in found)


def test_product_cone():
    obj, pa, pb = product_cone(2, 1)
    assert obj.size == 3
    assert span_matrix(pa).to_rows() == [[1, 0], [0, 1], [0, 0]]
    assert span_matrix(pb).to_rows() == [[0], [0], [1]]


def test_product_cone_projections_are_universal_on_matrices():
    # a span into A⊔B is determined by its two composites with the projections
    obj, pa, pb = product_cone(1, 2)
    for w in range(3):
        for s in enumerate_spans(w, 3, 2):
            m = span_matrix(s)
            ma = span_matrix(compose_spans(s, pa))
            left = [row[0] for row in m.to_rows()]
            assert [row[0] for row in ma.to_rows()] == left


@pytest.mark.parametrize("a,b", [(0, 0), (0, 1), (1, 1), (1, 2)])
def test_product_finality_small(a, b):
    for n in (0, 1):
        rep = check_product_finality(a, b, n, size_bound=1)
        assert rep.inputs > 0
        assert rep.ok and rep.unique == rep.inputs


def test_product_finality_rejects_high_n():
    with pytest.raises(ValueError):
        check_product_finality(1, 1, 2)


def test_homspace_point():
    hs = homspace(1, 1, 4)
    assert hs.aut_orders() == [1, 1, 2, 6, 24]
    assert [c.object_count for c in hs.components] == [1] * 5


def test_homspace_two_by_one():
    hs = homspace(2, 1, 1)
    assert sorted(c.matrix.to_rows() for c in hs.components) == [[[0], [0]], [[0], [1]], [[1], [0]]]
    assert hs.aut_orders() == [1, 1, 1]


def test_homspace_object_counts_sum_to_labelled_count():
    # labelled sets of size k over X x Y: (xy)^k of them
    for x, y in itertools.product(range(3), repeat=2):
        hs = homspace(x, y, 3)
        for k in range(4):
            total = sum(c.object_count for c in hs.components if c.matrix.total() == k)
            assert total == (x * y) ** k


def test_block_sum():
    m = span_matrix(compose_spans(intro_copy(), intro_add()))
    s = homspace_block_sum(m, span_matrix(identity_span(1)))
    assert (s.rows, s.cols) == (4, 5)
    assert s.to_rows()[3] == [0, 0, 0, 0, 1]
    assert s.total() == m.total() + 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.data())
def test_block_sum_is_matrix_of_disjoint_union(x1, y1, x2, y2, data):
    s = data.draw(st.sampled_from(enumerate_spans(x1, y1, 2)))
    t = data.draw(st.sampled_from(enumerate_spans(x2, y2, 2)))
    n = s.apex.size
    u = span(x1 + x2, y1 + y2, tuple(s.lmap.values) + tuple(x1 + v for v in t.lmap.values),
             tuple(s.rmap.values) + tuple(y1 + v for v in t.rmap.values))
    assert u.apex.size == n + t.apex.size
    assert span_matrix(u) == homspace_block_sum(span_matrix(s), span_matrix(t))


def test_barratt_eccles_comparison():
    for x, y in itertools.product(range(3), repeat=2):
        assert barratt_eccles_compare(x, y, 2).ok
    rep = barratt_eccles_compare(1, 1, 3)
    assert rep.components_homspace == 4 and rep.ok
