import itertools

import pytest
from hypothesis import given, settings, strategies as st

from spancalc.errors import CompatibilityFail, DimOverCap, InvalidCategory, NotMonotone
from spancalc.finset import FinSet
from spancalc.simplex import (
    CategoryBicategory,
    FiniteCategory,
    Nerve2Data,
    TruncatedSSet,
    check_n1_property,
    coface,
    cyclic_group_category,
    enumerate_horn_maps,
    filler_formula_21,
    filler_formula_32,
    fillers,
    induced,
    interval_poset,
    is_valid_nerve_cell,
    nerve_2cat,
    nerve_category,
    nerve_degeneracy,
    poset_category,
)
from spancalc.spans import (
    SpanBicategory,
    automorphism_2cells,
    compose_spans,
    hcompose2,
    identity_2cell,
    identity_span,
    isomorphisms,
    span,
    vcompose2,
)


@pytest.fixture(scope="module")
def span_nerve():
    return nerve_2cat(SpanBicategory(1), 3)


def test_interval_poset():
    assert len(interval_poset(1)) == 3
    assert len(interval_poset(2)) == 6
    P = interval_poset(2)
    assert P.leq((0, 2), (1, 1)) and not P.leq((1, 1), (0, 2))


def test_induced_and_cofaces():
    assert induced(coface(2, 1))[(0, 1)] == (0, 2)
    with pytest.raises(NotMonotone):
        induced((1, 0))


def test_terminal_nerve():
    X = nerve_category(poset_category(1), N=4)
    assert [len(X.cells[d]) for d in range(5)] == [1] * 5


def test_nerve_of_arrow():
    X = nerve_category(poset_category(2), N=3)
    assert len(X.nondegenerate(0)) == 2
    assert len(X.nondegenerate(1)) == 1
    assert X.nondegenerate(2) == []
    # no Λ²₁ horn with both faces nondegenerate
    nondeg = set(X.nondegenerate(1))
    assert not [h for h in enumerate_horn_maps(X, 2, 1) if all(f in nondeg for f in h.faces if f is not None)]


def test_cyclic_group_nerve_sizes():
    X = nerve_category(cyclic_group_category(2), N=4)
    assert [len(X.cells[d]) for d in range(5)] == [1, 2, 4, 8, 16]


def test_invalid_category_rejected():
    with pytest.raises(InvalidCategory):
        FiniteCategory(("a",), {"e": ("a", "a"), "f": ("a", "a")}, {"a": "e"},
                       {("e", "e"): "e", ("e", "f"): "f", ("f", "e"): "e", ("f", "f"): "f"})


def test_nerve_inner_horns_unique():
    for cat in (poset_category(3), cyclic_group_category(3)):
        X = nerve_category(cat, N=4)
        assert check_n1_property(X, 4, n_min=2, boundaries=False).all_unique
        assert check_n1_property(X, 4, n_min=3).all_unique
    # in a poset every triangle commutes; in a group a 2-boundary usually does not
    assert check_n1_property(nerve_category(poset_category(3), N=2), 2, n_min=2).all_unique
    b2 = check_n1_property(nerve_category(cyclic_group_category(3), N=2), 2, n_min=2).get("B2")
    assert (b2.horns, b2.fill1, b2.fill0) == (27, 9, 18)


def test_nerve_outer_horns_n4():
    for cat in (poset_category(4), cyclic_group_category(2)):
        X = nerve_category(cat, N=4)
        for k in (0, 4):
            counts = X.horn_fill_counts(4, k)
            assert set(counts) == {1}


def test_dim_over_cap():
    X = nerve_category(poset_category(2), N=2)
    with pytest.raises(DimOverCap):
        enumerate_horn_maps(X, 3, 1)


def test_nerve_2cat_of_category_matches_nerve():
    cat = poset_category(3)
    A = nerve_2cat(CategoryBicategory(cat), 3)
    B = nerve_category(cat, N=3)
    assert [len(A.cells[d]) for d in range(4)] == [len(B.cells[d]) for d in range(4)]
    cat = cyclic_group_category(2)
    A = nerve_2cat(CategoryBicategory(cat), 3)
    assert [len(A.cells[d]) for d in range(4)] == [1, 2, 4, 8]


def test_span_nerve_is_21(span_nerve):
    rep = check_n1_property(span_nerve, 3)
    assert rep.all_unique
    assert rep.get("L3_1").horns > 0


def test_filler_formulas_match_enumeration(span_nerve):
    B = SpanBicategory(1)
    for k, formula in ((1, filler_formula_21), (2, filler_formula_32)):
        for h in enumerate_horn_maps(span_nerve, 3, k):
            found = fillers(span_nerve, h)
            assert found == [formula(h, B)]


def test_formula_with_identity_thetas():
    cat = poset_category(4)
    X = nerve_2cat(CategoryBicategory(cat), 3)
    for h in enumerate_horn_maps(X, 3, 1):
        filled = filler_formula_21(h, CategoryBicategory(cat))
        assert filled.theta(0, 2, 3)[0] == "id"


def _one_by_two_cells():
    # X0 -> X1 -> X2 -> X3 over the point, with the middle 1-cell 1 <- 2 -> 1
    B = SpanBicategory(2)
    one, s2 = identity_span(1), span(1, 1, (0, 0), (0, 0))
    mor = {(0, 1): one, (1, 2): s2, (2, 3): one}
    mor[(0, 2)] = compose_spans(one, s2)
    mor[(1, 3)] = compose_spans(s2, one)
    mor[(0, 3)] = s2
    keys = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    options = [isomorphisms(compose_spans(mor[(i, j)], mor[(j, k)]), mor[(i, k)]) for i, j, k in keys]
    cells = [Nerve2Data.build([FinSet(1)] * 4, mor, dict(zip(keys, choice)))
             for choice in itertools.product(*options)]
    return B, cells


def test_theta_compatibility_cuts_choices_in_half():
    # any three thetas determine the fourth, so 2^4 choices leave 2^3 valid cells
    B, cells = _one_by_two_cells()
    valid = [c for c in cells if is_valid_nerve_cell(B, c)]
    assert len(cells) == 16 and len(valid) == 8


def test_broken_theta_is_rejected():
    B, cells = _one_by_two_cells()
    bad = next(c for c in cells if not is_valid_nerve_cell(B, c))
    with pytest.raises(CompatibilityFail):
        nerve_2cat(B, 3, cells=[[], [], [], [bad]])


def test_removed_cell_leaves_unfilled_horn(span_nerve):
    B = SpanBicategory(1)
    X = span_nerve
    victim = X.nondegenerate(3)[0]
    cells = [list(level) for level in X.cells]
    cells[3].remove(victim)
    Y = TruncatedSSet(3, cells, lambda c, d, i: c.face(i), lambda c, d, i: nerve_degeneracy(B, c, i),
                      check=False)
    rep = check_n1_property(Y, 3)
    assert not rep.all_unique
    assert all(e.fill_many == 0 for e in rep.entries)
    assert any(e.fill0 for e in rep.failures())


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_whiskers_commute(data):
    # (b * id) ∘ (id * a) = (id * a) ∘ (b * id): the commutation used for theta_012 and theta_234
    x = data.draw(st.integers(1, 2))
    n = data.draw(st.integers(0, 3))
    m = data.draw(st.integers(0, 3))
    s = span(x, 1, [0] * n if x == 1 else data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)), [0] * n)
    t = span(1, 1, [0] * m, [0] * m)
    a = data.draw(st.sampled_from(automorphism_2cells(s)))
    b = data.draw(st.sampled_from(automorphism_2cells(t)))
    lhs = vcompose2(hcompose2(b, identity_2cell(s)), hcompose2(identity_2cell(t), a))
    rhs = vcompose2(hcompose2(identity_2cell(t), a), hcompose2(b, identity_2cell(s)))
    assert lhs == rhs
