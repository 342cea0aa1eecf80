import functools
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from spancalc.errors import DimError, Mismatch
from spancalc.finset import FinSet, SetMap, classify_map
from spancalc.fibration import (
    ArrObj,
    Edge,
    arr_degeneracy,
    arr_face,
    cartesian_lift,
    classify_edges,
    cone_cell,
    enumerate_edges,
    family_d2,
    has_lift,
    identity_arr,
    inner_horn_fill_spantimes,
    is_cartesian_structural,
    problem_c0,
    project,
    run_probes,
    set_partitions,
    validate_arr_cell,
    validate_problem,
)
from spancalc.fixtures import intro_add, intro_copy
from spancalc.spanqc import cell_of_span, compose_via_cell, face, point_cell, validate_cell
from spancalc.spans import identity_span, span

# one edge per way of failing, and one that is cartesian
EMPTY_TOP = Edge(0, 0, 1, (), (), 1, 1, 1, (0,), (0,), (), (), (0,))
MISSED = Edge(1, 0, 0, (), (), 1, 0, 0, (), (), (0,), (), ())
DOUBLED = Edge(1, 2, 1, (0, 0), (0, 0), 1, 1, 1, (0,), (0,), (0,), (0, 0), (0,))
TWO_OVER_ONE = Edge(2, 2, 1, (0, 1), (0, 0), 1, 1, 1, (0,), (0,), (0, 0), (0, 0), (0,))
CARTESIAN = Edge(2, 2, 1, (0, 1), (0, 0), 1, 2, 1, (0, 0), (0, 0), (0, 0), (0, 1), (0,))


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(n)) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_cartesian_lift_over_identity():
    fiber = ArrObj(FinSet(3), FinSet(1), SetMap(FinSet(3), FinSet(1), (0, 0, 0)))
    e = cartesian_lift(identity_span(1), fiber)
    assert validate_arr_cell(e)
    assert is_cartesian_structural(e)
    d = Edge.of(e)
    assert (d.T0, d.T01, d.T1) == (3, 3, 3)
    assert classify_map(SetMap(FinSet(3), FinSet(3), d.tr)).iso


def test_cartesian_lift_pullback_size():
    base = span(1, 1, (0, 0), (0, 0))
    fiber = ArrObj(FinSet(2), FinSet(1), SetMap(FinSet(2), FinSet(1), (0, 0)))
    e = cartesian_lift(base, fiber)
    d = Edge.of(e)
    assert d.T0 == d.T01 == 4 and d.T1 == 2
    assert is_cartesian_structural(e)
    assert run_probes(e, universe_bound=2).passed


def test_cartesian_lift_rejects_wrong_fiber():
    fiber = ArrObj(FinSet(1), FinSet(2), SetMap(FinSet(1), FinSet(2), (0,)))
    with pytest.raises(Mismatch):
        cartesian_lift(identity_span(1), fiber)


def test_dim_errors():
    with pytest.raises(DimError):
        is_cartesian_structural(identity_arr(point_cell(1)))
    with pytest.raises(DimError):
        Edge.of(identity_arr(point_cell(1)))


@pytest.mark.parametrize("edge,probe", [
    (EMPTY_TOP, "element"),
    (MISSED, "topmap_surjective"),
    (DOUBLED, "topmap_injective"),
    (TWO_OVER_ONE, "pullback_injective"),
])
def test_each_probe_kills_its_example(edge, probe):
    e = edge.cell()
    assert validate_arr_cell(e)
    assert not is_cartesian_structural(e)
    rep = run_probes(e, universe_bound=2, stop_early=False)
    assert not rep.passed
    assert probe in rep.killed_by
    # the bounded families find the defect on their own too
    assert any(k.startswith("bounded") for k in rep.killed_by)


def test_cartesian_example_passes_everything():
    e = CARTESIAN.cell()
    assert is_cartesian_structural(e)
    rep = run_probes(e, universe_bound=2, stop_early=False)
    assert rep.passed and rep.killed_by == []
    assert rep.counts["bounded_m0"][0] > 0 and rep.counts["bounded_m1"][0] > 0


def test_problems_are_well_formed():
    # an empty edge out of a one-element test vertex is a valid problem over any edge
    for edge in (EMPTY_TOP, CARTESIAN, TWO_OVER_ONE):
        p = problem_c0(edge, 1, [])
        assert validate_problem(p)
    assert has_lift(problem_c0(CARTESIAN, 1, []))


def test_unused_lift_family_on_cartesian_edge():
    problems = [p for p in family_d2(CARTESIAN, 2) if validate_problem(p)]
    assert problems
    assert all(has_lift(p) for p in problems)


def test_inner_horn_identity():
    i1 = identity_arr(cell_of_span(identity_span(1)))
    c = inner_horn_fill_spantimes(i1, i1)
    assert validate_arr_cell(c)
    assert arr_face(c, 0) == i1 and arr_face(c, 2) == i1 and arr_face(c, 1) == i1


def test_inner_horn_intro():
    a, b = identity_arr(cell_of_span(intro_copy())), identity_arr(cell_of_span(intro_add()))
    c = inner_horn_fill_spantimes(a, b)
    assert validate_arr_cell(c)
    assert project(c) == compose_via_cell(intro_copy(), intro_add())
    assert c.top_cell == c.bottom_cell
    with pytest.raises(Mismatch):
        inner_horn_fill_spantimes(b, a)


def test_inner_horn_of_cartesian_edges_is_cartesian():
    base = span(1, 1, (0, 0), (0, 0))
    f2 = ArrObj(FinSet(2), FinSet(1), SetMap(FinSet(2), FinSet(1), (0, 0)))
    e12 = cartesian_lift(base, f2)
    d = Edge.of(e12)
    f1 = ArrObj(FinSet(d.T0), FinSet(1), SetMap(FinSet(d.T0), FinSet(1), d.c0))
    e01 = cartesian_lift(base, f1)
    c = inner_horn_fill_spantimes(e01, e12)
    assert validate_arr_cell(c)
    assert is_cartesian_structural(arr_face(c, 1))


def test_projection_commutes_with_faces():
    cells = [inner_horn_fill_spantimes(identity_arr(cell_of_span(s)), identity_arr(cell_of_span(t)))
             for s, t in ((intro_copy(), intro_add()), (identity_span(2), span(2, 1, (0, 1, 1), (0, 0, 0))))]
    for c in cells:
        for i in range(3):
            assert project(arr_face(c, i)) == face(project(c), i)
            assert validate_arr_cell(arr_degeneracy(c, i))


def test_cone_cell_is_valid():
    for s in (intro_copy(), identity_span(2), span(0, 2, (), ())):
        c = cone_cell(cell_of_span(s))
        assert validate_cell(c)
        assert face(c, 0) == cell_of_span(s)
        assert c.size((0, 0)) == 1


def test_sweep_bound_one():
    rep = classify_edges(set_bound=1, universe_bound=2, boundary_bound=1)
    assert rep.total == sum(1 for _ in enumerate_edges(1))
    assert rep.ok and rep.disagreements == []
    assert rep.structural == rep.passing == 8
    assert rep.boundary_problems > 0


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_structural_test_matches_probes_on_random_edges(data):
    d = data.draw(st.sampled_from(_sampled_edges()))
    e = d.cell()
    assert is_cartesian_structural(e) == run_probes(e, universe_bound=2).passed


@functools.lru_cache(maxsize=None)
def _sampled_edges():
    # every 37th labelled edge with sets of size <= 2
    return tuple(itertools.islice(enumerate_edges(2), 0, None, 37))
