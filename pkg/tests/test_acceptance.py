"""End-to-end acceptance checks at full size.

Each test prints one line, PASS or FAIL, with the measured numbers and the
wall time against its budget, then asserts the same condition.
"""

import io
import os
import time
from contextlib import redirect_stdout

import pytest

from spancalc import cli, monoid, spanqc
from spancalc.fibration import classify_edges
from spancalc.fixtures import intro_add, intro_copy
from spancalc.simplex import check_n1_property, cyclic_group_category, nerve_category, poset_category
from spancalc.spans import compose_spans, span_matrix


@pytest.fixture
def report(capsys):
    def emit(tag, ok, started, budget, detail=""):
        elapsed = time.perf_counter() - started
        ok = bool(ok) and elapsed < budget
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {tag}: {detail} [{elapsed:.1f}s of {budget}s]")
        return ok
    return emit


def test_c1_intro_example(report):
    t = time.perf_counter()
    c = compose_spans(intro_copy(), intro_add())
    rows = span_matrix(c).to_rows()
    out = monoid.eval_span(c, monoid.nat_truncated(), (1, 2, 3))
    ok = ((c.left_foot.size, c.apex.size, c.right_foot.size) == (3, 8, 4)
          and rows == [[1, 0, 0, 3], [1, 0, 0, 1], [0, 1, 0, 1]] and out == (3, 3, 0, 8))
    assert report("C1 intro example", ok, t, 1, f"shape 3<-{c.apex.size}->4, rows {rows}, eval {out}")


def test_c2_matrix_functor(report):
    t = time.perf_counter()
    pairs, fails = cli.matrix_functor_report(3)
    assert report("C2 matrix functor", fails == 0, t, 60, f"{pairs} composable pairs, {fails} mismatches")


def test_c3_span_is_21(report):
    t = time.perf_counter()
    X = spanqc.BoundedSpanComplex(2, 4)
    rep = check_n1_property(X, 4, 3, outer=False, boundaries=False)
    inner = {e.shape: (e.horns, e.fill1) for e in rep.entries}
    tf = spanqc.theta_formula_check(2)
    formula_ok = tf[1]["agree"] == tf[1]["horns"] > 0
    detail = f"inner horns (count, uniquely filled) {inner}; theta_023 formula agrees on {tf[1]['agree']}/{tf[1]['horns']}"
    assert report("C3 (2,1)-property of Span", rep.all_unique and formula_ok, t, 600, detail)


def _nerves():
    return {"Z/2": nerve_category(cyclic_group_category(2), N=4),
            "poset 0<1<2<3": nerve_category(poset_category(4), N=4)}


def test_c4_outer_horns_n4(report):
    t = time.perf_counter()
    parts, ok = [], True
    for name, X in _nerves().items():
        for k in (0, 4):
            counts = dict(X.horn_fill_counts(4, k))
            parts.append(f"{name} L4_{k} {counts}")
            ok = ok and set(counts) == {1}
    assert report("C4 outer horns n=4 fill uniquely", ok, t, 60, "; ".join(parts))


def test_c4b_outer_horn_n3_negative_control(report):
    # expected to fail: in both nerves every 3-dimensional outer horn already
    # fills uniquely, so no counterexample exists in these two categories
    t = time.perf_counter()
    parts, found = [], False
    for name, X in _nerves().items():
        for k in (0, 3):
            counts = dict(X.horn_fill_counts(3, k))
            parts.append(f"{name} L3_{k} {counts}")
            found = found or set(counts) != {1}
    assert report("C4b some outer horn at n=3 has !=1 fillers", found, t, 60, "; ".join(parts))


def test_c5_cartesian_classification(report):
    t = time.perf_counter()
    rep = classify_edges(set_bound=2, universe_bound=3, boundary_bound=2)
    d = rep.to_dict()
    detail = (f"{d['total']} edges in {d['classes']} classes, {d['structural']} structural, "
              f"{d['passing']} pass probes, {d['disagreements']} discrepancies; killed by {d['kills']}")
    assert report("C5 cartesian iff probes", rep.agree == rep.total and not rep.disagreements, t, 600, detail)


def test_c6_products(report):
    t = time.perf_counter()
    reports = [spanqc.check_product_finality(a, b, n, 2) for n in (0, 1) for a in range(3) for b in range(3)]
    inputs = sum(r.inputs for r in reports)
    failures = sum(len(r.failures) for r in reports)
    unique = sum(r.unique for r in reports)
    ok = all(r.ok for r in reports)
    assert report("C6 product finality", ok, t, 300,
                  f"{len(reports)} cases, {inputs} inputs, {failures} failures, {unique} uniquely extended")


def test_c7_homspaces(report):
    t = time.perf_counter()
    orders = spanqc.homspace(1, 1, 4).aut_orders()
    compares = [spanqc.barratt_eccles_compare(x, y, 2) for x in range(3) for y in range(3)]
    ok = orders == [1, 1, 2, 6, 24] and all(c.ok for c in compares)
    assert report("C7 homspaces", ok, t, 60,
                  f"aut orders {orders}; Barratt-Eccles comparison ok for {sum(c.ok for c in compares)}/9 pairs")


def test_c8_discrete_models(report):
    t = time.perf_counter()
    parts, ok = [], True
    for name, M in monoid.catalog().items():
        rep = monoid.model_functoriality_check(M, 3)
        ok = ok and rep.ok
        parts.append(f"{name} {rep.composition_failures}+{rep.labelling_failures}")
    assert report("C8 model functoriality", ok, t, 300, "failures per monoid (composition+labelling): " + ", ".join(parts))


def test_c9_collapsing_square(report):
    t = time.perf_counter()
    total, agree = cli.collapsing_report(3)
    assert report("C9 collapsing square", agree == total, t, 10, f"{agree}/{total} pointed maps agree")


SMALL = {"quasicat": "1", "cartesian": "1", "products": "1", "monoids": "2", "homspaces": "2"}


def _suite_bytes(suite, threads, monkeypatch):
    monkeypatch.setenv("SPANCALC_THREADS", str(threads))
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(["check", suite, "--size-bound", SMALL[suite]])
    return code, buf.getvalue()


def test_c10_determinism(report, monkeypatch):
    t = time.perf_counter()
    spanqc.nerve_horn_counts.cache_clear()
    parts, ok = [], True
    for suite in cli.SUITES:
        runs = [_suite_bytes(suite, threads, monkeypatch) for threads in (1, 2, 1)]
        same = len({out for _, out in runs}) == 1 and all(code == 0 for code, _ in runs)
        ok = ok and same
        parts.append(f"{suite} {'identical' if same else 'DIFFERENT'}")
    assert report("C10 determinism across runs and thread counts", ok, t, 600, ", ".join(parts))
