"""Command line front end.

Exit codes: 0 pass, 1 a checked property failed, 2 bad input, 3 semantic
mismatch (feet or shapes that do not fit together).
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from dataclasses import dataclass

from . import fibration, monoid, spanqc
from .errors import FootMismatch, ShapeError, SpanCalcError
from .finset import FinSet, SetMap
from .fixtures import NAMED
from .parallel import thread_count
from .serialize import ParseError, cell_to_dot, dumps, loads, span_to_dot, to_json
from .simplex import check_n1_property, cyclic_group_category, nerve_category, poset_category
from .spans import (
    Span1,
    all_labelled_spans,
    automorphism_2cells,
    automorphism_count,
    compose_spans,
    enumerate_spans,
    matmul,
    span,
    span_matrix,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3
SUITES = ("quasicat", "cartesian", "products", "monoids", "homspaces")
DEFAULT_SIZE = {"quasicat": 2, "cartesian": 2, "products": 2, "monoids": 3, "homspaces": 2}


class InputError(Exception):
    pass


@dataclass
class Config:
    size_bound: int | None = None
    apex_bound: int | None = None
    dim_cap: int = 4
    monoids: tuple = ()
    fmt: str = "json"
    seed: int = 0
    inject_fault: bool = False

    def __post_init__(self):
        for name in ("size_bound", "apex_bound"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InputError(f"{name} must be >= 0")
        if not 0 <= self.dim_cap <= 6:
            raise InputError("dim_cap must be between 0 and 6")


def emit(data, out=None):
    out = out or sys.stdout
    out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")


def load_object(ref):
    """A JSON file, or @name for one of the built-in fixtures."""
    if ref.startswith("@"):
        name = ref[1:]
        if name == "intro-cell":
            return spanqc.compose_via_cell(NAMED["intro-copy"](), NAMED["intro-add"]())
        if name not in NAMED:
            raise InputError(f"unknown fixture {name!r}; known: intro-cell, {', '.join(sorted(NAMED))}")
        return NAMED[name]()
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    try:
        return loads(text)
    except ParseError as exc:
        raise InputError(str(exc)) from exc


def load_span(ref):
    obj = load_object(ref)
    if not isinstance(obj, Span1):
        raise InputError(f"{ref} does not hold a span")
    return obj


# ---------------------------------------------------------------------------
# Simple commands


def cmd_compose(args):
    s, t = load_span(args.first), load_span(args.second)
    c = compose_spans(s, t)
    if args.format == "dot":
        sys.stdout.write(span_to_dot(c, "composite"))
    else:
        emit({"composite": to_json(c), "matrix": to_json(span_matrix(c))})
    return EXIT_PASS


def cmd_matrix(args):
    emit(to_json(span_matrix(load_span(args.span))))
    return EXIT_PASS


def cmd_eval(args):
    s = load_span(args.span)
    try:
        M = monoid.get_monoid(args.monoid)
    except KeyError as exc:
        raise InputError(str(exc)) from exc
    try:
        vec = tuple(int(v) for v in args.vector.split(",")) if args.vector else ()
    except ValueError as exc:
        raise InputError(f"bad vector {args.vector!r}") from exc
    try:
        out = monoid.eval_span(s, M, vec)
    except SpanCalcError as exc:
        raise InputError(str(exc)) from exc
    emit({"monoid": M.name, "input": list(vec), "output": list(out)})
    return EXIT_PASS


def cmd_homspace(args):
    bound = 4 if args.apex_bound is None else args.apex_bound
    emit(spanqc.homspace(args.X, args.Y, bound).to_dict())
    return EXIT_PASS


def cmd_products(args):
    bound = 2 if args.size_bound is None else args.size_bound
    rep = spanqc.check_product_finality(args.A, args.B, args.n, bound)
    emit(rep.to_dict())
    return EXIT_PASS if rep.ok else EXIT_FAIL


def cmd_export(args):
    obj = load_object(args.object)
    if args.format == "dot":
        if isinstance(obj, Span1):
            text = span_to_dot(obj)
        elif isinstance(obj, spanqc.SpanCell):
            text = cell_to_dot(obj)
        else:
            raise InputError("DOT export handles spans and cells")
    else:
        text = dumps(obj) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# Verification suites


def prop(name, passed, **detail):
    return {"name": name, "pass": bool(passed), **detail}


def info(name, **detail):
    return {"name": name, "pass": None, **detail}


def _corrupt(values, index=0):
    values = list(values)
    if len(values) > 1:
        values[index], values[index + 1] = values[index + 1], values[index]
    return tuple(values)


def suite_quasicat(cfg):
    b = DEFAULT_SIZE["quasicat"] if cfg.size_bound is None else cfg.size_bound
    threads = thread_count()
    out = []
    cell = spanqc.compose_via_cell(NAMED["intro-copy"](), NAMED["intro-add"]())
    if cfg.inject_fault:
        vals = list(cell.values)
        vals[0] = tuple(reversed(vals[0]))
        cell = spanqc.SpanCell(cell.n, cell.sizes, tuple(vals))
    out.append(prop("fixture_cell_valid", spanqc.validate_cell(cell)))
    if cfg.dim_cap >= 3:
        X = spanqc.BoundedSpanComplex(b, cfg.dim_cap, threads)
        rep = check_n1_property(X, min(cfg.dim_cap, 4), 3, outer=False, boundaries=True)
        out.append(prop("inner_horns_unique", rep.all_unique, counts=rep.to_dict()))
        tf = spanqc.theta_formula_check(b)
        ok = all(v["unique"] == v["horns"] and v["agree"] == v["horns"] for v in tf.values())
        out.append(prop("filler_formula_n3", ok, counts={str(k): v for k, v in tf.items()}))
        rng = random.Random(cfg.seed)
        cells3 = X.cells(3)
        sample = [cells3[rng.randrange(len(cells3))] for _ in range(200)] if cells3 else []
        trips = all(spanqc.cell_from_nerve(spanqc.nerve_from_cell(F)) == F for F in sample)
        out.append(prop("nerve_round_trip_sample", trips, sampled=len(sample), seed=cfg.seed))
    z2 = nerve_category(cyclic_group_category(2), N=5)
    poset = nerve_category(poset_category(4), N=5)
    for label, X in (("z2", z2), ("poset4", poset)):
        rep4 = check_n1_property(X, 4, 4, outer=True, boundaries=False)
        outer4 = [e for e in rep4.entries if e.k in (0, 4)]
        out.append(prop(f"nerve_{label}_outer_n4_unique", all(e.unique for e in outer4),
                        counts=[e.to_dict() for e in outer4]))
        rep3 = check_n1_property(X, 3, 3, outer=True, boundaries=False)
        outer3 = [e.to_dict() for e in rep3.entries if e.k in (0, 3)]
        out.append(info(f"nerve_{label}_outer_n3", counts=outer3))
    return out


def suite_cartesian(cfg):
    b = DEFAULT_SIZE["cartesian"] if cfg.size_bound is None else cfg.size_bound
    u = 3 if cfg.apex_bound is None else cfg.apex_bound
    out = []
    base = span(2, 2, (0, 1, 1), (0, 0, 1))
    arrow = SetMap(FinSet(3), FinSet(2), (0, 1, 1))
    lift = fibration.cartesian_lift(base, fibration.ArrObj(FinSet(3), FinSet(2), arrow))
    if cfg.inject_fault:
        # send two elements of the new top set to the same point: still a cell, no longer cartesian
        d = fibration.Edge.of(lift)
        tl = (d.tl[1],) + d.tl[1:]
        c0 = tuple(d.bl[d.c01[a]] for a in range(d.T01)) if d.T0 == d.T01 else d.c0
        lift = fibration.Edge(d.T0, d.T01, d.T1, tl, d.tr, d.B0, d.B01, d.B1, d.bl, d.br,
                              c0, d.c01, d.c1).cell()
    fixture_ok = fibration.validate_arr_cell(lift) and fibration.is_cartesian_structural(lift) \
        and fibration.probe_battery(lift, u)
    out.append(prop("fixture_lift_cartesian", fixture_ok))
    rep = fibration.classify_edges(b, u, min(b, 2))
    out.append(prop("structural_iff_probes", rep.agree == rep.total, report=rep.to_dict()))
    out.append(prop("boundary_family_lifts", rep.boundary_failures == 0,
                    problems=rep.boundary_problems, failures=rep.boundary_failures))
    return out


def suite_products(cfg):
    b = DEFAULT_SIZE["products"] if cfg.size_bound is None else cfg.size_bound
    out = []
    obj, pa, pb = spanqc.product_cone(2, 3)
    if cfg.inject_fault:
        pa = span(obj, 2, pa.lmap.values, (0, 0))
    out.append(prop("fixture_projections_collapsing",
                    monoid.is_collapsing_span(pa) and monoid.is_collapsing_span(pb)))
    for n in (0, 1):
        reports = [spanqc.check_product_finality(a, c, n, b) for a in range(b + 1) for c in range(b + 1)]
        out.append(prop(f"finality_n{n}", all(r.ok for r in reports),
                        inputs=sum(r.inputs for r in reports),
                        failures=sum(len(r.failures) for r in reports)))
    return out


def matrix_functor_report(bound):
    pairs = fails = 0
    sizes = range(bound + 1)
    table = {(x, y): enumerate_spans(x, y, bound) for x in sizes for y in sizes}
    for x, y, z in itertools.product(sizes, repeat=3):
        for s in table[(x, y)]:
            ms = span_matrix(s)
            for t in table[(y, z)]:
                pairs += 1
                fails += span_matrix(compose_spans(s, t)) != matmul(ms, span_matrix(t))
    return pairs, fails


def collapsing_report(max_elements):
    total = agree = 0
    for a in range(max_elements + 1):
        for c in range(max_elements + 1):
            for f in monoid.all_pointed_maps(a, c):
                total += 1
                agree += monoid.is_collapsing_pointed(f) == monoid.is_collapsing_span(monoid.pointed_to_span(f))
    return total, agree


def suite_monoids(cfg):
    b = DEFAULT_SIZE["monoids"] if cfg.size_bound is None else cfg.size_bound
    out = []
    intro = NAMED["intro"]()
    if cfg.inject_fault:
        intro = span(3, 4, intro.lmap.values, _corrupt(intro.rmap.values, 1))
    got = monoid.eval_span(intro, monoid.nat_truncated(15), (1, 2, 3))
    out.append(prop("fixture_intro_eval", got == (3, 3, 0, 8), output=list(got)))
    pairs, fails = matrix_functor_report(b)
    out.append(prop("matrix_functor", fails == 0, pairs=pairs, failures=fails))
    names = cfg.monoids or tuple(monoid.catalog())
    for name in names:
        rep = monoid.model_functoriality_check(monoid.get_monoid(name), b)
        out.append(prop(f"model_{name}", rep.ok, report=rep.to_dict()))
    total, agree = collapsing_report(b)
    out.append(prop("collapsing_square", agree == total, pointed_maps=total))
    free = [monoid.free_property_check(x, 2, monoid.get_monoid(n)).to_dict()
            for x in (0, 1, 2) for n in ("bool_or", "z3", "max3")]
    out.append(prop("free_model_property", all(r["ok"] for r in free), checks=len(free)))
    return out


def suite_homspaces(cfg):
    b = DEFAULT_SIZE["homspaces"] if cfg.size_bound is None else cfg.size_bound
    apex = 4 if cfg.apex_bound is None else cfg.apex_bound
    out = []
    orders = spanqc.homspace(1, 1, apex).aut_orders()
    expected = [1, 1, 2, 6, 24, 120, 720][:apex + 1]
    out.append(prop("point_homspace_aut_orders", orders == expected, orders=orders))
    reports = [spanqc.barratt_eccles_compare(x, y, b).to_dict() for x in range(b + 1) for y in range(b + 1)]
    out.append(prop("barratt_eccles", all(r["ok"] for r in reports), pairs=len(reports)))
    bad = checked = 0
    corrupted = not cfg.inject_fault
    for x in range(3):
        for y in range(3):
            for s in enumerate_spans(x, y, apex):
                rep = s
                legs = list(zip(s.lmap.values, s.rmap.values))
                if not corrupted and len(legs) >= 2 and legs.count(legs[0]) == 1:
                    # move a lone element into another fibre: the automorphism count changes
                    legs[0] = legs[1]
                    rep = span(x, y, [a for a, _ in legs], [b for _, b in legs])
                    corrupted = True
                checked += 1
                bad += len(automorphism_2cells(rep)) != automorphism_count(span_matrix(s))
    out.append(prop("aut_formula", bad == 0, spans=checked, mismatches=bad))
    return out


SUITE_FUNCS = {
    "quasicat": suite_quasicat,
    "cartesian": suite_cartesian,
    "products": suite_products,
    "monoids": suite_monoids,
    "homspaces": suite_homspaces,
}


def cmd_check(args):
    cfg = Config(args.size_bound, args.apex_bound, args.dim_cap,
                 tuple(args.monoid or ()), "json", args.seed, args.inject_fault)
    for name in cfg.monoids:
        try:
            monoid.get_monoid(name)
        except KeyError as exc:
            raise InputError(str(exc)) from exc
    props = SUITE_FUNCS[args.suite](cfg)
    passed = all(p["pass"] is not False for p in props)
    emit({"suite": args.suite, "pass": passed, "properties": props})
    return EXIT_PASS if passed else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="spancalc", description="Spans of finite sets: composition, "
                                "evaluation on commutative monoids and exhaustive checks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compose", help="compose two spans (first, then second)")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--format", choices=("json", "dot"), default="json")
    c.set_defaults(func=cmd_compose)

    m = sub.add_parser("matrix", help="matrix of fibre counts of a span")
    m.add_argument("span")
    m.set_defaults(func=cmd_matrix)

    e = sub.add_parser("eval", help="evaluate a span on a vector in a commutative monoid")
    e.add_argument("span")
    e.add_argument("--monoid", default="nat_trunc")
    e.add_argument("--vector", default="")
    e.set_defaults(func=cmd_eval)

    h = sub.add_parser("homspace", help="components of the groupoid of spans X <-> Y")
    h.add_argument("X", type=int)
    h.add_argument("Y", type=int)
    h.add_argument("--apex-bound", type=int)
    h.set_defaults(func=cmd_homspace)

    pr = sub.add_parser("products", help="check that A ⊔ B is a product")
    pr.add_argument("A", type=int)
    pr.add_argument("B", type=int)
    pr.add_argument("--n", type=int, choices=(0, 1), default=1)
    pr.add_argument("--size-bound", type=int)
    pr.set_defaults(func=cmd_products)

    k = sub.add_parser("check", help="run a verification suite")
    k.add_argument("suite", choices=SUITES)
    k.add_argument("--size-bound", type=int)
    k.add_argument("--apex-bound", type=int)
    k.add_argument("--dim-cap", type=int, default=4)
    k.add_argument("--monoid", action="append", help="restrict the monoid suite (repeatable)")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--inject-fault", action="store_true", help="corrupt the suite's fixture (negative control)")
    k.set_defaults(func=cmd_check)

    x = sub.add_parser("export", help="write an object as JSON or DOT")
    x.add_argument("object", help="a JSON file or @fixture (@intro, @intro-cell, ...)")
    x.add_argument("--format", choices=("json", "dot"), default="json")
    x.add_argument("--output")
    x.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (FootMismatch, ShapeError) as exc:
        sys.stderr.write(f"mismatch: {exc}\n")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
