"""Span operations evaluated on finite commutative monoids, pointed maps, free models."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BadIndex, InvalidMonoid, ShapeError
from .finset import FinSet
from .spans import NatMatrix, all_labelled_spans, compose_spans, enumerate_spans, matmul, span, span_matrix


@dataclass(frozen=True)
class CommMonoid:
    carrier: FinSet
    table: tuple  # table[a][b] = a * b
    unit: int
    name: str = ""

    def __post_init__(self):
        n = self.carrier.size
        table = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != n or any(len(r) != n for r in table):
            raise InvalidMonoid("operation table has the wrong shape")
        if not 0 <= self.unit < n:
            raise InvalidMonoid("unit outside the carrier")
        for a in range(n):
            if table[self.unit][a] != a:
                raise InvalidMonoid(f"unit law fails at {a}")
            for b in range(n):
                if not 0 <= table[a][b] < n:
                    raise InvalidMonoid("operation leaves the carrier")
                if table[a][b] != table[b][a]:
                    raise InvalidMonoid(f"not commutative at {a}, {b}")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise InvalidMonoid(f"not associative at {a}, {b}, {c}")

    @property
    def size(self):
        return self.carrier.size

    def op(self, a, b):
        return self.table[a][b]

    def array(self):
        return np.array(self.table, dtype=np.int64)


def monoid_from_op(n, op, unit, name=""):
    return CommMonoid(FinSet(n), tuple(tuple(op(a, b) for b in range(n)) for a in range(n)), unit, name)


def cyclic_monoid(k):
    return monoid_from_op(k, lambda a, b: (a + b) % k, 0, f"z{k}")


def nat_truncated(cap=15):
    """{0, ..., cap} under addition, saturating at cap."""
    return monoid_from_op(cap + 1, lambda a, b: min(a + b, cap), 0, f"nat_trunc{cap}")


def catalog():
    return {
        "trivial": monoid_from_op(1, lambda a, b: 0, 0, "trivial"),
        "bool_or": monoid_from_op(2, lambda a, b: a | b, 0, "bool_or"),
        "bool_and": monoid_from_op(2, lambda a, b: a & b, 1, "bool_and"),
        "z2": cyclic_monoid(2),
        "z3": cyclic_monoid(3),
        "z4": cyclic_monoid(4),
        "nat_trunc": nat_truncated(15),
        "max3": monoid_from_op(3, max, 0, "max3"),
    }


def get_monoid(name):
    cat = catalog()
    if name in cat:
        return cat[name]
    if name.startswith("nat_trunc") and name[len("nat_trunc"):].isdigit():
        return nat_truncated(int(name[len("nat_trunc"):]))
    if name.startswith("z") and name[1:].isdigit() and int(name[1:]) > 0:
        return cyclic_monoid(int(name[1:]))
    raise KeyError(f"unknown monoid {name!r}; known: {', '.join(sorted(cat))}")


# ---------------------------------------------------------------------------
# Evaluation


def eval_span(s, M, A):
    """(Σ_g ∘ Δ_f)(A): y gets the product of A at the left ends of the elements over y."""
    A = tuple(A)
    if len(A) != s.left_foot.size:
        raise BadIndex(f"vector of length {len(A)} for a span out of a set of size {s.left_foot.size}")
    if any(not 0 <= a < M.size for a in A):
        raise BadIndex("vector entry outside the monoid")
    out = [M.unit] * s.right_foot.size
    for x, y in zip(s.lmap.values, s.rmap.values):
        out[y] = M.table[out[y]][A[x]]
    return tuple(out)


def all_vectors(M, n):
    """Every vector in M^n as the rows of an array, in lexicographic order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(M.size)] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def eval_span_batch(s, M, V, table=None):
    """eval_span on every row of V at once."""
    table = M.array() if table is None else table
    out = np.full((V.shape[0], s.right_foot.size), M.unit, dtype=np.int64)
    for x, y in zip(s.lmap.values, s.rmap.values):
        out[:, y] = table[out[:, y], V[:, x]]
    return out


def ho_matrix(s):
    return span_matrix(s)


def ho_compose(m1, m2):
    """First m1 then m2: the matrix product m1 · m2."""
    if m1.cols != m2.rows:
        raise ShapeError(f"cannot compose {m1.rows}x{m1.cols} with {m2.rows}x{m2.cols}")
    return matmul(m1, m2)


@dataclass
class FunctorialityReport:
    monoid: str
    size_bound: int
    compositions: int = 0
    composition_failures: int = 0
    labelled_spans: int = 0
    labelling_failures: int = 0

    @property
    def ok(self):
        return self.composition_failures == 0 and self.labelling_failures == 0

    def to_dict(self):
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def model_functoriality_check(M, size_bound=2):
    """Composition of spans goes to composition of functions M^X -> M^Z, and the
    function of a span depends only on its matrix.

    Spans range over iso classes with feet and apex of size <= size_bound;
    the labelling check runs over every labelled span of that size.
    """
    rep = FunctorialityReport(M.name, size_bound)
    table = M.array()
    sizes = range(size_bound + 1)
    vectors = {n: all_vectors(M, n) for n in sizes}
    spans = {(x, y): enumerate_spans(x, y, size_bound) for x in sizes for y in sizes}
    evaluated = {}
    for (x, y), ss in spans.items():
        for k, s in enumerate(ss):
            evaluated[(x, y, k)] = eval_span_batch(s, M, vectors[x], table)
    for x, y, z in itertools.product(sizes, repeat=3):
        for i, s in enumerate(spans[(x, y)]):
            first = evaluated[(x, y, i)]
            for t in spans[(y, z)]:
                st = compose_spans(s, t)
                lhs = eval_span_batch(st, M, vectors[x], table)
                rhs = eval_span_batch(t, M, first, table)
                rep.compositions += 1
                rep.composition_failures += not np.array_equal(lhs, rhs)
    for x, y in itertools.product(sizes, repeat=2):
        canon = {span_matrix(s): k for k, s in enumerate(spans[(x, y)])}
        for s in all_labelled_spans(x, y, size_bound):
            rep.labelled_spans += 1
            ref = evaluated[(x, y, canon[span_matrix(s)])]
            rep.labelling_failures += not np.array_equal(eval_span_batch(s, M, vectors[x], table), ref)
    return rep


# ---------------------------------------------------------------------------
# Pointed maps


@dataclass(frozen=True)
class PointedMap:
    """A map A₊ -> B₊ preserving the basepoint, on the non-base elements.

    values[a] is an element of B, or None when a goes to the basepoint.
    """

    dom: int
    cod: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.dom:
            raise BadIndex(f"{len(self.values)} values for a pointed set with {self.dom} elements")
        if any(v is not None and not 0 <= v < self.cod for v in self.values):
            raise BadIndex("value outside the target")

    def __call__(self, a):
        return self.values[a]


def identity_pointed(n):
    return PointedMap(n, n, tuple(range(n)))


def compose_pointed(g, f):
    """g after f."""
    if f.cod != g.dom:
        raise ShapeError("pointed maps do not compose")
    return PointedMap(f.dom, g.cod, tuple(None if v is None else g.values[v] for v in f.values))


def all_pointed_maps(a, b):
    for values in itertools.product([None, *range(b)], repeat=a):
        yield PointedMap(a, b, values)


def pointed_to_span(f):
    """A <- f⁻¹(B) -> B: left leg the subset inclusion, right leg f on it."""
    kept = [a for a, v in enumerate(f.values) if v is not None]
    return span(f.dom, f.cod, kept, [f.values[a] for a in kept])


def is_collapsing_span(s):
    lv, rv = s.lmap.values, s.rmap.values
    return len(set(lv)) == len(lv) and len(set(rv)) == len(rv) == s.right_foot.size


def is_collapsing_pointed(f):
    """Every element of B (not the basepoint) has exactly one preimage."""
    counts = [0] * f.cod
    for v in f.values:
        if v is not None:
            counts[v] += 1
    return all(c == 1 for c in counts)


# ---------------------------------------------------------------------------
# Free models


@dataclass
class FreeModel:
    """Y ↦ ℕ-matrices X x Y under entrywise addition, truncated at ``cap``."""

    X: int
    cap: int = 15

    def elements(self, Y):
        return list(itertools.product(range(self.cap + 1), repeat=self.X * Y))

    def add(self, u, v):
        return tuple(min(a + b, self.cap) for a, b in zip(u, v))

    def monoid(self, Y):
        els = self.elements(Y)
        index = {e: k for k, e in enumerate(els)}
        table = tuple(tuple(index[self.add(u, v)] for v in els) for u in els)
        return CommMonoid(FinSet(len(els)), table, index[(0,) * (self.X * Y)], f"free{self.X}({Y})")

    def act(self, s, u, Y):
        """A span Y <-> Y' acts by postcomposition: the matrix product (X x Y)·(Y x Y')."""
        m = NatMatrix(self.X, Y, u)
        out = ho_compose(m, span_matrix(s))
        return tuple(min(v, self.cap) for v in out.entries)


def free_model(X, cap=15):
    return FreeModel(X.size if isinstance(X, FinSet) else X, cap)


def partial_homs(x, k, M):
    """Maps φ from vectors in ℕ^x with entries <= k to M with φ(0) = 1 and
    φ(u + v) = φ(u)φ(v) whenever u + v is still in range.

    Found by backtracking over all assignments in order of total degree.
    """
    vecs = sorted(itertools.product(range(k + 1), repeat=x), key=lambda v: (sum(v), v))
    index = {v: i for i, v in enumerate(vecs)}
    splits = []
    for v in vecs:
        sp = []
        for u in itertools.product(*(range(c + 1) for c in v)):
            w = tuple(a - b for a, b in zip(v, u))
            if any(u) and any(w) and u <= w:
                sp.append((index[u], index[w]))
        splits.append(sp)
    found = []
    phi = [None] * len(vecs)

    def rec(i):
        if i == len(vecs):
            found.append(tuple(phi))
            return
        options = [M.unit] if not any(vecs[i]) else range(M.size)
        for c in options:
            if all(M.table[phi[a]][phi[b]] == c for a, b in splits[i]):
                phi[i] = c
                rec(i + 1)
        phi[i] = None

    rec(0)
    return vecs, found


@dataclass
class FreePropertyReport:
    x: int
    k: int
    monoid: str
    homs: int
    expected: int
    generated_ok: bool

    @property
    def ok(self):
        return self.homs == self.expected and self.generated_ok

    def to_dict(self):
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def free_property_check(x, k, M):
    """Partial monoid maps out of the truncated free model correspond to x-vectors in M."""
    vecs, homs = partial_homs(x, k, M)
    gens = [tuple(int(i == j) for j in range(x)) for i in range(x)]
    gidx = [vecs.index(g) for g in gens] if k >= 1 else []
    ok = True
    seen = set()
    for phi in homs:
        key = tuple(phi[i] for i in gidx)
        if key in seen:
            ok = False
        seen.add(key)
        for v, val in zip(vecs, phi):
            acc = M.unit
            for g, c in zip(key, v):
                for _ in range(c):
                    acc = M.table[acc][g]
            ok = ok and acc == val
    expected = M.size ** x if k >= 1 else 1
    return FreePropertyReport(x, k, M.name, len(homs), expected, ok)
