"""Spans of finite sets X <- U -> Y, their isomorphisms, and composition by pullback."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import FootMismatch, Mismatch, ShapeError, ShapeMismatch
from .finset import FinSet, SetMap, compose_maps, is_mono, is_epi, pullback_pairs


@dataclass(frozen=True, slots=True)
class Span1:
    left_foot: FinSet
    apex: FinSet
    right_foot: FinSet
    lmap: SetMap
    rmap: SetMap

    def __post_init__(self):
        if self.lmap.dom != self.apex or self.rmap.dom != self.apex:
            raise Mismatch("legs must start at the apex")
        if self.lmap.cod != self.left_foot or self.rmap.cod != self.right_foot:
            raise Mismatch("legs must end at the feet")

    def reversed(self):
        return Span1(self.right_foot, self.apex, self.left_foot, self.rmap, self.lmap)


@dataclass(frozen=True, slots=True)
class Span2:
    """An isomorphism of spans over both feet."""

    source: Span1
    target: Span1
    iso: SetMap

    def __post_init__(self):
        s, t = self.source, self.target
        if s.left_foot != t.left_foot or s.right_foot != t.right_foot:
            raise FootMismatch("2-cell between spans with different feet")
        if self.iso.dom != s.apex or self.iso.cod != t.apex or len(set(self.iso.values)) != s.apex.size \
                or s.apex.size != t.apex.size:
            raise Mismatch("2-cell must be a bijection of apexes")
        if compose_maps(t.lmap, self.iso) != s.lmap or compose_maps(t.rmap, self.iso) != s.rmap:
            raise Mismatch("2-cell does not commute with the legs")


@dataclass(frozen=True, slots=True)
class NatMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    def __getitem__(self, xy):
        x, y = xy
        return self.entries[x * self.cols + y]

    def to_rows(self):
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def total(self):
        return sum(self.entries)


def span(x, y, lvals, rvals):
    """Build the span x <- n -> y from leg value lists (x, y are sizes or FinSets)."""
    x = x if isinstance(x, FinSet) else FinSet(x)
    y = y if isinstance(y, FinSet) else FinSet(y)
    u = FinSet(len(lvals))
    return Span1(x, u, y, SetMap(u, x, tuple(lvals)), SetMap(u, y, tuple(rvals)))


def identity_span(x):
    x = x if isinstance(x, FinSet) else FinSet(x)
    ident = tuple(range(x.size))
    return span(x, x, ident, ident)


def composite_pairs(s, t):
    return pullback_pairs(s.rmap.values, t.lmap.values)


def compose_spans(s, t):
    """s : X <-> Y first, then t : Y <-> Z."""
    if s.right_foot != t.left_foot:
        raise FootMismatch(f"right foot {s.right_foot.size} vs left foot {t.left_foot.size}")
    pairs = composite_pairs(s, t)
    sl, tr = s.lmap.values, t.rmap.values
    return span(s.left_foot, t.right_foot, [sl[a] for a, _ in pairs], [tr[b] for _, b in pairs])


def identity_2cell(s):
    return Span2(s, s, SetMap(s.apex, s.apex, tuple(range(s.apex.size))))


def inverse_2cell(a):
    inv = [0] * a.iso.dom.size
    for i, j in enumerate(a.iso.values):
        inv[j] = i
    return Span2(a.target, a.source, SetMap(a.target.apex, a.source.apex, tuple(inv)))


def vcompose2(b, a):
    """b after a, for a : s => t and b : t => r."""
    if a.target != b.source:
        raise Mismatch("vertical composition of non-matching 2-cells")
    return Span2(a.source, b.target, compose_maps(b.iso, a.iso))


def hcompose2(b, a):
    """Horizontal composite.

    a : s => s' between spans X <-> Y, b : t => t' between spans Y <-> Z.
    The result maps compose_spans(s, t) => compose_spans(s', t') by (u, v) -> (a(u), b(v)).
    """
    if a.source.right_foot != b.source.left_foot:
        raise Mismatch("horizontal composition of non-chaining 2-cells")
    src = compose_spans(a.source, b.source)
    tgt = compose_spans(a.target, b.target)
    index = {p: i for i, p in enumerate(composite_pairs(a.target, b.target))}
    av, bv = a.iso.values, b.iso.values
    values = tuple(index[(av[u], bv[v])] for u, v in composite_pairs(a.source, b.source))
    return Span2(src, tgt, SetMap(src.apex, tgt.apex, values))


def associator(s, t, r):
    """compose(compose(s, t), r) => compose(s, compose(t, r)), ((u, v), w) -> (u, (v, w))."""
    st = compose_spans(s, t)
    tr = compose_spans(t, r)
    left = compose_spans(st, r)
    right = compose_spans(s, tr)
    st_pairs = composite_pairs(s, t)
    tr_index = {p: i for i, p in enumerate(composite_pairs(t, r))}
    right_index = {p: i for i, p in enumerate(composite_pairs(s, tr))}
    values = []
    for uv, w in composite_pairs(st, r):
        u, v = st_pairs[uv]
        values.append(right_index[(u, tr_index[(v, w)])])
    return Span2(left, right, SetMap(left.apex, right.apex, tuple(values)))


def left_unitor(s):
    """compose(identity, s) => s."""
    ids = identity_span(s.left_foot)
    src = compose_spans(ids, s)
    values = tuple(u for _, u in composite_pairs(ids, s))
    return Span2(src, s, SetMap(src.apex, s.apex, values))


def right_unitor(s):
    """compose(s, identity) => s."""
    ids = identity_span(s.right_foot)
    src = compose_spans(s, ids)
    values = tuple(u for u, _ in composite_pairs(s, ids))
    return Span2(src, s, SetMap(src.apex, s.apex, values))


def span_matrix(s):
    nx, ny = s.left_foot.size, s.right_foot.size
    entries = [0] * (nx * ny)
    for x, y in zip(s.lmap.values, s.rmap.values):
        entries[x * ny + y] += 1
    return NatMatrix(nx, ny, tuple(entries))


def matmul(m, n):
    if m.cols != n.rows:
        raise ShapeError(f"cannot multiply {m.rows}x{m.cols} by {n.rows}x{n.cols}")
    out = []
    for i in range(m.rows):
        for k in range(n.cols):
            out.append(sum(m[i, j] * n[j, k] for j in range(m.cols)))
    return NatMatrix(m.rows, n.cols, tuple(out))


def _fibers(s):
    fibers = {}
    for u, key in enumerate(zip(s.lmap.values, s.rmap.values)):
        fibers.setdefault(key, []).append(u)
    return fibers


def spans_isomorphic(s, t):
    """A 2-cell s => t if one exists, built by pairing up fibers over X x Y in order."""
    if s.left_foot != t.left_foot or s.right_foot != t.right_foot:
        raise FootMismatch("spans over different feet")
    fs, ft = _fibers(s), _fibers(t)
    if {k: len(v) for k, v in fs.items()} != {k: len(v) for k, v in ft.items()}:
        return None
    values = [0] * s.apex.size
    for key, us in fs.items():
        for u, w in zip(us, ft[key]):
            values[u] = w
    return Span2(s, t, SetMap(s.apex, t.apex, tuple(values)))


def canonical_span(m):
    """Representative of the iso class of spans with matrix m."""
    lvals, rvals = [], []
    for x in range(m.rows):
        for y in range(m.cols):
            k = m[x, y]
            lvals += [x] * k
            rvals += [y] * k
    return span(m.rows, m.cols, lvals, rvals)


def canonicalize(s):
    return canonical_span(span_matrix(s))


def compositions(total, parts):
    """All tuples of `parts` naturals summing to `total`, lexicographically decreasing."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_matrices(rows, cols, max_total):
    """Every rows x cols natural matrix with entry sum <= max_total, by total then lex order."""
    for total in range(max_total + 1):
        if rows * cols == 0:
            if total == 0:
                yield NatMatrix(rows, cols, ())
            continue
        for entries in compositions(total, rows * cols):
            yield NatMatrix(rows, cols, entries)


def enumerate_spans(x, y, max_apex):
    x = x.size if isinstance(x, FinSet) else x
    y = y.size if isinstance(y, FinSet) else y
    return [canonical_span(m) for m in enumerate_matrices(x, y, max_apex)]


def automorphism_2cells(s):
    fibers = list(_fibers(s).values())
    out = []
    for perms in itertools.product(*(itertools.permutations(f) for f in fibers)):
        values = list(range(s.apex.size))
        for f, p in zip(fibers, perms):
            for u, w in zip(f, p):
                values[u] = w
        out.append(Span2(s, s, SetMap(s.apex, s.apex, tuple(values))))
    return out


def automorphism_count(m):
    return math.prod(math.factorial(v) for v in m.entries)


def is_equivalence(s):
    l, r = s.lmap, s.rmap
    return is_mono(l) and is_epi(l) and is_mono(r) and is_epi(r)


def find_inverse_span(s, max_apex):
    """Search canonical spans t : Y <-> X with t∘s ≅ id_X and s∘t ≅ id_Y."""
    id_x = identity_span(s.left_foot)
    id_y = identity_span(s.right_foot)
    for t in enumerate_spans(s.right_foot, s.left_foot, max_apex):
        if spans_isomorphic(compose_spans(s, t), id_x) and spans_isomorphic(compose_spans(t, s), id_y):
            return t
    return None


def is_permutation_matrix(m):
    if m.rows != m.cols:
        return False
    rows = m.to_rows()
    return all(sorted(r) == [0] * (m.cols - 1) + [1] for r in rows) and \
        all(sum(r[j] for r in rows) == 1 for j in range(m.cols))


def operad_compose(sigma, family):
    """Block permutation of Y = Y_0 ⊔ Y_1 ⊔ ... (blocks in order).

    sigma permutes the blocks and family[x] permutes block x internally; the
    result is a list of images, element (x, k) going to (sigma(x), family[x](k))
    where the target blocks are laid out in the order sigma puts them.
    """
    sigma = tuple(sigma)
    if len(family) != len(sigma) or sorted(sigma) != list(range(len(sigma))):
        raise ShapeMismatch("sigma must be a permutation indexed like family")
    sizes = [len(p) for p in family]
    for p in family:
        if sorted(p) != list(range(len(p))):
            raise ShapeMismatch("family entries must be permutations")
    inv = [0] * len(sigma)
    for x, p in enumerate(sigma):
        inv[p] = x
    offset = [0] * len(sigma)
    acc = 0
    for p in range(len(sigma)):
        offset[p] = acc
        acc += sizes[inv[p]]
    out = []
    for x, perm in enumerate(family):
        out += [offset[sigma[x]] + perm[k] for k in range(sizes[x])]
    return tuple(out)


def all_labelled_spans(x, y, max_apex):
    """Every span x <- u -> y with u = {0..n-1}, n <= max_apex (not up to iso)."""
    x = x if isinstance(x, FinSet) else FinSet(x)
    y = y if isinstance(y, FinSet) else FinSet(y)
    out = []
    for n in range(max_apex + 1):
        for legs in itertools.product(itertools.product(range(x.size), range(y.size)), repeat=n):
            out.append(span(x, y, [a for a, _ in legs], [b for _, b in legs]))
    return out


def isomorphisms(s, t):
    """All 2-cells s => t."""
    if s.left_foot != t.left_foot or s.right_foot != t.right_foot or s.apex != t.apex:
        return []
    first = spans_isomorphic(s, t)
    if first is None:
        return []
    return [vcompose2(first, a) for a in automorphism_2cells(s)]


class SpanBicategory:
    """2Span(FinSet) restricted to feet and apexes of size <= bound.

    One-cells are listed with labelled apexes, so that a nerve built from this
    data contains every labelled cell; composites are computed by canonical
    pullback and may leave the bound.
    """

    def __init__(self, bound):
        self.bound = bound
        self._hom = {}

    def objects(self):
        return [FinSet(n) for n in range(self.bound + 1)]

    def hom(self, a, b):
        key = (a.size, b.size)
        if key not in self._hom:
            self._hom[key] = all_labelled_spans(a, b, self.bound)
        return self._hom[key]

    def compose(self, f, g):
        return compose_spans(f, g)

    def two_cells(self, f, g):
        return isomorphisms(f, g)

    def identity(self, a):
        return identity_span(a)

    def identity2(self, f):
        return identity_2cell(f)

    def vcomp(self, b, a):
        return vcompose2(b, a)

    def hcomp(self, b, a):
        return hcompose2(b, a)

    def inverse(self, a):
        return inverse_2cell(a)

    def associator(self, f, g, h):
        return associator(f, g, h)

    def left_unitor(self, f):
        return left_unitor(f)

    def right_unitor(self, f):
        return right_unitor(f)

    def source(self, f):
        return f.left_foot

    def target(self, f):
        return f.right_foot
