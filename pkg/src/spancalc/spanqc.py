"""Cells of the quasicategory Span, the translation to nerve data, and bounded checks.

An n-cell assigns a finite set F(i, j) to every interval 0 <= i <= j <= n and a
map F(I) -> F(J) to every inclusion J ⊂ I, such that the maps compose and every
square F(I ∪ J) -> F(I), F(J) -> F(I ∩ J) of overlapping intervals is a pullback.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import IndexRange, InvalidCell, FootMismatch
from .finset import FinSet, SetMap, is_pullback_values, pullback_pairs
from .simplex import (
    BoundaryMap,
    HornMap,
    Nerve2Data,
    codegeneracy,
    coface,
    intervals,
)
from .spans import (
    NatMatrix,
    Span1,
    Span2,
    automorphism_count,
    canonical_span,
    enumerate_matrices,
    enumerate_spans,
    span_matrix,
    compose_spans,
    composite_pairs,
    identity_2cell,
    isomorphisms,
    span,
)


# ---------------------------------------------------------------------------
# Index bookkeeping, cached per dimension


def contains(a, b):
    """Interval b lies inside interval a."""
    return a[0] <= b[0] and b[1] <= a[1]


@lru_cache(maxsize=None)
def cell_shape(n):
    ivs = tuple(intervals(n))
    iidx = {iv: k for k, iv in enumerate(ivs)}
    pairs = tuple((a, b) for a in ivs for b in ivs if a != b and contains(a, b))
    pidx = {p: k for k, p in enumerate(pairs)}
    chains = []
    for a, b in pairs:
        for c in ivs:
            if c != b and contains(b, c):
                chains.append((pidx[(a, b)], pidx[(b, c)], pidx[(a, c)]))
    squares = []
    for x, y in itertools.combinations(ivs, 2):
        lo, hi = max(x[0], y[0]), min(x[1], y[1])
        if lo > hi:
            continue
        u = (min(x[0], y[0]), max(x[1], y[1]))
        m = (lo, hi)
        squares.append((u, x, y, m))
    return ivs, iidx, pairs, pidx, tuple(chains), tuple(squares)


def _covering(n):
    out = []
    for i, j in intervals(n):
        if i < j:
            out.append(((i, j), (i, j - 1)))
            out.append(((i, j), (i + 1, j)))
    return out


def _compose(g, f):
    return tuple(g[v] for v in f)


# ---------------------------------------------------------------------------
# Cells


@dataclass(frozen=True)
class SpanCell:
    n: int
    sizes: tuple   # indexed like intervals(n)
    values: tuple  # one value tuple per inclusion pair, indexed like cell_shape(n) pairs

    @property
    def sets(self):
        ivs = cell_shape(self.n)[0]
        return {iv: FinSet(s) for iv, s in zip(ivs, self.sizes)}

    @property
    def maps(self):
        ivs, iidx, pairs, _, _, _ = cell_shape(self.n)
        return {(a, b): SetMap(FinSet(self.sizes[iidx[a]]), FinSet(self.sizes[iidx[b]]), v)
                for (a, b), v in zip(pairs, self.values)}

    def size(self, iv):
        return self.sizes[cell_shape(self.n)[1][iv]]

    def map_values(self, a, b):
        if a == b:
            return tuple(range(self.size(a)))
        return self.values[cell_shape(self.n)[3][(a, b)]]

    def edge(self, i, j):
        """The span F(i) <- F(i, j) -> F(j)."""
        return span(self.size((i, i)), self.size((j, j)),
                    self.map_values((i, j), (i, i)), self.map_values((i, j), (j, j)))


def cell_from_maps(n, sizes, maps):
    """Build a cell from a dict of sizes per interval and value tuples per inclusion pair."""
    ivs, _, pairs, _, _, _ = cell_shape(n)
    return SpanCell(n, tuple(sizes[iv] for iv in ivs), tuple(tuple(maps[p]) for p in pairs))


def derive_maps(n, cover):
    """Extend covering maps (i,j)->(i,j-1) and (i,j)->(i+1,j) to all inclusions.

    The map (i,l) -> (j,k) is taken along the path that first shrinks the
    right end, then the left end.
    """
    maps = {}
    for (i, l) in intervals(n):
        for (j, k) in intervals(n):
            if (i, l) == (j, k) or not contains((i, l), (j, k)):
                continue
            path = [(i, r) for r in range(l, k - 1, -1)] + [(a, k) for a in range(i + 1, j + 1)]
            vals = None
            for src, dst in zip(path, path[1:]):
                step = cover[(src, dst)]
                vals = step if vals is None else _compose(step, vals)
            maps[((i, l), (j, k))] = vals
    return maps


def cell_from_covering(n, sizes, cover):
    return cell_from_maps(n, sizes, derive_maps(n, cover))


def validate_cell(F):
    """Functoriality for every nested triple and the pullback property for every
    pair of overlapping intervals."""
    try:
        ivs, iidx, pairs, pidx, chains, squares = cell_shape(F.n)
    except Exception:
        return False
    if len(F.sizes) != len(ivs) or len(F.values) != len(pairs):
        return False
    sizes = F.sizes
    for (a, b), v in zip(pairs, F.values):
        if len(v) != sizes[iidx[a]]:
            return False
        top = sizes[iidx[b]]
        if any(not 0 <= x < top for x in v):
            return False
    vals = F.values
    for ab, bc, ac in chains:
        g, f = vals[bc], vals[ab]
        if tuple(g[x] for x in f) != vals[ac]:
            return False

    def get(a, b):
        return tuple(range(sizes[iidx[a]])) if a == b else vals[pidx[(a, b)]]

    for u, x, y, m in squares:
        if not is_pullback_values(sizes[iidx[u]], get(u, x), get(u, y), get(x, m), get(y, m)):
            return False
    return True


def reindex(F, phi):
    """Pull a cell back along a monotone map phi : [m] -> [F.n]."""
    m = len(phi) - 1
    ivs, _, pairs, _, _, _ = cell_shape(m)
    sizes = tuple(F.size((phi[i], phi[j])) for i, j in ivs)
    values = tuple(F.map_values((phi[a[0]], phi[a[1]]), (phi[b[0]], phi[b[1]])) for a, b in pairs)
    return SpanCell(m, sizes, values)


def face(F, i):
    if not 0 <= i <= F.n or F.n == 0:
        raise IndexRange(f"face {i} of a {F.n}-cell")
    return reindex(F, coface(F.n, i))


def degeneracy(F, i):
    if not 0 <= i <= F.n:
        raise IndexRange(f"degeneracy {i} of a {F.n}-cell")
    return reindex(F, codegeneracy(F.n, i))


def reverse_cell(F):
    """The cell (i, j) -> F(n-j, n-i); Span is isomorphic to its opposite this way."""
    n = F.n
    ivs, _, pairs, _, _, _ = cell_shape(n)
    sizes = tuple(F.size((n - j, n - i)) for i, j in ivs)
    values = tuple(F.map_values((n - a[1], n - a[0]), (n - b[1], n - b[0])) for a, b in pairs)
    return SpanCell(n, sizes, values)


def point_cell(size):
    return SpanCell(0, (size,), ())


def cell_of_span(s):
    return cell_from_maps(1, {(0, 0): s.left_foot.size, (0, 1): s.apex.size, (1, 1): s.right_foot.size},
                          {((0, 1), (0, 0)): s.lmap.values, ((0, 1), (1, 1)): s.rmap.values})


def span_of_cell(F):
    if F.n != 1:
        raise InvalidCell("only 1-cells are spans")
    return F.edge(0, 1)


# ---------------------------------------------------------------------------
# Translation to nerve data of 2Span


def nerve_from_cell(F):
    n = F.n
    objects = tuple(FinSet(F.size((i, i))) for i in range(n + 1))
    mor = {(i, j): F.edge(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)}
    th = {}
    for i, j, k in itertools.combinations(range(n + 1), 3):
        f, g, h = mor[(i, j)], mor[(j, k)], mor[(i, k)]
        pairs = composite_pairs(f, g)
        index = {p: a for a, p in enumerate(pairs)}
        left = F.map_values((i, k), (i, j))
        right = F.map_values((i, k), (j, k))
        comparison = [index.get(p) for p in zip(left, right)]
        if None in comparison or len(set(comparison)) != len(pairs) or len(comparison) != len(pairs):
            raise InvalidCell(f"F({i},{k}) is not the pullback over F({j})")
        inv = [0] * len(pairs)
        for w, a in enumerate(comparison):
            inv[a] = w
        src = compose_spans(f, g)
        th[(i, j, k)] = Span2(src, h, SetMap(src.apex, h.apex, tuple(inv)))
    return Nerve2Data.build(objects, mor, th)


def cell_from_nerve(d):
    n = d.n
    mor = dict(d.morphisms)
    th = dict(d.two_cells)
    sizes = {(i, i): d.objects[i].size for i in range(n + 1)}
    for (i, j), f in mor.items():
        sizes[(i, j)] = f.apex.size

    def inverse_pairs(i, j, k):
        t = th[(i, j, k)]
        pairs = composite_pairs(mor[(i, j)], mor[(j, k)])
        inv = [None] * t.iso.cod.size
        for a, w in enumerate(t.iso.values):
            inv[w] = pairs[a]
        return inv

    def shrink_right(i, l, k):
        # (i, l) -> (i, k) for i <= k < l
        if k == i:
            return mor[(i, l)].lmap.values
        return tuple(p[0] for p in inverse_pairs(i, k, l))

    def shrink_left(i, k, j):
        # (i, k) -> (j, k) for i < j <= k
        if j == k:
            return mor[(i, k)].rmap.values
        return tuple(p[1] for p in inverse_pairs(i, j, k))

    maps = {}
    for (i, l) in intervals(n):
        for (j, k) in intervals(n):
            if (i, l) == (j, k) or not contains((i, l), (j, k)):
                continue
            vals = None
            if k < l:
                vals = shrink_right(i, l, k)
            if i < j:
                step = shrink_left(i, k, j)
                vals = step if vals is None else _compose(step, vals)
            maps[((i, l), (j, k))] = vals
    cell = cell_from_maps(n, sizes, maps)
    if not validate_cell(cell):
        raise InvalidCell("nerve data does not give a cell with the pullback property")
    return cell


def compose_via_cell(s, t):
    if s.right_foot != t.left_foot:
        raise FootMismatch("spans do not chain")
    c = compose_spans(s, t)
    d = Nerve2Data.build((s.left_foot, s.right_foot, t.right_foot),
                         {(0, 1): s, (1, 2): t, (0, 2): c},
                         {(0, 1, 2): identity_2cell(c)})
    return cell_from_nerve(d)


# ---------------------------------------------------------------------------
# Completing partial cells


def cell_faces(F):
    return [face(F, i) for i in range(F.n + 1)]


def merge_faces(n, faces):
    """Collect sizes and maps (in global indices) from a dict i -> (n-1)-cell."""
    sizes, known = {}, {}
    for i, G in faces.items():
        verts = coface(n, i)
        ivs, _, pairs, _, _, _ = cell_shape(n - 1)
        for (a, b), s in zip(ivs, G.sizes):
            key = (verts[a], verts[b])
            if sizes.setdefault(key, s) != s:
                return None
        for (x, y), v in zip(pairs, G.values):
            key = ((verts[x[0]], verts[x[1]]), (verts[y[0]], verts[y[1]]))
            if known.setdefault(key, v) != v:
                return None
    return sizes, known


def covering_candidates(pair, sizes, known):
    """Per-element candidates for a missing map I -> J, filtered by known maps out of J."""
    src, dst = pair
    checks = [(known[(dst, k)], known[(src, k)]) for k in intervals_inside(dst)
              if (dst, k) in known and (src, k) in known]
    out = []
    for e in range(sizes[src]):
        out.append([j for j in range(sizes[dst]) if all(jk[j] == ik[e] for jk, ik in checks)])
    return out


def intervals_inside(iv):
    i, j = iv
    return [(a, b) for a in range(i, j + 1) for b in range(a, j + 1) if (a, b) != iv]


def complete_cell(n, sizes, known, limit=None):
    """All n-cells with the given sizes that extend the known maps.

    Only covering maps may be missing; they are searched element by element.
    """
    cover = {}
    missing = []
    for p in _covering(n):
        if p in known:
            cover[p] = known[p]
        else:
            missing.append(p)
    options = [covering_candidates(p, sizes, known) for p in missing]
    found = []
    for choice in itertools.product(*(itertools.product(*opt) for opt in options)):
        for p, vals in zip(missing, choice):
            cover[p] = vals
        maps = derive_maps(n, cover)
        if any(maps[p] != v for p, v in known.items()):
            continue
        cell = cell_from_maps(n, sizes, maps)
        if validate_cell(cell):
            found.append(cell)
            if limit is not None and len(found) >= limit:
                break
    return found


# ---------------------------------------------------------------------------
# The bounded complex: all cells whose sets have size <= bound


def extend_cell(G, new_size, lvals, rvals, perms):
    """Add a vertex to the (d-1)-cell G.

    The new edge is the span G(d-1) <- apex -> new_size given by lvals/rvals;
    each F(i, d) with i < d-1 is the canonical pullback relabelled by perms[i]
    (element with canonical index a gets label perms[i][a]).
    Returns None if a pullback does not match the length of its permutation.
    """
    d = G.n + 1
    sizes = {iv: G.size(iv) for iv in intervals(d - 1)}
    sizes[(d, d)] = new_size
    sizes[(d - 1, d)] = len(lvals)
    cover = {}
    for iv in intervals(d - 1):
        if iv[0] < iv[1]:
            cover[(iv, (iv[0], iv[1] - 1))] = G.map_values(iv, (iv[0], iv[1] - 1))
            cover[(iv, (iv[0] + 1, iv[1]))] = G.map_values(iv, (iv[0] + 1, iv[1]))
    cover[((d - 1, d), (d - 1, d - 1))] = tuple(lvals)
    cover[((d - 1, d), (d, d))] = tuple(rvals)
    labels = {d - 1: {(None, b): b for b in range(len(lvals))}}
    pair_lists = {}
    for i in range(d - 2, -1, -1):
        to_vertex = G.map_values((i, d - 1), (d - 1, d - 1))
        pairs = pullback_pairs(to_vertex, lvals)
        perm = perms[i]
        if len(perm) != len(pairs):
            return None
        pair_lists[i] = pairs
        labels[i] = {p: perm[a] for a, p in enumerate(pairs)}
        sizes[(i, d)] = len(pairs)
    for i in range(d - 2, -1, -1):
        pairs, perm = pair_lists[i], perms[i]
        left = [0] * len(pairs)
        right = [0] * len(pairs)
        step = G.map_values((i, d - 1), (i + 1, d - 1))
        for a, (x, b) in enumerate(pairs):
            w = perm[a]
            left[w] = x
            right[w] = labels[i + 1][(None, b) if i + 1 == d - 1 else (step[x], b)]
        cover[((i, d), (i, d - 1))] = tuple(left)
        cover[((i, d), (i + 1, d))] = tuple(right)
    return cell_from_covering(d, sizes, cover)


def _raw_spans(x, y, bound):
    out = []
    for n in range(bound + 1):
        for legs in itertools.product(itertools.product(range(x), range(y)), repeat=n):
            out.append((tuple(a for a, _ in legs), tuple(b for _, b in legs)))
    return out


class BoundedSpanComplex:
    """The part of Span whose cells have every set of size <= bound.

    Cells are enumerated with labelled sets {0..k-1}.  Horns of dimension 3
    are enumerated and filled as cells; horns of dimension 4 are counted in
    nerve form, one representative per relabelling orbit, weighted by the
    orbit size (see ``nerve_horn_counts``).
    """

    def __init__(self, bound=2, cap=4, threads=1):
        self.bound = bound
        self.cap = cap
        self.threads = threads
        self._cells = {}
        self._faces = {}
        self.spans = {(x, y): _raw_spans(x, y, bound) for x in range(bound + 1) for y in range(bound + 1)}

    def cells(self, d):
        if d not in self._cells:
            self._cells[d] = self._enumerate(d)
        return self._cells[d]

    def _enumerate(self, d):
        b = self.bound
        if d == 0:
            return [point_cell(x) for x in range(b + 1)]
        out = []
        for G in self.cells(d - 1):
            last = G.size((d - 1, d - 1))
            for new in range(b + 1):
                for lv, rv in self.spans[(last, new)]:
                    sizes = []
                    for i in range(d - 1):
                        to_vertex = G.map_values((i, d - 1), (d - 1, d - 1))
                        sizes.append(len(pullback_pairs(to_vertex, lv)))
                    if any(s > b for s in sizes):
                        continue
                    for perms in itertools.product(*(itertools.permutations(range(s)) for s in sizes)):
                        out.append(extend_cell(G, new, lv, rv, dict(enumerate(perms))))
        return out

    def face_table(self, d):
        if d not in self._faces:
            lower = {c: k for k, c in enumerate(self.cells(d - 1))}
            self._faces[d] = [[lower[face(c, i)] for c in self.cells(d)] for i in range(d + 1)]
        return self._faces[d]

    # horns and boundaries of dimension 3, as cells -------------------------

    def _assignments(self, n, omit):
        from .simplex import compatible_assignments
        return compatible_assignments(self.face_table(n - 1), len(self.cells(n - 1)), n, omit)

    def horn_maps(self, n, k):
        if n == 4:
            yield from self._nerve_horn_maps(k)
            return
        cells = self.cells(n - 1)
        for a in self._assignments(n, {k}):
            yield HornMap(n, k, tuple(None if i == k else cells[a[i]] for i in range(n + 1)))

    def boundary_maps(self, n):
        cells = self.cells(n - 1)
        for a in self._assignments(n, set()):
            yield BoundaryMap(n, tuple(cells[a[i]] for i in range(n + 1)))

    def fillers(self, h):
        if h.n == 4 and isinstance(h.faces[0 if h.faces[0] is not None else 1], Nerve2Data):
            return self._nerve_fillers(h)
        present = {i: G for i, G in enumerate(h.faces) if G is not None}
        merged = merge_faces(h.n, present)
        if merged is None:
            return []
        sizes, known = merged
        # in dimension 2 the long edge is not seen by the horn; its size is searched
        free = [iv for iv in intervals(h.n) if iv not in sizes]
        out = []
        for choice in itertools.product(range(self.bound + 1), repeat=len(free)):
            sizes.update(zip(free, choice))
            out.extend(F for F in complete_cell(h.n, sizes, known)
                       if all(face(F, i) == G for i, G in present.items()))
        return out

    def horn_fill_counts(self, n, k):
        if n == 4:
            return nerve_horn_counts(self.bound, self.threads)[k]
        counts = Counter()
        for h in self.horn_maps(n, k):
            counts[len(self.fillers(h))] += 1
        return counts

    def boundary_fill_counts(self, n):
        if n == 4:
            return nerve_horn_counts(self.bound, self.threads)["boundary"]
        counts = Counter()
        for b in self.boundary_maps(n):
            counts[len(self.fillers(b))] += 1
        return counts

    # dimension 4 via nerve data ---------------------------------------------

    def _nerve_horn_maps(self, k):
        for data, _weight in normalized_nerve_data(self.bound, 4):
            cell = data_to_nerve2(data)
            faces = tuple(None if i == k else cell.face(i) for i in range(5))
            if all(f is None or _nerve_cell_ok(f) for f in faces):
                yield HornMap(4, k, faces)

    def _nerve_fillers(self, h):
        k = h.k
        objects, mor, th = _collect_nerve(h)
        cell = Nerve2Data.build(objects, mor, th)
        return [cell] if _nerve_cell_ok(cell) else []


# ---------------------------------------------------------------------------
# Nerve data of bounded 2Span, normalized up to relabelling
#
# A labelled n-cell in nerve form is a spine of spans f_{i,i+1}, spans f_ij for
# the longer intervals and 2-cells theta_ijk.  Relabelling the apex of every f_ij
# with j - i >= 2 acts freely on such data, and each orbit contains exactly one
# element whose theta_{i,j-1,j} are identities onto the canonical pullback.  So
# counting normalized data with weight prod |Y_ij|! counts labelled cells.


@dataclass
class RawNerve:
    sizes: tuple          # vertex sizes
    legs: dict            # (i, j) -> (lvals, rvals)
    thetas: dict          # (i, j, k) -> {(a, b): w}


def _spines(bound, n, spans_table, first=None):
    def rec(xs, legs, pairs):
        m = len(xs) - 1
        if m == n:
            yield tuple(xs), legs, pairs
            return
        for new in range(bound + 1):
            for lv, rv in spans_table[(xs[-1], new)]:
                legs2 = dict(legs)
                pairs2 = dict(pairs)
                legs2[(m, m + 1)] = (lv, rv)
                ok = True
                for i in range(m - 1, -1, -1):
                    al, ar = legs2[(i, m)]
                    ps = pullback_pairs(ar, lv)
                    if len(ps) > bound:
                        ok = False
                        break
                    legs2[(i, m + 1)] = (tuple(al[a] for a, _ in ps), tuple(rv[b] for _, b in ps))
                    pairs2[(i, m + 1)] = ps
                if ok:
                    yield from rec(xs + [new], legs2, pairs2)

    starts = range(bound + 1) if first is None else [first]
    for x0 in starts:
        yield from rec([x0], {}, {})


def _isos_raw(src_keys, dst_keys):
    """All bijections src -> dst preserving keys, as value tuples."""
    groups = {}
    for w, key in enumerate(dst_keys):
        groups.setdefault(key, []).append(w)
    src_groups = {}
    for a, key in enumerate(src_keys):
        src_groups.setdefault(key, []).append(a)
    if {k: len(v) for k, v in groups.items()} != {k: len(v) for k, v in src_groups.items()}:
        return []
    keys = list(src_groups)
    out = []
    for perms in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        vals = [0] * len(src_keys)
        for key, p in zip(keys, perms):
            for a, w in zip(src_groups[key], p):
                vals[a] = w
        out.append(tuple(vals))
    return out


def _triples(legs, i, j, k, l):
    out = []
    _, r_ij = legs[(i, j)]
    l_jk, r_jk = legs[(j, k)]
    l_kl, _ = legs[(k, l)]
    for u, x in enumerate(r_ij):
        for v, y in enumerate(l_jk):
            if x != y:
                continue
            for w, z in enumerate(l_kl):
                if r_jk[v] == z:
                    out.append((u, v, w))
    return out


def _compat_raw(legs, th, quad):
    i, j, k, l = quad
    a, b, c, d = th[(i, j, l)], th[(j, k, l)], th[(i, k, l)], th[(i, j, k)]
    return all(a[(u, b[(v, w)])] == c[(d[(u, v)], w)] for u, v, w in _triples(legs, i, j, k, l))


def normalized_nerve_data(bound, n, first=None):
    """Yield (RawNerve, weight) for every normalized n-cell of bounded nerve data.

    Compatibility is not imposed; callers test the quadruples they need.
    """
    spans_table = {(x, y): _raw_spans(x, y, bound) for x in range(bound + 1) for y in range(bound + 1)}
    for xs, legs, pairs in _spines(bound, n, spans_table, first):
        weight = math.prod(math.factorial(len(legs[(i, j)][0]))
                           for i in range(n + 1) for j in range(i + 2, n + 1))
        fixed = {}
        free = []
        for i, j, k in itertools.combinations(range(n + 1), 3):
            if j == k - 1:
                fixed[(i, j, k)] = {p: w for w, p in enumerate(pairs[(i, k)])}
            else:
                free.append((i, j, k))
        options = []
        for i, j, k in free:
            ps = pullback_pairs(legs[(i, j)][1], legs[(j, k)][0])
            src_keys = [(legs[(i, j)][0][a], legs[(j, k)][1][b]) for a, b in ps]
            dst_keys = list(zip(*legs[(i, k)])) if legs[(i, k)][0] else []
            options.append([dict(zip(ps, vals)) for vals in _isos_raw(src_keys, dst_keys)])
        for choice in itertools.product(*options):
            th = dict(fixed)
            th.update(zip(free, choice))
            yield RawNerve(xs, legs, th), weight


def _count_job(bound, x0):
    """Weighted filler counts of 4-dimensional horns and boundaries over spines starting at x0."""
    counts = {k: Counter() for k in range(5)}
    counts["boundary"] = Counter()
    quads = [tuple(v for v in range(5) if v != omit) for omit in range(5)]
    for data, weight in normalized_nerve_data(bound, 4, first=x0):
        ok = [_compat_raw(data.legs, data.thetas, q) for q in quads]
        for k in range(5):
            if all(ok[v] for v in range(5) if v != k):
                counts[k][1 if ok[k] else 0] += weight
        if all(ok):
            counts["boundary"][1] += weight
    return counts


@lru_cache(maxsize=None)
def nerve_horn_counts(bound, threads=1):
    """Weighted counts of 4-dimensional horns by number of fillers.

    Keys 0..4 give Counter({fillers: labelled horn count}) for Lambda^4_k;
    key "boundary" does the same for boundaries of the 4-simplex.  A horn in
    nerve form already carries every 1-cell and 2-cell of the simplex, so it
    has one filler when the remaining compatibility equation holds and none
    otherwise.
    """
    from .parallel import ordered_map
    parts = ordered_map(_count_job, [(bound, x0) for x0 in range(bound + 1)], threads)
    total = {k: Counter() for k in list(range(5)) + ["boundary"]}
    for part in parts:
        for key, c in part.items():
            total[key].update(c)
    return total


def data_to_nerve2(data):
    """Convert RawNerve to Nerve2Data over 2Span."""
    n = len(data.sizes) - 1
    objects = tuple(FinSet(x) for x in data.sizes)
    mor = {(i, j): span(data.sizes[i], data.sizes[j], *data.legs[(i, j)])
           for i in range(n + 1) for j in range(i + 1, n + 1)}
    th = {}
    for (i, j, k), table in data.thetas.items():
        src = compose_spans(mor[(i, j)], mor[(j, k)])
        vals = tuple(table[p] for p in composite_pairs(mor[(i, j)], mor[(j, k)]))
        th[(i, j, k)] = Span2(src, mor[(i, k)], SetMap(src.apex, mor[(i, k)].apex, vals))
    return Nerve2Data.build(objects, mor, th)


def _nerve_cell_ok(cell):
    from .simplex import is_valid_nerve_cell
    from .spans import SpanBicategory
    return is_valid_nerve_cell(SpanBicategory(0), cell)


def _collect_nerve(h):
    n = h.n
    mor, th, objs = {}, {}, {}
    for i, f in enumerate(h.faces):
        if f is None:
            continue
        verts = coface(n, i)
        for a, x in enumerate(f.objects):
            objs[verts[a]] = x
        for (a, b), g in f.morphisms:
            mor[(verts[a], verts[b])] = g
        for (a, b, c), t in f.two_cells:
            th[(verts[a], verts[b], verts[c])] = t
    return tuple(objs[v] for v in range(n + 1)), mor, th


# ---------------------------------------------------------------------------
# The explicit 3-dimensional fillers against exhaustive search


def theta_formula_check(bound):
    """For every labelled 3-dimensional inner horn in nerve form, search all
    candidate 2-cells for the missing face and compare with the explicit formula.

    Returns {k: {"horns", "unique", "agree"}} for k = 1, 2.
    """
    from .simplex import compatibility_holds, filler_formula_21, filler_formula_32
    from .spans import SpanBicategory
    bicat = SpanBicategory(bound)
    spans_table = {(x, y): _raw_spans(x, y, bound) for x in range(bound + 1) for y in range(bound + 1)}
    out = {1: Counter(), 2: Counter()}
    for xs, legs, _pairs in _spines(bound, 3, spans_table):
        f = {(i, i + 1): span(xs[i], xs[i + 1], *legs[(i, i + 1)]) for i in range(3)}
        c012 = compose_spans(f[(0, 1)], f[(1, 2)])
        c123 = compose_spans(f[(1, 2)], f[(2, 3)])
        for p02 in itertools.permutations(range(c012.apex.size)):
            f02, t012 = _relabel(c012, p02)
            for p13 in itertools.permutations(range(c123.apex.size)):
                f13, t123 = _relabel(c123, p13)
                for k, (given, missing) in ((1, ((0, 1, 3), (0, 2, 3))), (2, ((0, 2, 3), (0, 1, 3)))):
                    a, b, c = given
                    base = compose_spans(f[(0, 1)], f13) if k == 1 else compose_spans(f02, f[(2, 3)])
                    if base.apex.size > bound:
                        continue
                    for p03 in itertools.permutations(range(base.apex.size)):
                        f03, t_given = _relabel(base, p03)
                        mor = dict(f)
                        mor.update({(0, 2): f02, (1, 3): f13, (0, 3): f03})
                        th = {(0, 1, 2): t012, (1, 2, 3): t123, given: t_given}
                        faces = []
                        for omit in range(4):
                            verts = [v for v in range(4) if v != omit]
                            if omit == k:
                                faces.append(None)
                                continue
                            sub_m = {(x, y): mor[(verts[x], verts[y])] for x in range(3) for y in range(x + 1, 3)}
                            sub_t = {(0, 1, 2): th[tuple(verts)]}
                            faces.append(Nerve2Data.build([FinSet(xs[v]) for v in verts], sub_m, sub_t))
                        h = HornMap(3, k, tuple(faces))
                        src = compose_spans(mor[(missing[0], missing[1])], mor[(missing[1], missing[2])])
                        hits = []
                        for t in isomorphisms(src, mor[(0, 3)]):
                            th2 = dict(th)
                            th2[missing] = t
                            cell = Nerve2Data.build([FinSet(x) for x in xs], mor, th2)
                            if compatibility_holds(bicat, cell, (0, 1, 2, 3)):
                                hits.append(cell)
                        formula = filler_formula_21(h, bicat) if k == 1 else filler_formula_32(h, bicat)
                        out[k]["horns"] += 1
                        out[k]["unique"] += len(hits) == 1
                        out[k]["agree"] += len(hits) == 1 and hits[0] == formula
    return {k: dict(v) for k, v in out.items()}


def _relabel(s, perm):
    """Relabel the apex of s by perm (canonical index a -> perm[a]); return the span and the 2-cell s => new."""
    n = s.apex.size
    lv, rv = [0] * n, [0] * n
    for a, w in enumerate(perm):
        lv[w] = s.lmap.values[a]
        rv[w] = s.rmap.values[a]
    t = span(s.left_foot, s.right_foot, lv, rv)
    return t, Span2(s, t, SetMap(s.apex, t.apex, tuple(perm)))


# ---------------------------------------------------------------------------
# Products


def product_cone(A, B):
    """A ⊔ B with its projections A⊔B <- A -> A and A⊔B <- B -> B."""
    a = A.size if isinstance(A, FinSet) else A
    b = B.size if isinstance(B, FinSet) else B
    obj = FinSet(a + b)
    pa = span(obj, a, tuple(range(a)), tuple(range(a)))
    pb = span(obj, b, tuple(range(a, a + b)), tuple(range(b)))
    return obj, pa, pb


@dataclass
class ProductReport:
    A: int
    B: int
    n: int
    inputs: int = 0
    extended: int = 0
    unique: int = 0
    failures: list = None

    def __post_init__(self):
        if self.failures is None:
            self.failures = []

    @property
    def ok(self):
        return self.extended == self.inputs and not self.failures

    def to_dict(self):
        return {"A": self.A, "B": self.B, "n": self.n, "inputs": self.inputs, "extended": self.extended,
                "unique": self.unique, "failures": len(self.failures), "ok": self.ok}


def _sum_span(u, v, offset):
    """W <- U⊔V -> A⊔B from W <- U -> A and W <- V -> B."""
    return (tuple(u.lmap.values) + tuple(v.lmap.values),
            tuple(u.rmap.values) + tuple(offset + y for y in v.rmap.values))


def _to_projection_cell(w, s_left, s_right, part, start, size_x, offset, total):
    """The 2-cell (W, A⊔B, X) whose long edge is the part of S over X.

    part lists, for each element of that edge, its right-leg value in X;
    start is where that part begins inside S.
    """
    sizes = {(0, 0): w, (1, 1): total, (2, 2): size_x, (0, 1): len(s_left), (1, 2): size_x, (0, 2): len(part)}
    cover = {((0, 1), (0, 0)): s_left, ((0, 1), (1, 1)): s_right,
             ((1, 2), (1, 1)): tuple(range(offset, offset + size_x)), ((1, 2), (2, 2)): tuple(range(size_x)),
             ((0, 2), (0, 1)): tuple(range(start, start + len(part))), ((0, 2), (1, 2)): tuple(part)}
    return cell_from_covering(2, sizes, cover)


def _finality_0(a, b, bound, rep):
    total = a + b
    for w in range(bound + 1):
        for u in enumerate_spans(w, a, bound):
            for v in enumerate_spans(w, b, bound):
                rep.inputs += 1
                sl, sr = _sum_span(u, v, a)
                cells = [
                    _to_projection_cell(w, sl, sr, u.rmap.values, 0, a, 0, total),
                    _to_projection_cell(w, sl, sr, v.rmap.values, u.apex.size, b, a, total),
                ]
                ok = all(validate_cell(c) for c in cells) and span_of_cell(face(cells[0], 1)) == u \
                    and span_of_cell(face(cells[1], 1)) == v
                if ok:
                    rep.extended += 1
                    rep.unique += 1
                else:
                    rep.failures.append((w, u, v))


def _finality_1(a, b, bound, rep):
    total = a + b
    for w0 in range(bound + 1):
        for w1 in range(bound + 1):
            for r in enumerate_spans(w0, w1, bound):
                for u1 in enumerate_spans(w1, a, bound):
                    for v1 in enumerate_spans(w1, b, bound):
                        pu = composite_pairs(r, u1)
                        pv = composite_pairs(r, v1)
                        if len(pu) > bound or len(pv) > bound:
                            continue
                        rep.inputs += 1
                        outcome = _extend_boundary(a, b, total, w0, w1, r, u1, v1, pu, pv)
                        if outcome is None:
                            rep.failures.append((w0, w1, r, u1, v1))
                            continue
                        rep.extended += 1
                        rep.unique += outcome == 1


def _extend_boundary(a, b, total, w0, w1, r, u1, v1, pu, pv):
    """Fill a ∂Δ² in the slice whose last vertex is the product.

    Returns the number of joint extensions found by search (None if the one
    built from the limit description fails to validate or to be found).
    """
    rl, rr = r.lmap.values, r.rmap.values
    u0 = span(w0, a, [rl[x] for x, _ in pu], [u1.rmap.values[y] for _, y in pu])
    v0 = span(w0, b, [rl[x] for x, _ in pv], [v1.rmap.values[y] for _, y in pv])
    s0l, s0r = _sum_span(u0, v0, a)
    s1l, s1r = _sum_span(u1, v1, a)
    nu0, nu1 = len(pu), u1.apex.size
    worlds = []
    for part0, part1, pairs, start0, start1, size_x, offset, leg in (
            (u0.rmap.values, u1.rmap.values, pu, 0, 0, a, 0, u1),
            (v0.rmap.values, v1.rmap.values, pv, nu0, nu1, b, a, v1)):
        f0 = _to_projection_cell(w1, s1l, s1r, part1, start1, size_x, offset, total)
        f1 = _to_projection_cell(w0, s0l, s0r, part0, start0, size_x, offset, total)
        sizes = {(0, 0): w0, (1, 1): w1, (2, 2): size_x, (0, 1): r.apex.size, (1, 2): leg.apex.size,
                 (0, 2): len(pairs)}
        cover = {((0, 1), (0, 0)): rl, ((0, 1), (1, 1)): rr,
                 ((1, 2), (1, 1)): leg.lmap.values, ((1, 2), (2, 2)): leg.rmap.values,
                 ((0, 2), (0, 1)): tuple(x for x, _ in pairs), ((0, 2), (1, 2)): tuple(y for _, y in pairs)}
        f2 = cell_from_covering(2, sizes, cover)
        worlds.append({0: f0, 1: f1, 2: f2})
    # the missing face (W0, W1, A⊔B): each element of S0 comes from U0 or V0,
    # i.e. from a pair (r, u) or (r, v), and goes to r and to u or v inside S1
    to_r = tuple(x for x, _ in pu) + tuple(x for x, _ in pv)
    to_s1 = tuple(y for _, y in pu) + tuple(nu1 + y for _, y in pv)
    sizes = {(0, 0): w0, (1, 1): w1, (2, 2): total, (0, 1): r.apex.size, (1, 2): len(s1l), (0, 2): len(s0l)}
    cover = {((0, 1), (0, 0)): rl, ((0, 1), (1, 1)): rr, ((1, 2), (1, 1)): s1l, ((1, 2), (2, 2)): s1r,
             ((0, 2), (0, 1)): to_r, ((0, 2), (1, 2)): to_s1}
    new_face = cell_from_covering(2, sizes, cover)
    built = []
    for faces in worlds:
        merged = merge_faces(3, {**faces, 3: new_face})
        if merged is None:
            return None
        found = complete_cell(3, *merged)
        if len(found) != 1:
            return None
        built.append(found[0])
    # count every joint extension by search over the two new maps
    merged = merge_faces(3, worlds[0])
    if merged is None:
        return None
    count = 0
    hit = False
    for c in complete_cell(3, *merged):
        d3 = face(c, 3)
        other = merge_faces(3, {**worlds[1], 3: d3})
        if other is not None and complete_cell(3, *other, limit=1):
            count += 1
            hit = hit or d3 == new_face
    return count if hit else None


def check_product_finality(A, B, n, size_bound=2):
    """Every bounded boundary diagram in the slice over (A, B) that ends at the
    product cone extends to a simplex.

    n = 0 checks pairs of spans W -> A, W -> B (boundary of an edge ending at
    the cone); n = 1 checks boundaries of triangles whose last vertex is the
    cone.  Inputs are taken up to relabelling, which does not affect
    extendability.
    """
    a = A.size if isinstance(A, FinSet) else A
    b = B.size if isinstance(B, FinSet) else B
    rep = ProductReport(a, b, n)
    if n == 0:
        _finality_0(a, b, size_bound, rep)
    elif n == 1:
        _finality_1(a, b, size_bound, rep)
    else:
        raise ValueError("only n = 0 and n = 1 are implemented")
    return rep


# ---------------------------------------------------------------------------
# Homspaces


@dataclass(frozen=True)
class HomComponent:
    matrix: NatMatrix
    representative: Span1
    aut_order: int
    object_count: int  # labelled sets over X x Y on {0..n-1} in this component


@dataclass(frozen=True)
class GroupoidPresentation:
    X: int
    Y: int
    bound: int
    components: tuple

    def aut_orders(self):
        return [c.aut_order for c in self.components]

    def to_dict(self):
        return {"X": self.X, "Y": self.Y, "bound": self.bound,
                "components": [{"matrix": c.matrix.to_rows(), "aut_order": c.aut_order,
                                "object_count": c.object_count} for c in self.components]}


def homspace(X, Y, apex_bound):
    """Components of the groupoid of finite sets over X x Y with at most apex_bound elements."""
    x = X.size if isinstance(X, FinSet) else X
    y = Y.size if isinstance(Y, FinSet) else Y
    comps = []
    for m in enumerate_matrices(x, y, apex_bound):
        aut = automorphism_count(m)
        comps.append(HomComponent(m, canonical_span(m), aut, math.factorial(m.total()) // aut))
    return GroupoidPresentation(x, y, apex_bound, tuple(comps))


def homspace_block_sum(m, n):
    """Block-diagonal sum, the component of the sum of two spans."""
    rows = [list(r) + [0] * n.cols for r in m.to_rows()] + [[0] * m.cols + list(r) for r in n.to_rows()]
    return NatMatrix(m.rows + n.rows, m.cols + n.cols, tuple(v for r in rows for v in r))


@dataclass
class ComparisonReport:
    X: int
    Y: int
    bound: int
    components_homspace: int
    components_direct: int
    matched: int
    aut_mismatches: int
    multiset_counts_ok: bool

    @property
    def ok(self):
        return (self.components_homspace == self.components_direct == self.matched
                and self.aut_mismatches == 0 and self.multiset_counts_ok)

    def to_dict(self):
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def _orbits_direct(x, y, size):
    """Orbits of Σ_size on pairs of maps (A -> X, A -> Y), with stabilizer orders, by brute force."""
    perms = list(itertools.permutations(range(size)))
    seen = set()
    out = []
    for fx in itertools.product(range(x), repeat=size):
        for fy in itertools.product(range(y), repeat=size):
            obj = (fx, fy)
            if obj in seen:
                continue
            orbit = set()
            stab = 0
            for p in perms:
                # relabel a -> p[a]
                gx, gy = [0] * size, [0] * size
                for a in range(size):
                    gx[p[a]] = fx[a]
                    gy[p[a]] = fy[a]
                img = (tuple(gx), tuple(gy))
                orbit.add(img)
                stab += img == obj
            seen |= orbit
            out.append((obj, len(orbit), stab))
    return out


def barratt_eccles_compare(X, Y, bound):
    """Compare homspace(X, Y) with the groupoid of triples (A, A -> X, A -> Y)
    computed directly, and with the count of multisets over X x Y."""
    x = X.size if isinstance(X, FinSet) else X
    y = Y.size if isinstance(Y, FinSet) else Y
    hs = homspace(x, y, bound)
    by_matrix = {c.matrix: c for c in hs.components}
    direct = []
    for size in range(bound + 1):
        direct.extend(_orbits_direct(x, y, size))
    matched = aut_bad = 0
    hit = set()
    for (fx, fy), orbit_size, stab in direct:
        m = span_matrix(span(x, y, fx, fy))
        comp = by_matrix.get(m)
        if comp is None or m in hit:
            continue
        hit.add(m)
        matched += 1
        if comp.aut_order != stab or comp.object_count != orbit_size:
            aut_bad += 1
    cells = x * y
    multisets_ok = all(
        sum(1 for c in hs.components if c.matrix.total() == k) == math.comb(cells + k - 1, k) if cells else
        sum(1 for c in hs.components if c.matrix.total() == k) == (1 if k == 0 else 0)
        for k in range(bound + 1))
    return ComparisonReport(x, y, bound, len(hs.components), len(direct), matched, aut_bad, multisets_ok)
