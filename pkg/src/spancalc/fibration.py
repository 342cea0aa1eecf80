"""Span^× = Span(Arr(FinSet)) over Span, cartesian edges and lifting probes.

A cell of Span^× is a pair of Span cells (top over bottom) with a component
map top(I) -> bottom(I) for every interval, natural in the structure maps.
Projection keeps the bottom cell.  Throughout, the edge under test in a lifting
problem is the last edge of the simplex, and a lifting problem against
∂Δ^m -> Δ^m for the map to the slice over its target is the same as filling
all faces but the last one of an (m+2)-simplex over a given bottom cell.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .errors import DimError, Mismatch
from .finset import FinSet, SetMap, is_mono, is_epi, is_pullback_values, pullback, pullback_pairs
from .simplex import coface, codegeneracy, intervals
from .spans import span
from .spanqc import (
    SpanCell,
    cell_from_covering,
    cell_from_maps,
    cell_of_span,
    cell_shape,
    derive_maps,
    face,
    reindex,
    validate_cell,
    _covering,
)


@dataclass(frozen=True)
class ArrObj:
    top: FinSet
    bottom: FinSet
    arrow: SetMap


@dataclass(frozen=True)
class ArrSpanCell:
    top_cell: SpanCell
    bottom_cell: SpanCell
    components: tuple  # value tuples, indexed like intervals(n)

    @property
    def n(self):
        return self.top_cell.n

    def component(self, iv):
        return self.components[cell_shape(self.n)[1][iv]]


def validate_arr_cell(c):
    top, bot = c.top_cell, c.bottom_cell
    if top.n != bot.n or not validate_cell(top) or not validate_cell(bot):
        return False
    ivs, iidx, pairs, _, _, _ = cell_shape(top.n)
    if len(c.components) != len(ivs):
        return False
    for iv, comp in zip(ivs, c.components):
        if len(comp) != top.size(iv) or any(not 0 <= v < bot.size(iv) for v in comp):
            return False
    for (a, b), tv, bv in zip(pairs, top.values, bot.values):
        ca, cb = c.components[iidx[a]], c.components[iidx[b]]
        if any(bv[ca[e]] != cb[tv[e]] for e in range(len(tv))):
            return False
    return True


def reindex_arr(c, phi):
    m = len(phi) - 1
    comps = tuple(c.component((phi[i], phi[j])) for i, j in intervals(m))
    return ArrSpanCell(reindex(c.top_cell, phi), reindex(c.bottom_cell, phi), comps)


def arr_face(c, i):
    return reindex_arr(c, coface(c.n, i))


def arr_degeneracy(c, i):
    return reindex_arr(c, codegeneracy(c.n, i))


def project(c):
    return c.bottom_cell


def arr_cell(n, top_sizes, top_cover, bottom, comps):
    """Assemble an n-cell from top sizes and covering maps, a bottom cell and components."""
    top = cell_from_covering(n, top_sizes, top_cover)
    return ArrSpanCell(top, bottom, tuple(tuple(comps[iv]) for iv in intervals(n)))


def identity_arr(F):
    """F over itself via identity components."""
    return ArrSpanCell(F, F, tuple(tuple(range(s)) for s in F.sizes))


# ---------------------------------------------------------------------------
# One-cells


@dataclass(frozen=True)
class Edge:
    """Raw data of a 1-cell of Span^×: top span T0 <- T01 -> T1 over B0 <- B01 -> B1."""

    T0: int
    T01: int
    T1: int
    tl: tuple
    tr: tuple
    B0: int
    B01: int
    B1: int
    bl: tuple
    br: tuple
    c0: tuple
    c01: tuple
    c1: tuple

    def cell(self):
        top = cell_of_span(span(self.T0, self.T1, self.tl, self.tr))
        bot = cell_of_span(span(self.B0, self.B1, self.bl, self.br))
        return ArrSpanCell(top, bot, (self.c0, self.c01, self.c1))

    @classmethod
    def of(cls, c):
        if c.n != 1:
            raise DimError("expected a 1-cell")
        t, b = c.top_cell, c.bottom_cell
        v = lambda F, a, bb: F.map_values(a, bb)
        return cls(t.size((0, 0)), t.size((0, 1)), t.size((1, 1)),
                   v(t, (0, 1), (0, 0)), v(t, (0, 1), (1, 1)),
                   b.size((0, 0)), b.size((0, 1)), b.size((1, 1)),
                   v(b, (0, 1), (0, 0)), v(b, (0, 1), (1, 1)),
                   c.component((0, 0)), c.component((0, 1)), c.component((1, 1)))


def is_cartesian_structural(e):
    """Top left leg a bijection, and the square top(0,1) -> top(1), bottom(0,1) -> bottom(1) a pullback."""
    if e.n != 1:
        raise DimError(f"expected a 1-cell, got dimension {e.n}")
    d = Edge.of(e)
    if len(d.tl) != d.T0 or len(set(d.tl)) != d.T0:
        return False
    return is_pullback_values(d.T01, d.tr, d.c01, d.c1, d.br)


def cartesian_lift(base, fiber):
    """The cartesian edge over base with target fiber: top P <-id- P -> fiber.top,
    P the pullback of base's right leg against fiber.arrow."""
    if fiber.arrow.cod != base.right_foot or fiber.bottom != base.right_foot:
        raise Mismatch("fiber must lie over the right foot of the base span")
    pb = pullback(base.rmap, fiber.arrow)
    p = pb.apex.size
    proj_u, proj_y = pb.left.values, pb.right.values
    top = cell_of_span(span(p, fiber.top.size, tuple(range(p)), proj_y))
    bottom = cell_of_span(base)
    comps = (tuple(base.lmap.values[u] for u in proj_u), proj_u, fiber.arrow.values)
    return ArrSpanCell(top, bottom, comps)


# ---------------------------------------------------------------------------
# Inner horns Λ²₁


def _pullback_cell(e01, e12):
    """The canonical 2-cell with edges e01, e12 (raw (x0, x1, x2, l01, r01, l12, r12))."""
    x0, x1, x2, l01, r01, l12, r12 = e01[0], e01[1], e12[1], e01[2], e01[3], e12[2], e12[3]
    pairs = pullback_pairs(r01, l12)
    sizes = {(0, 0): x0, (1, 1): x1, (2, 2): x2, (0, 1): len(l01), (1, 2): len(l12), (0, 2): len(pairs)}
    cover = {((0, 1), (0, 0)): l01, ((0, 1), (1, 1)): r01, ((1, 2), (1, 1)): l12, ((1, 2), (2, 2)): r12,
             ((0, 2), (0, 1)): tuple(a for a, _ in pairs), ((0, 2), (1, 2)): tuple(b for _, b in pairs)}
    return cell_from_covering(2, sizes, cover), pairs


def inner_horn_fill_spantimes(e01, e12):
    """Fill the horn with edges e01, e12 using canonical pullbacks on both levels."""
    a, b = Edge.of(e01), Edge.of(e12)
    if (a.T1, a.B1, a.c1) != (b.T0, b.B0, b.c0):
        raise Mismatch("edges do not share a vertex")
    top, tpairs = _pullback_cell((a.T0, a.T1, a.tl, a.tr), (b.T0, b.T1, b.tl, b.tr))
    bot, bpairs = _pullback_cell((a.B0, a.B1, a.bl, a.br), (b.B0, b.B1, b.bl, b.br))
    bindex = {p: k for k, p in enumerate(bpairs)}
    comp02 = tuple(bindex[(a.c01[u], b.c01[v])] for u, v in tpairs)
    comps = {(0, 0): a.c0, (0, 1): a.c01, (1, 1): a.c1, (1, 2): b.c01, (2, 2): b.c1, (0, 2): comp02}
    return ArrSpanCell(top, bot, tuple(comps[iv] for iv in intervals(2)))


# ---------------------------------------------------------------------------
# Lifting problems


@dataclass
class LiftingProblem:
    """Fill an (m+2)-simplex of Span^× over ``bottom`` given every face but the last.

    faces[i] is the face opposite vertex i, for i = 0..m+1; the edge under test
    is (m+1, m+2).
    """

    m: int
    faces: dict
    bottom: SpanCell
    label: str = ""

    @property
    def n(self):
        return self.m + 2


def validate_problem(p):
    n = p.n
    if p.bottom.n != n or not validate_cell(p.bottom):
        return False
    for i, f in p.faces.items():
        if f.n != n - 1 or not validate_arr_cell(f) or f.bottom_cell != face(p.bottom, i):
            return False
    for i, j in itertools.combinations(sorted(p.faces), 2):
        if arr_face(p.faces[j], i) != arr_face(p.faces[i], j - 1):
            return False
    return True


def _merge_arr_faces(n, faces):
    sizes, known, comps = {}, {}, {}
    ivs_local, _, pairs_local, _, _, _ = cell_shape(n - 1)
    for i, f in faces.items():
        verts = coface(n, i)
        for (a, b), s, cmp in zip(ivs_local, f.top_cell.sizes, f.components):
            key = (verts[a], verts[b])
            if sizes.setdefault(key, s) != s or comps.setdefault(key, cmp) != cmp:
                return None
        for (x, y), v in zip(pairs_local, f.top_cell.values):
            key = ((verts[x[0]], verts[x[1]]), (verts[y[0]], verts[y[1]]))
            if known.setdefault(key, v) != v:
                return None
    return sizes, known, comps


def _check_solution(p, top_sizes, cover, comps):
    n = p.n
    maps = derive_maps(n, cover)
    top = cell_from_maps(n, top_sizes, maps)
    c = ArrSpanCell(top, p.bottom, tuple(tuple(comps[iv]) for iv in intervals(n)))
    if not validate_arr_cell(c):
        return None
    if any(arr_face(c, i) != f for i, f in p.faces.items()):
        return None
    return c


def set_partitions(n):
    """Restricted growth strings of length n: block labels in order of first appearance."""
    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            yield from rec(prefix + [b], max(top, b))
    yield from rec([], -1)


def solve_lifting(p, limit=None):
    """All fillers of the problem (for m = 0, those whose new set is the image
    of F(0,2), which exist whenever any filler does)."""
    n = p.n
    merged = _merge_arr_faces(n, p.faces)
    if merged is None:
        return []
    sizes, known, comps = merged
    bottom = p.bottom
    if p.m == 0:
        return _solve_m0(p, sizes, known, comps, limit)
    cover = {}
    missing = []
    for pair in _covering(n):
        if pair in known:
            cover[pair] = known[pair]
        else:
            missing.append(pair)
    options = []
    for src, dst in missing:
        checks = [(known[(dst, k)], known[(src, k)]) for k in _inside(dst) if (dst, k) in known and (src, k) in known]
        bmap = bottom.map_values(src, dst)
        cs, cd = comps[src], comps[dst]
        per = []
        for e in range(sizes[src]):
            per.append([j for j in range(sizes[dst])
                        if cd[j] == bmap[cs[e]] and all(jk[j] == ik[e] for jk, ik in checks)])
        options.append(per)
    found = []
    for choice in itertools.product(*(itertools.product(*o) for o in options)):
        for pair, vals in zip(missing, choice):
            cover[pair] = vals
        c = _check_solution(p, sizes, cover, comps)
        if c is not None:
            found.append(c)
            if limit is not None and len(found) >= limit:
                break
    return found


def _inside(iv):
    i, j = iv
    return [(a, b) for a in range(i, j + 1) for b in range(a, j + 1) if (a, b) != iv]


def _solve_m0(p, sizes, known, comps, limit):
    bottom = p.bottom
    n02 = sizes[(0, 2)]
    to0 = known[((0, 2), (0, 0))]
    to2 = known[((0, 2), (2, 2))]
    t12_to1 = known[((1, 2), (1, 1))]
    t12_to2 = known[((1, 2), (2, 2))]
    c02, c12 = comps[(0, 2)], comps[(1, 2)]
    b02_12 = bottom.map_values((0, 2), (1, 2))
    b02_01 = bottom.map_values((0, 2), (0, 1))
    per = [[j for j in range(sizes[(1, 2)]) if t12_to2[j] == to2[e] and c12[j] == b02_12[c02[e]]]
           for e in range(n02)]
    found = []
    for h in itertools.product(*per):
        for blocks in set_partitions(n02):
            k = max(blocks) + 1 if blocks else 0
            l01, r01, c01 = [None] * k, [None] * k, [None] * k
            ok = True
            for e, blk in enumerate(blocks):
                vals = (to0[e], t12_to1[h[e]], b02_01[c02[e]])
                if l01[blk] is None:
                    l01[blk], r01[blk], c01[blk] = vals
                elif (l01[blk], r01[blk], c01[blk]) != vals:
                    ok = False
                    break
            if not ok:
                continue
            sz = dict(sizes)
            sz[(0, 1)] = k
            cover = {pair: known[pair] for pair in _covering(2) if pair in known}
            cover[((0, 1), (0, 0))] = tuple(l01)
            cover[((0, 1), (1, 1))] = tuple(r01)
            cover[((0, 2), (0, 1))] = tuple(blocks)
            cover[((0, 2), (1, 2))] = tuple(h)
            cm = dict(comps)
            cm[(0, 1)] = tuple(c01)
            c = _check_solution(p, sz, cover, cm)
            if c is not None:
                found.append(c)
                if limit is not None and len(found) >= limit:
                    return found
    return found


def has_lift(p):
    return bool(solve_lifting(p, limit=1))


# ---------------------------------------------------------------------------
# Problem families
#
# The bottom of every problem here is an iterated cone on the bottom span of
# the edge: the test vertices lie over a point.


def cone_cell(F):
    """Prepend a vertex with a one-point set: C(0,0) = 1, C(i,j) = F(max(i-1,0), j-1) otherwise."""
    n = F.n + 1

    def src(iv):
        i, j = iv
        return None if j == 0 else (max(i - 1, 0), j - 1)

    sizes = {}
    for iv in intervals(n):
        s = src(iv)
        sizes[iv] = 1 if s is None else F.size(s)
    maps = {}
    for a, b in cell_shape(n)[2]:
        sa, sb = src(a), src(b)
        if sb is None:
            maps[(a, b)] = (0,) * sizes[a]
        else:
            maps[(a, b)] = F.map_values(sa, sb)
    return cell_from_maps(n, sizes, maps)


def _cone_power(F, r):
    for _ in range(r):
        F = cone_cell(F)
    return F


def problem_c0(d, z, triples):
    """m = 0: a test vertex with top set z over a point, and an edge z <- G -> T1
    whose elements are the triples (z-label, t in T1, b in B01)."""
    sigma = _cone_power(span_cell_bottom(d), 1)
    g = len(triples)
    top_g = {(0, 0): z, (0, 1): g, (1, 1): d.T1}
    cover_g = {((0, 1), (0, 0)): tuple(x for x, _, _ in triples), ((0, 1), (1, 1)): tuple(t for _, t, _ in triples)}
    comps_g = {(0, 0): (0,) * z, (0, 1): tuple(b for _, _, b in triples), (1, 1): d.c1}
    face1 = arr_cell(1, top_g, cover_g, face(sigma, 1), comps_g)
    return LiftingProblem(0, {0: d.cell(), 1: face1}, sigma, label="c0")


def span_cell_bottom(d):
    return cell_of_span(span(d.B0, d.B1, d.bl, d.br))


def _fibre_product(labels, d):
    """U x_{T0} T01 for U given by its labels in T0: canonical pairs (u, a)."""
    return pullback_pairs(labels, d.tl)


def problem_c1(d, u0, u1, phi):
    """m = 1 with point test vertices and a one-point edge between them.

    u0, u1 list the T0-labels of the sets over the edge's source; phi is the
    bijection u0 x T01 -> u1 x T01 (as canonical pair indices) of the face
    opposite vertex 2.
    """
    bottom = _cone_power(span_cell_bottom(d), 2)
    p0, p1 = _fibre_product(u0, d), _fibre_product(u1, d)
    c0 = d.c0

    def side(labels, pairs, first_vertex_pt):
        # the 2-cell (pt, T0, T1) with edges pt <- U -> T0, T0 <- T01 -> T1
        sizes = {(0, 0): 1, (1, 1): d.T0, (2, 2): d.T1, (0, 1): len(labels), (1, 2): d.T01, (0, 2): len(pairs)}
        cover = {((0, 1), (0, 0)): (0,) * len(labels), ((0, 1), (1, 1)): tuple(labels),
                 ((1, 2), (1, 1)): d.tl, ((1, 2), (2, 2)): d.tr,
                 ((0, 2), (0, 1)): tuple(a for a, _ in pairs), ((0, 2), (1, 2)): tuple(b for _, b in pairs)}
        comps = {(0, 0): (0,), (1, 1): c0, (2, 2): d.c1, (0, 1): tuple(c0[x] for x in labels),
                 (1, 2): d.c01, (0, 2): tuple(d.c01[b] for _, b in pairs)}
        return sizes, cover, comps

    faces = {}
    for i, (labels, pairs) in ((0, (u1, p1)), (1, (u0, p0))):
        sizes, cover, comps = side(labels, pairs, True)
        faces[i] = arr_cell(2, sizes, cover, face(bottom, i), comps)
    sizes = {(0, 0): 1, (1, 1): 1, (2, 2): d.T1, (0, 1): 1, (1, 2): len(p1), (0, 2): len(p0)}
    cover = {((0, 1), (0, 0)): (0,), ((0, 1), (1, 1)): (0,),
             ((1, 2), (1, 1)): (0,) * len(p1), ((1, 2), (2, 2)): tuple(d.tr[b] for _, b in p1),
             ((0, 2), (0, 1)): (0,) * len(p0), ((0, 2), (1, 2)): tuple(phi)}
    comps = {(0, 0): (0,), (1, 1): (0,), (2, 2): d.c1, (0, 1): (0,),
             (1, 2): tuple(d.c01[b] for _, b in p1), (0, 2): tuple(d.c01[b] for _, b in p0)}
    faces[2] = arr_cell(2, sizes, cover, face(bottom, 2), comps)
    return LiftingProblem(1, faces, bottom, label="c1")


def problem_d2(d, labels, phis):
    """m = 2 with three point test vertices, point edges among them, the same set U
    (labels in T0) over each test vertex, and phis[(i, j)] : U -> U for the
    faces containing the edge (i, 3) -> (j, 3)."""
    bottom = _cone_power(span_cell_bottom(d), 3)
    pairs = _fibre_product(labels, d)
    index = {p: k for k, p in enumerate(pairs)}
    nu, npairs = len(labels), len(pairs)
    c0 = d.c0

    def lift_phi(phi):
        return tuple(index[(phi[u], a)] for u, a in pairs)

    faces = {}
    # faces through the edge under test: vertex sets {i, j, 3, 4}
    for omit, (i, j) in ((0, (1, 2)), (1, (0, 2)), (2, (0, 1))):
        phi = phis[(i, j)]
        sizes = {(0, 0): 1, (1, 1): 1, (2, 2): d.T0, (3, 3): d.T1, (0, 1): 1, (1, 2): nu, (0, 2): nu,
                 (2, 3): d.T01, (1, 3): npairs, (0, 3): npairs}
        cover = {((0, 1), (0, 0)): (0,), ((0, 1), (1, 1)): (0,),
                 ((1, 2), (1, 1)): (0,) * nu, ((1, 2), (2, 2)): tuple(labels),
                 ((2, 3), (2, 2)): d.tl, ((2, 3), (3, 3)): d.tr,
                 ((0, 2), (0, 1)): (0,) * nu, ((0, 2), (1, 2)): tuple(phi),
                 ((1, 3), (1, 2)): tuple(u for u, _ in pairs), ((1, 3), (2, 3)): tuple(a for _, a in pairs),
                 ((0, 3), (0, 2)): tuple(u for u, _ in pairs), ((0, 3), (1, 3)): lift_phi(phi)}
        ucomp = tuple(c0[x] for x in labels)
        pcomp = tuple(d.c01[a] for _, a in pairs)
        comps = {(0, 0): (0,), (1, 1): (0,), (2, 2): c0, (3, 3): d.c1, (0, 1): (0,), (1, 2): ucomp,
                 (0, 2): ucomp, (2, 3): d.c01, (1, 3): pcomp, (0, 3): pcomp}
        faces[omit] = arr_cell(3, sizes, cover, face(bottom, omit), comps)
    # the face opposite the edge's source: vertex set {0, 1, 2, 4}
    sizes = {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): d.T1, (0, 1): 1, (1, 2): 1, (0, 2): 1,
             (2, 3): npairs, (1, 3): npairs, (0, 3): npairs}
    to_t1 = tuple(d.tr[a] for _, a in pairs)
    cover = {((0, 1), (0, 0)): (0,), ((0, 1), (1, 1)): (0,), ((1, 2), (1, 1)): (0,), ((1, 2), (2, 2)): (0,),
             ((2, 3), (2, 2)): (0,) * npairs, ((2, 3), (3, 3)): to_t1,
             ((0, 2), (0, 1)): (0,), ((0, 2), (1, 2)): (0,),
             ((1, 3), (1, 2)): (0,) * npairs, ((1, 3), (2, 3)): lift_phi(phis[(1, 2)]),
             ((0, 3), (0, 2)): (0,) * npairs, ((0, 3), (1, 3)): lift_phi(phis[(0, 1)])}
    pcomp = tuple(d.c01[a] for _, a in pairs)
    comps = {(0, 0): (0,), (1, 1): (0,), (2, 2): (0,), (3, 3): d.c1, (0, 1): (0,), (1, 2): (0,), (0, 2): (0,),
             (2, 3): pcomp, (1, 3): pcomp, (0, 3): pcomp}
    faces[3] = arr_cell(3, sizes, cover, face(bottom, 3), comps)
    return LiftingProblem(2, faces, bottom, label="d2")


# ---------------------------------------------------------------------------
# The four probes drawn in the necessity arguments, and bounded families


def _pb_pairs(d):
    """T1 x_{B1} B01 as pairs (t, b)."""
    return [(t, b) for t in range(d.T1) for b in range(d.B01) if d.c1[t] == d.br[b]]


def element_probes(d):
    """For each (t, b) in T1 x_{B1} B01: a one-point test vertex with an edge picking (t, b)."""
    return [problem_c0(d, 1, [(0, t, b)]) for t, b in _pb_pairs(d)]


def surjectivity_probes(d):
    """For each x in T0 missed by the top left leg."""
    image = set(d.tl)
    return [problem_c1(d, [x], [], ()) for x in range(d.T0) if x not in image]


def injectivity_probes(d):
    """For each fibre P of the top left leg with at least two elements, and each
    non-identity permutation of P preserving the right leg and the component."""
    out = []
    for x in range(d.T0):
        fibre = [a for a in range(d.T01) if d.tl[a] == x]
        if len(fibre) < 2:
            continue
        for perm in itertools.permutations(range(len(fibre))):
            if perm == tuple(range(len(fibre))):
                continue
            moved = [fibre[k] for k in perm]
            if all(d.tr[a] == d.tr[b] and d.c01[a] == d.c01[b] for a, b in zip(fibre, moved)):
                out.append(problem_c1(d, [x], [x], perm))
    return out


def pullback_injectivity_probes(d):
    """For each pair a != a' over the same (t, b), both alone in their fibres of the top left leg."""
    counts = Counter(d.tl)
    single = [a for a in range(d.T01) if counts[d.tl[a]] == 1]
    out = []
    for a, a2 in itertools.permutations(single, 2):
        if (d.tr[a], d.c01[a]) == (d.tr[a2], d.c01[a2]):
            out.append(problem_c1(d, [d.tl[a2]], [d.tl[a]], (0,)))
    return out


PAPER_PROBES = (
    ("element", element_probes),
    ("topmap_surjective", surjectivity_probes),
    ("topmap_injective", injectivity_probes),
    ("pullback_injective", pullback_injectivity_probes),
)


def multisets(items, max_size):
    for k in range(max_size + 1):
        yield from itertools.combinations_with_replacement(items, k)


def family_c0(d, bound):
    """Every cone-shaped m = 0 problem with test sets of size <= bound, one per
    relabelling of the test vertex."""
    pb = _pb_pairs(d)
    for z in range(bound + 1):
        triples = [(x, t, b) for x in range(z) for t, b in pb]
        seen = set()
        for ms in multisets(triples, bound):
            key = min(tuple(sorted((perm[x], t, b) for x, t, b in ms)) for perm in itertools.permutations(range(z))) \
                if z else ms
            if key in seen:
                continue
            seen.add(key)
            yield problem_c0(d, z, list(key))


def family_c1(d, bound):
    """Every m = 1 problem with point test vertices, a point edge between them,
    sets over T0 of size <= bound and compatible bijections phi."""
    lists = list(multisets(range(d.T0), bound))
    for u0 in lists:
        p0 = _fibre_product(u0, d)
        if len(p0) > bound:
            continue
        for u1 in lists:
            p1 = _fibre_product(u1, d)
            if len(p1) != len(p0):
                continue
            keys0 = [(d.tr[a], d.c01[a]) for _, a in p0]
            keys1 = [(d.tr[a], d.c01[a]) for _, a in p1]
            for phi in itertools.permutations(range(len(p1))):
                if all(keys1[phi[k]] == keys0[k] for k in range(len(p0))):
                    yield problem_c1(d, list(u0), list(u1), phi)


def family_d2(d, bound):
    """m = 2 problems with point test vertices and edges, the same set U over
    each test vertex, and any label-preserving permutations on the three faces."""
    for labels in multisets(range(d.T0), bound):
        if len(_fibre_product(labels, d)) > bound:
            continue
        autos = [p for p in itertools.permutations(range(len(labels)))
                 if all(labels[p[k]] == labels[k] for k in range(len(labels)))]
        for a, b, c in itertools.product(autos, repeat=3):
            yield problem_d2(d, labels, {(0, 1): a, (0, 2): b, (1, 2): c})


@dataclass
class ProbeReport:
    passed: bool
    killed_by: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    def to_dict(self):
        return {"passed": self.passed, "killed_by": list(self.killed_by), "counts": dict(self.counts)}


def run_probes(e, universe_bound=3, stop_early=True):
    """Run the four drawn probes, then (if they all pass) the bounded families.

    ``killed_by`` names every drawn probe with an unliftable instance; if none
    of them fails but a bounded-family problem does, it holds "bounded_m0" or
    "bounded_m1".
    """
    d = Edge.of(e)
    killed, counts = [], {}
    for name, gen in PAPER_PROBES:
        problems = [p for p in gen(d) if validate_problem(p)]
        fails = sum(1 for p in problems if not has_lift(p))
        counts[name] = [len(problems), fails]
        if fails:
            killed.append(name)
    if killed and stop_early:
        return ProbeReport(False, killed, counts)
    for name, gen in (("bounded_m0", family_c0), ("bounded_m1", family_c1)):
        total = fails = 0
        for p in gen(d, universe_bound):
            if not validate_problem(p):
                continue
            total += 1
            if not has_lift(p):
                fails += 1
                if stop_early:
                    break
        counts[name] = [total, fails]
        if fails:
            killed.append(name)
            if stop_early:
                break
    return ProbeReport(not killed, killed, counts)


def probe_battery(e, universe_bound=3):
    return run_probes(e, universe_bound).passed


def boundary2_check(e, bound=2):
    """(problems, failures) over the m = 2 family."""
    d = Edge.of(e)
    total = fails = 0
    for p in family_d2(d, bound):
        if not validate_problem(p):
            continue
        total += 1
        fails += not has_lift(p)
    return total, fails


# ---------------------------------------------------------------------------
# Bounded sweep


def _raw_spans(bound):
    out = []
    for x0 in range(bound + 1):
        for x1 in range(bound + 1):
            for s in range(bound + 1):
                for lv in itertools.product(range(x0), repeat=s):
                    for rv in itertools.product(range(x1), repeat=s):
                        out.append((x0, s, x1, lv, rv))
    return out


def enumerate_edges(bound):
    """All labelled 1-cells of Span^× with every set of size <= bound."""
    spans_ = _raw_spans(bound)
    for T0, T01, T1, tl, tr in spans_:
        for B0, B01, B1, bl, br in spans_:
            for c0 in itertools.product(range(B0), repeat=T0):
                for c1 in itertools.product(range(B1), repeat=T1):
                    per = [[b for b in range(B01) if bl[b] == c0[tl[a]] and br[b] == c1[tr[a]]]
                           for a in range(T01)]
                    for c01 in itertools.product(*per):
                        yield Edge(T0, T01, T1, tl, tr, B0, B01, B1, bl, br, c0, c01, c1)


def canonical_edge(d):
    """Smallest relabelling of all six sets, as a comparable tuple."""
    best = None
    for p0 in itertools.permutations(range(d.T0)):
        for p1 in itertools.permutations(range(d.T1)):
            for q0 in itertools.permutations(range(d.B0)):
                for q1 in itertools.permutations(range(d.B1)):
                    for q01 in itertools.permutations(range(d.B01)):
                        bl = [None] * d.B01
                        br = [None] * d.B01
                        for b in range(d.B01):
                            bl[q01[b]] = q0[d.bl[b]]
                            br[q01[b]] = q1[d.br[b]]
                        c0 = [None] * d.T0
                        c1 = [None] * d.T1
                        for x in range(d.T0):
                            c0[p0[x]] = q0[d.c0[x]]
                        for y in range(d.T1):
                            c1[p1[y]] = q1[d.c1[y]]
                        rows = sorted((p0[d.tl[a]], p1[d.tr[a]], q01[d.c01[a]]) for a in range(d.T01))
                        key = (tuple(bl), tuple(br), tuple(c0), tuple(c1), tuple(rows))
                        if best is None or key < best:
                            best = key
    return (d.T0, d.T01, d.T1, d.B0, d.B01, d.B1) + best


@dataclass
class SweepReport:
    total: int = 0
    structural: int = 0
    passing: int = 0
    agree: int = 0
    classes: int = 0
    kills: Counter = field(default_factory=Counter)
    disagreements: list = field(default_factory=list)
    boundary_problems: int = 0
    boundary_failures: int = 0

    @property
    def ok(self):
        return self.agree == self.total and self.boundary_failures == 0

    def to_dict(self):
        return {"total": self.total, "structural": self.structural, "passing": self.passing,
                "agree": self.agree, "classes": self.classes, "kills": dict(self.kills),
                "disagreements": len(self.disagreements), "boundary_problems": self.boundary_problems,
                "boundary_failures": self.boundary_failures}


def classify_edges(set_bound=2, universe_bound=3, boundary_bound=2):
    """Compare the structural test with the probe battery on every bounded 1-cell.

    Results are computed once per isomorphism class of 1-cells, since both
    tests are invariant under relabelling.
    """
    rep = SweepReport()
    memo = {}
    for d in enumerate_edges(set_bound):
        key = canonical_edge(d)
        if key not in memo:
            e = d.cell()
            structural = is_cartesian_structural(e)
            probes = run_probes(e, universe_bound)
            bp = bf = 0
            if probes.passed:
                bp, bf = boundary2_check(e, boundary_bound)
            memo[key] = (structural, probes, bp, bf)
        structural, probes, bp, bf = memo[key]
        rep.total += 1
        rep.structural += structural
        rep.passing += probes.passed
        if structural == probes.passed:
            rep.agree += 1
        else:
            rep.disagreements.append(d)
        rep.kills.update(probes.killed_by)
        rep.boundary_problems += bp
        rep.boundary_failures += bf
    rep.classes = len(memo)
    return rep
