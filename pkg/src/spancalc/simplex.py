"""Truncated simplicial sets, horns and boundaries, and nerves.

A nerve of a bicategory whose 2-cells are invertible is described by triangle
data: objects X_i, 1-cells f_ij and 2-cells theta_ijk : f_jk∘f_ij => f_ik.
Composition of 1-cells is written diagrammatically, so ``compose(f_ij, f_jk)``
is f_jk∘f_ij.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    CompatibilityFail,
    DimOverCap,
    InvalidCategory,
    NotInvertible,
    NotMonotone,
)


# ---------------------------------------------------------------------------
# The interval posets C_n


@dataclass(frozen=True)
class IntervalPoset:
    n: int
    elements: tuple

    @staticmethod
    def leq(a, b):
        """(i, j) <= (i', j') iff [i', j'] is contained in [i, j]."""
        return a[0] <= b[0] and b[1] <= a[1]

    def __len__(self):
        return len(self.elements)


def intervals(n):
    return [(i, j) for i in range(n + 1) for j in range(i, n + 1)]


def interval_poset(n):
    return IntervalPoset(n, tuple(intervals(n)))


def induced(phi, n=None):
    """The poset map C_m -> C_n of a monotone phi : [m] -> [n] (given as its image list)."""
    phi = tuple(phi)
    if any(a > b for a, b in zip(phi, phi[1:])):
        raise NotMonotone(f"{phi} is not monotone")
    if n is not None and phi and (phi[0] < 0 or phi[-1] > n):
        raise NotMonotone(f"{phi} does not land in [{n}]")
    m = len(phi) - 1
    return {(i, j): (phi[i], phi[j]) for i, j in intervals(m)}


def coface(n, i):
    """delta_i : [n-1] -> [n], skipping i."""
    return tuple(v if v < i else v + 1 for v in range(n))


def codegeneracy(n, i):
    """sigma_i : [n+1] -> [n], hitting i twice."""
    return tuple(v if v <= i else v - 1 for v in range(n + 2))


# ---------------------------------------------------------------------------
# Finite categories


@dataclass
class FiniteCategory:
    """Objects, named morphisms name -> (source, target), identities, and the
    composition table keyed (f, g) for "f then g"."""

    objects: tuple
    morphisms: dict
    identities: dict
    composition: dict

    def __post_init__(self):
        self.objects = tuple(self.objects)
        for x in self.objects:
            e = self.identities.get(x)
            if e is None or self.morphisms.get(e) != (x, x):
                raise InvalidCategory(f"bad identity at {x!r}")
        for f, (a, b) in self.morphisms.items():
            if a not in self.objects or b not in self.objects:
                raise InvalidCategory(f"{f!r} has unknown endpoints")
        for f, (a, b) in self.morphisms.items():
            for g, (c, d) in self.morphisms.items():
                if b != c:
                    continue
                h = self.composition.get((f, g))
                if h is None or self.morphisms.get(h) != (a, d):
                    raise InvalidCategory(f"composite of {f!r} then {g!r} missing or misplaced")
            if self.composition[(self.identities[a], f)] != f or self.composition[(f, self.identities[b])] != f:
                raise InvalidCategory(f"identity law fails at {f!r}")
        for f, g, h in itertools.product(self.morphisms, repeat=3):
            if self.morphisms[f][1] == self.morphisms[g][0] and self.morphisms[g][1] == self.morphisms[h][0]:
                c = self.composition
                if c[(c[(f, g)], h)] != c[(f, c[(g, h)])]:
                    raise InvalidCategory(f"associativity fails at {(f, g, h)!r}")

    def hom(self, a, b):
        return [f for f, ends in self.morphisms.items() if ends == (a, b)]

    def compose(self, f, g):
        return self.composition[(f, g)]


def poset_category(n):
    """The chain 0 < 1 < ... < n-1."""
    objs = tuple(range(n))
    morphisms = {(a, b): (a, b) for a in objs for b in objs if a <= b}
    composition = {((a, b), (b, c)): (a, c) for (a, b) in morphisms for (bb, c) in morphisms if b == bb}
    return FiniteCategory(objs, morphisms, {a: (a, a) for a in objs}, composition)


def group_category(order, mult, unit=0):
    """A group (or monoid) on {0..order-1} as a one-object category; mult(g, h) is 'g then h'."""
    morphisms = {g: ("*", "*") for g in range(order)}
    composition = {(g, h): mult(g, h) for g in range(order) for h in range(order)}
    return FiniteCategory(("*",), morphisms, {"*": unit}, composition)


def cyclic_group_category(k):
    return group_category(k, lambda g, h: (g + h) % k)


# ---------------------------------------------------------------------------
# Truncated simplicial sets


class TruncatedSSet:
    """Cells in dimensions 0..cap with face and degeneracy tables.

    ``cells[d]`` is a list of hashable cells; ``face[d][i][c]`` is the index of
    d_i of cell c (for d >= 1) and ``degeneracy[d][i][c]`` the index of s_i of c
    (for d < cap).  Simplicial identities are verified on construction.
    """

    def __init__(self, cap, cells, face_fn, degeneracy_fn, check=True):
        self.cap = cap
        self.cells = [list(cs) for cs in cells]
        self.index = [{c: i for i, c in enumerate(cs)} for cs in self.cells]
        self.face = [None]
        self.degeneracy = []
        for d in range(1, cap + 1):
            self.face.append([[self._lookup(d - 1, face_fn(c, d, i)) for c in self.cells[d]]
                              for i in range(d + 1)])
        for d in range(cap):
            self.degeneracy.append([[self._lookup(d + 1, degeneracy_fn(c, d, i)) for c in self.cells[d]]
                                    for i in range(d + 1)])
        self._filler_index = {}
        if check:
            self.check_identities()

    def _lookup(self, d, cell):
        try:
            return self.index[d][cell]
        except KeyError:
            raise CompatibilityFail(f"face or degeneracy leaves the complex in dimension {d}") from None

    def check_identities(self):
        F, S = self.face, self.degeneracy
        for d in range(2, self.cap + 1):
            for j in range(d + 1):
                for i in range(j):
                    for c in range(len(self.cells[d])):
                        if F[d - 1][i][F[d][j][c]] != F[d - 1][j - 1][F[d][i][c]]:
                            raise CompatibilityFail(f"d{i} d{j} != d{j - 1} d{i} in dimension {d}")
        for d in range(self.cap):
            for j in range(d + 1):
                for c in range(len(self.cells[d])):
                    s = S[d][j][c]
                    if F[d + 1][j][s] != c or F[d + 1][j + 1][s] != c:
                        raise CompatibilityFail(f"d s_{j} != id in dimension {d}")
                    for i in range(d + 2):
                        if i < j:
                            if F[d + 1][i][s] != S[d - 1][j - 1][F[d][i][c]]:
                                raise CompatibilityFail("d_i s_j != s_{j-1} d_i")
                        elif i > j + 1:
                            if F[d + 1][i][s] != S[d - 1][j][F[d][i - 1][c]]:
                                raise CompatibilityFail("d_i s_j != s_j d_{i-1}")
        for d in range(self.cap - 1):
            for j in range(d + 1):
                for i in range(j + 1):
                    for c in range(len(self.cells[d])):
                        if S[d + 1][i][S[d][j][c]] != S[d + 1][j + 1][S[d][i][c]]:
                            raise CompatibilityFail("s_i s_j != s_{j+1} s_i")

    def nondegenerate(self, d):
        if d == 0:
            return list(self.cells[0])
        image = {s for table in self.degeneracy[d - 1] for s in table}
        return [c for i, c in enumerate(self.cells[d]) if i not in image]

    def faces_of(self, d, c):
        return tuple(self.face[d][i][c] for i in range(d + 1))

    # horns -----------------------------------------------------------------

    def _partial_maps(self, n, omit):
        if n > self.cap:
            raise DimOverCap(f"dimension {n} above cap {self.cap}")
        return compatible_assignments(self.face[n - 1], len(self.cells[n - 1]), n, omit)

    def horn_maps(self, n, k):
        cells = self.cells[n - 1]
        for a in self._partial_maps(n, {k}):
            yield HornMap(n, k, tuple(None if i == k else cells[a[i]] for i in range(n + 1)))

    def boundary_maps(self, n):
        cells = self.cells[n - 1]
        for a in self._partial_maps(n, set()):
            yield BoundaryMap(n, tuple(cells[a[i]] for i in range(n + 1)))

    def _fill_index(self, n, k):
        key = (n, k)
        if key not in self._filler_index:
            table = {}
            for c in range(len(self.cells[n])):
                faces = tuple(self.face[n][i][c] for i in range(n + 1) if i != k)
                table.setdefault(faces, []).append(c)
            self._filler_index[key] = table
        return self._filler_index[key]

    def fillers(self, h):
        n = h.n
        k = h.k if isinstance(h, HornMap) else None
        idx = self.index[n - 1]
        faces = tuple(idx[h.faces[i]] for i in range(n + 1) if i != k)
        return [self.cells[n][c] for c in self._fill_index(n, k).get(faces, ())]

    def horn_fill_counts(self, n, k):
        counts = Counter()
        for h in self.horn_maps(n, k):
            counts[len(self.fillers(h))] += 1
        return counts

    def boundary_fill_counts(self, n):
        counts = Counter()
        for b in self.boundary_maps(n):
            counts[len(self.fillers(b))] += 1
        return counts


def compatible_assignments(face_table, count, n, omit):
    """Face-compatible assignments of (n-1)-cell indices to the faces not in omit.

    face_table[i][c] is the index of d_i of the (n-1)-cell c.  An assignment
    y satisfies d_i y_j = d_{j-1} y_i for all retained i < j.
    """
    F = face_table
    present = [i for i in range(n + 1) if i not in omit]
    by_face = {}
    for i in range(n):
        table = {}
        for c, v in enumerate(F[i]):
            table.setdefault(v, []).append(c)
        by_face[i] = table
    assignment = {}

    def extend(pos):
        if pos == len(present):
            yield dict(assignment)
            return
        j = present[pos]
        earlier = present[:pos]
        if earlier:
            i0 = earlier[0]
            candidates = by_face[i0].get(F[j - 1][assignment[i0]], ())
        else:
            candidates = range(count)
        for y in candidates:
            if all(F[i][y] == F[j - 1][assignment[i]] for i in earlier):
                assignment[j] = y
                yield from extend(pos + 1)
        assignment.pop(j, None)

    yield from extend(0)


@dataclass(frozen=True)
class HornMap:
    n: int
    k: int
    faces: tuple


@dataclass(frozen=True)
class BoundaryMap:
    n: int
    faces: tuple


def enumerate_horn_maps(X, n, k):
    return list(X.horn_maps(n, k))


def enumerate_boundary_maps(X, n):
    return list(X.boundary_maps(n))


def fillers(X, h):
    return X.fillers(h)


# ---------------------------------------------------------------------------
# Nerves of categories


def nerve_category(objects, morphisms=None, composition=None, N=4, identities=None):
    """Nerve of a finite category, truncated at dimension N.

    Either pass a FiniteCategory as the first argument, or its pieces.
    0-cells are objects; d-cells (d >= 1) are tuples of d composable morphisms.
    """
    if isinstance(objects, FiniteCategory):
        cat = objects
    else:
        if identities is None:
            identities = _find_identities(objects, morphisms, composition)
        cat = FiniteCategory(tuple(objects), dict(morphisms), identities, dict(composition))
    cells = [list(cat.objects)]
    ends = cat.morphisms
    if N >= 1:
        cells.append([(f,) for f in cat.morphisms])
    for d in range(2, N + 1):
        cells.append([c + (g,) for c in cells[-1] for g in cat.morphisms if ends[c[-1]][1] == ends[g][0]])

    def face_fn(c, d, i):
        if d == 1:
            return ends[c[0]][1] if i == 0 else ends[c[0]][0]
        if i == 0:
            return c[1:]
        if i == d:
            return c[:-1]
        return c[:i - 1] + (cat.compose(c[i - 1], c[i]),) + c[i + 1:]

    def degeneracy_fn(c, d, i):
        if d == 0:
            return (cat.identities[c],)
        vertex = ends[c[i]][0] if i < d else ends[c[-1]][1]
        return c[:i] + (cat.identities[vertex],) + c[i:]

    return TruncatedSSet(N, cells, face_fn, degeneracy_fn)


def _find_identities(objects, morphisms, composition):
    ids = {}
    for x in objects:
        for e, ends in morphisms.items():
            if ends != (x, x):
                continue
            if all(composition.get((e, f), f) == f for f, (a, _) in morphisms.items() if a == x) and \
                    all(composition.get((f, e), f) == f for f, (_, b) in morphisms.items() if b == x):
                ids[x] = e
                break
        else:
            raise InvalidCategory(f"no identity at {x!r}")
    return ids


# ---------------------------------------------------------------------------
# Nerves of bicategories with invertible 2-cells


@dataclass(frozen=True)
class Nerve2Data:
    """Objects X_0..X_n, 1-cells f_ij (i < j) and 2-cells theta_ijk (i < j < k)."""

    objects: tuple
    morphisms: tuple = field(default=())   # ((i, j), f) sorted by (i, j)
    two_cells: tuple = field(default=())   # ((i, j, k), theta) sorted

    @classmethod
    def build(cls, objects, morphisms, two_cells):
        return cls(tuple(objects), tuple(sorted(morphisms.items())), tuple(sorted(two_cells.items())))

    @property
    def n(self):
        return len(self.objects) - 1

    def mor(self, i, j):
        return dict(self.morphisms)[(i, j)]

    def theta(self, i, j, k):
        return dict(self.two_cells)[(i, j, k)]

    def restrict(self, vertices):
        """The cell on the given increasing vertex list, reindexed from 0."""
        mor, th = dict(self.morphisms), dict(self.two_cells)
        objs = [self.objects[v] for v in vertices]
        m = len(vertices)
        new_mor = {(a, b): mor[(vertices[a], vertices[b])] for a in range(m) for b in range(a + 1, m)}
        new_th = {(a, b, c): th[(vertices[a], vertices[b], vertices[c])]
                  for a in range(m) for b in range(a + 1, m) for c in range(b + 1, m)}
        return Nerve2Data.build(objs, new_mor, new_th)

    def face(self, i):
        return self.restrict([v for v in range(self.n + 1) if v != i])


def compatibility_holds(bicat, cell, quadruple):
    i, j, k, l = quadruple
    f = dict(cell.morphisms)
    th = dict(cell.two_cells)
    lhs = bicat.vcomp(th[(i, j, l)], bicat.hcomp(th[(j, k, l)], bicat.identity2(f[(i, j)])))
    lhs = bicat.vcomp(lhs, bicat.associator(f[(i, j)], f[(j, k)], f[(k, l)]))
    rhs = bicat.vcomp(th[(i, k, l)], bicat.hcomp(bicat.identity2(f[(k, l)]), th[(i, j, k)]))
    return lhs == rhs


def is_valid_nerve_cell(bicat, cell):
    n = cell.n
    return all(compatibility_holds(bicat, cell, q) for q in itertools.combinations(range(n + 1), 4))


def nerve_degeneracy(bicat, cell, i):
    sigma = codegeneracy(cell.n, i)
    n1 = cell.n + 1
    f = dict(cell.morphisms)
    th = dict(cell.two_cells)
    objs = [cell.objects[sigma[a]] for a in range(n1 + 1)]

    def one(a, b):
        sa, sb = sigma[a], sigma[b]
        return bicat.identity(cell.objects[sa]) if sa == sb else f[(sa, sb)]

    mor = {(a, b): one(a, b) for a in range(n1 + 1) for b in range(a + 1, n1 + 1)}
    two = {}
    for a, b, c in itertools.combinations(range(n1 + 1), 3):
        sa, sb, sc = sigma[a], sigma[b], sigma[c]
        if sa == sb:
            two[(a, b, c)] = bicat.left_unitor(mor[(b, c)])
        elif sb == sc:
            two[(a, b, c)] = bicat.right_unitor(mor[(a, b)])
        else:
            two[(a, b, c)] = th[(sa, sb, sc)]
    return Nerve2Data.build(objs, mor, two)


def enumerate_nerve_cells(bicat, N):
    """All Nerve2Data cells of dimension 0..N over the bicategory's listed objects and 1-cells."""
    levels = [[Nerve2Data((x,)) for x in bicat.objects()]]
    objects = bicat.objects()
    for d in range(1, N + 1):
        out = []
        for base in levels[-1]:
            for x in objects:
                out.extend(_extend_cell(bicat, base, x))
        levels.append(out)
    return levels


def _extend_cell(bicat, base, x):
    d = base.n + 1
    objs = base.objects + (x,)
    mor = dict(base.morphisms)
    th = dict(base.two_cells)

    def choose(i):
        # fill f_{i,d} and theta_{i,j,d} for all j > i, then recurse to i - 1
        if i < 0:
            yield Nerve2Data.build(objs, mor, th)
            return
        for f in bicat.hom(objs[i], x):
            mor[(i, d)] = f
            yield from choose_thetas(i, i + 1)
        mor.pop((i, d), None)

    def choose_thetas(i, j):
        if j == d:
            yield from choose(i - 1)
            return
        f_ij, f_jd, f_id = mor[(i, j)], mor[(j, d)], mor[(i, d)]
        for t in bicat.two_cells(bicat.compose(f_ij, f_jd), f_id):
            th[(i, j, d)] = t
            if all(_compat_partial(bicat, mor, th, i, j, k, d) for k in range(j + 1, d)) and \
                    all(_compat_partial(bicat, mor, th, i, h, j, d) for h in range(i + 1, j)):
                yield from choose_thetas(i, j + 1)
        th.pop((i, j, d), None)

    yield from choose(d - 1)


def _compat_partial(bicat, mor, th, i, j, k, l):
    needed = [(i, j, l), (j, k, l), (i, k, l), (i, j, k)]
    if not all(t in th for t in needed):
        return True
    cell = Nerve2Data.build(range(l + 1), {key: mor[key] for key in [(i, j), (j, k), (k, l)]},
                            {t: th[t] for t in needed})
    return compatibility_holds(bicat, cell, (i, j, k, l))


def nerve_2cat(bicat, N, cells=None):
    """Nerve of a bicategory with invertible 2-cells, truncated at N.

    By default the cells are enumerated from the bicategory's listed 1-cells;
    a precomputed list of levels may be passed instead, in which case each
    cell is checked for compatibility.
    """
    if cells is None:
        cells = enumerate_nerve_cells(bicat, N)
    else:
        for level in cells:
            for c in level:
                if not is_valid_nerve_cell(bicat, c):
                    raise CompatibilityFail(f"incompatible 2-cells in a {c.n}-cell")

    def face_fn(c, d, i):
        return c.face(i)

    def degeneracy_fn(c, d, i):
        return nerve_degeneracy(bicat, c, i)

    return TruncatedSSet(N, cells, face_fn, degeneracy_fn)


class CategoryBicategory:
    """A 1-category viewed as a bicategory with identity 2-cells only."""

    def __init__(self, cat):
        self.cat = cat

    def objects(self):
        return list(self.cat.objects)

    def hom(self, a, b):
        return self.cat.hom(a, b)

    def compose(self, f, g):
        return self.cat.compose(f, g)

    def two_cells(self, f, g):
        return [("id", f)] if f == g else []

    def identity(self, a):
        return self.cat.identities[a]

    def identity2(self, f):
        return ("id", f)

    def vcomp(self, b, a):
        if a != b:
            raise CompatibilityFail("non-matching identity 2-cells")
        return a

    def hcomp(self, b, a):
        return ("id", self.cat.compose(a[1], b[1]))

    def inverse(self, a):
        return a

    def associator(self, f, g, h):
        return ("id", self.cat.compose(self.cat.compose(f, g), h))

    def left_unitor(self, f):
        return ("id", f)

    def right_unitor(self, f):
        return ("id", f)


# ---------------------------------------------------------------------------
# Explicit fillers for 3-dimensional inner horns


def _horn_data(h):
    """Collect f_ij and theta_ijk of a 3-dimensional horn from its faces."""
    mor, th = {}, {}
    for i, face in enumerate(h.faces):
        if face is None:
            continue
        verts = [v for v in range(4) if v != i]
        fm, ft = dict(face.morphisms), dict(face.two_cells)
        for (a, b), f in fm.items():
            mor[(verts[a], verts[b])] = f
        for (a, b, c), t in ft.items():
            th[(verts[a], verts[b], verts[c])] = t
        objs = face.objects
        for a, v in enumerate(verts):
            mor.setdefault(("obj", v), objs[a])
    objects = tuple(mor.pop(("obj", v)) for v in range(4))
    return objects, mor, th


def _invert(bicat, t):
    try:
        return bicat.inverse(t)
    except Exception as exc:  # pragma: no cover - depends on the bicategory
        raise NotInvertible(str(exc)) from exc


def filler_formula_21(h, bicat):
    """Fill a horn missing face 1 (the 2-cell theta_023) by the explicit composite."""
    objects, f, th = _horn_data(h)
    theta = bicat.vcomp(
        th[(0, 1, 3)],
        bicat.vcomp(
            bicat.hcomp(th[(1, 2, 3)], bicat.identity2(f[(0, 1)])),
            bicat.vcomp(
                bicat.associator(f[(0, 1)], f[(1, 2)], f[(2, 3)]),
                bicat.hcomp(bicat.identity2(f[(2, 3)]), _invert(bicat, th[(0, 1, 2)])),
            ),
        ),
    )
    th = dict(th)
    th[(0, 2, 3)] = theta
    return Nerve2Data.build(objects, f, th)


def filler_formula_32(h, bicat):
    """Fill a horn missing face 2 (the 2-cell theta_013)."""
    objects, f, th = _horn_data(h)
    theta = bicat.vcomp(
        th[(0, 2, 3)],
        bicat.vcomp(
            bicat.hcomp(bicat.identity2(f[(2, 3)]), th[(0, 1, 2)]),
            bicat.vcomp(
                _invert(bicat, bicat.associator(f[(0, 1)], f[(1, 2)], f[(2, 3)])),
                _invert(bicat, bicat.hcomp(th[(1, 2, 3)], bicat.identity2(f[(0, 1)]))),
            ),
        ),
    )
    th = dict(th)
    th[(0, 1, 3)] = theta
    return Nerve2Data.build(objects, f, th)


# ---------------------------------------------------------------------------
# Reports


@dataclass
class HornCount:
    shape: str
    n: int
    k: int | None
    horns: int
    fill0: int
    fill1: int
    fill_many: int

    @property
    def unique(self):
        return self.fill0 == 0 and self.fill_many == 0

    def to_dict(self):
        return {"shape": self.shape, "n": self.n, "k": self.k, "horns": self.horns,
                "fill0": self.fill0, "fill1": self.fill1, "fill_many": self.fill_many,
                "unique": self.unique}


def _summarize(shape, n, k, counts):
    return HornCount(shape, n, k, sum(counts.values()), counts.get(0, 0), counts.get(1, 0),
                     sum(v for c, v in counts.items() if c > 1))


@dataclass
class N1Report:
    entries: list

    def get(self, shape):
        for e in self.entries:
            if e.shape == shape:
                return e
        raise KeyError(shape)

    @property
    def all_unique(self):
        return all(e.unique for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e.unique]

    def to_dict(self):
        return {"entries": [e.to_dict() for e in self.entries], "all_unique": self.all_unique}


def check_n1_property(X, n_max, n_min=3, outer=False, boundaries=True):
    """Count fillers of horns (inner, and outer if asked) and of boundaries.

    X may be a TruncatedSSet or any object offering ``horn_fill_counts`` and
    ``boundary_fill_counts``; counts may be weighted.
    """
    entries = []
    for n in range(n_min, n_max + 1):
        ks = range(n + 1) if outer else range(1, n)
        for k in ks:
            entries.append(_summarize(f"L{n}_{k}", n, k, X.horn_fill_counts(n, k)))
        if boundaries:
            entries.append(_summarize(f"B{n}", n, None, X.boundary_fill_counts(n)))
    return N1Report(entries)
