"""Finite sets {0, ..., n-1}, maps between them, pullbacks and coproducts."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .errors import (
    CodomainMismatch,
    DomainMismatch,
    LengthMismatch,
    NotCommuting,
    OutOfRange,
)


@dataclass(frozen=True, slots=True)
class FinSet:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise OutOfRange(f"negative set size {self.size}")

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))


@dataclass(frozen=True, slots=True)
class SetMap:
    dom: FinSet
    cod: FinSet
    values: tuple

    def __post_init__(self):
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.dom.size:
            raise LengthMismatch(f"{len(self.values)} values for a domain of size {self.dom.size}")
        n = self.cod.size
        for v in self.values:
            if not 0 <= v < n:
                raise OutOfRange(f"value {v} outside codomain of size {n}")

    def __call__(self, x):
        return self.values[x]

    def fiber(self, y):
        return [x for x, v in enumerate(self.values) if v == y]


@dataclass(frozen=True, slots=True)
class MapClass:
    mono: bool
    epi: bool
    iso: bool
    split_epi: bool


@dataclass(frozen=True, slots=True)
class PullbackSquare:
    """A commuting square  apex -left-> A -f-> C  and  apex -right-> B -g-> C."""

    apex: FinSet
    left: SetMap
    right: SetMap
    f: SetMap
    g: SetMap

    @property
    def pairs(self):
        return tuple(zip(self.left.values, self.right.values))


def make_set(n):
    return FinSet(n)


def make_map(dom, cod, values):
    return SetMap(dom, cod, tuple(values))


def identity_map(a):
    return SetMap(a, a, tuple(range(a.size)))


def compose_maps(g, f):
    """g after f."""
    if f.cod != g.dom:
        raise DomainMismatch(f"cannot compose: codomain {f.cod.size} vs domain {g.dom.size}")
    gv = g.values
    return SetMap(f.dom, g.cod, tuple(gv[v] for v in f.values))


def pullback_pairs(fv, gv):
    """Pairs (a, b) with fv[a] == gv[b], in lexicographic order."""
    by_value = {}
    for b, c in enumerate(gv):
        by_value.setdefault(c, []).append(b)
    return [(a, b) for a, c in enumerate(fv) for b in by_value.get(c, ())]


def pullback(f, g):
    if f.cod != g.cod:
        raise CodomainMismatch(f"pullback of maps into {f.cod.size} and {g.cod.size}")
    pairs = pullback_pairs(f.values, g.values)
    apex = FinSet(len(pairs))
    left = SetMap(apex, f.dom, tuple(a for a, _ in pairs))
    right = SetMap(apex, g.dom, tuple(b for _, b in pairs))
    return PullbackSquare(apex, left, right, f, g)


def coproduct(a, b):
    total = FinSet(a.size + b.size)
    inl = SetMap(a, total, tuple(range(a.size)))
    inr = SetMap(b, total, tuple(range(a.size, a.size + b.size)))
    return total, inl, inr


def is_mono(f):
    return len(set(f.values)) == len(f.values)


def is_epi(f):
    return len(set(f.values)) == f.cod.size


def find_section(f):
    """Search for s with f∘s = id, one codomain element at a time."""
    fibers = [f.fiber(y) for y in range(f.cod.size)]
    for choice in itertools.product(*fibers):
        s = SetMap(f.cod, f.dom, choice)
        if compose_maps(f, s).values == tuple(range(f.cod.size)):
            return s
    return None


def classify_map(f):
    mono = is_mono(f)
    epi = is_epi(f)
    return MapClass(mono=mono, epi=epi, iso=mono and epi, split_epi=find_section(f) is not None)


def is_pullback_values(apex_size, left, right, fv, gv):
    """Raw test: does (left, right) exhibit apex as the pullback of fv, gv?

    Assumes the square commutes.
    """
    pairs = set(zip(left, right))
    if len(pairs) != apex_size:
        return False
    fc = Counter(fv)
    gc = Counter(gv)
    return apex_size == sum(n * gc[c] for c, n in fc.items())


def is_pullback_square(sq):
    fl = compose_maps(sq.f, sq.left).values
    gr = compose_maps(sq.g, sq.right).values
    if fl != gr:
        raise NotCommuting("square does not commute")
    return is_pullback_values(sq.apex.size, sq.left.values, sq.right.values, sq.f.values, sq.g.values)


def all_maps(dom, cod):
    """Every map dom -> cod, in lexicographic order of value tuples."""
    for values in itertools.product(range(cod.size), repeat=dom.size):
        yield SetMap(dom, cod, values)


def bijections(n):
    return itertools.permutations(range(n))
