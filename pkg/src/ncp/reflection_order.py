"""Absolute length, absolute order and noncrossing partition lattices.

Reflection length is found by best-first search over right multiplication
by reflections. The heuristic n - fix_dim is admissible because one
reflection moves fix_dim by at most one.
"""
from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd
from typing import Sequence

from .catalog import catalog
from .colored_perm import (
    ColoredPermutation, GroupParams, compose, coxeter_element, cycle_decomposition,
    fix_dim, format_element, identity, inverse, random_element, reflections,
)
from .poset import GradedPoset, find_isomorphism

DEFAULT_CAP = 200_000


class LatticeTooLarge(RuntimeError):
    pass


class _LengthOracle:
    """Memoized exact reflection length for one group.

    The cache only ever gains entries, so sharing it is harmless.
    """

    def __init__(self, params: GroupParams):
        self.params = params
        self.refl = [r.element(params) for r in reflections(params)]
        self.cache: dict[tuple, int] = {identity(params).key: 0}

    def length(self, u: ColoredPermutation) -> int:
        cache = self.cache
        start = u.key
        if start in cache:
            return cache[start]
        n = self.params.n
        tick = itertools.count()
        heap = [(n - fix_dim(u), 0, next(tick), u, False)]  # ties go to deeper nodes
        best = {start: 0}
        parent = {start: None}
        while heap:
            f, negg, _, x, done = heapq.heappop(heap)
            g = -negg
            if done:
                total = f
                break
            xk = x.key
            if g > best[xk]:
                continue
            if xk in cache:
                # exact remainder known: schedule a finished candidate
                heapq.heappush(heap, (g + cache[xk], -g, next(tick), x, True))
                continue
            for t in self.refl:
                y = compose(x, t)
                yk = y.key
                g2 = g + 1
                if g2 < best.get(yk, g2 + 1):
                    best[yk] = g2
                    parent[yk] = xk
                    heapq.heappush(heap, (g2 + n - fix_dim(y), -g2, next(tick), y, False))
        else:  # pragma: no cover
            raise RuntimeError("search exhausted without reaching the identity")
        # every node on the optimal path has an exact remaining length
        k = x.key
        while k is not None:
            cache.setdefault(k, total - best[k])
            k = parent[k]
        return total


_ORACLES: dict[GroupParams, _LengthOracle] = {}


def _oracle(params: GroupParams) -> _LengthOracle:
    o = _ORACLES.get(params)
    if o is None:
        o = _ORACLES.setdefault(params, _LengthOracle(params))
    return o


def reflection_length(u: ColoredPermutation) -> int:
    """Minimal number of reflections with product u."""
    return _oracle(u.params).length(u)


def leq_T(u: ColoredPermutation, v: ColoredPermutation) -> bool:
    if u.params != v.params:
        raise ValueError(f"parameter mismatch: {u.params} vs {v.params}")
    return reflection_length(v) == reflection_length(u) + reflection_length(compose(inverse(u), v))


@dataclass(eq=False)
class NCLattice:
    params: GroupParams
    gamma: ColoredPermutation
    elements: list[ColoredPermutation]
    rank: list[int]
    up_covers: list[tuple[int, ...]]
    down_covers: list[tuple[int, ...]]
    element_index: dict[ColoredPermutation, int]

    def __len__(self):
        return len(self.elements)

    def index(self, u: ColoredPermutation) -> int:
        try:
            return self.element_index[u]
        except KeyError:
            raise KeyError(f"{format_element(u)} is not in the lattice") from None

    def __contains__(self, u):
        return u in self.element_index

    @cached_property
    def poset(self) -> GradedPoset:
        return GradedPoset(tuple(self.rank), tuple(self.up_covers),
                           tuple(format_element(u) for u in self.elements))

    def to_poset(self) -> GradedPoset:
        return self.poset

    def rank_vector(self) -> tuple[int, ...]:
        return self.poset.rank_vector()

    def leq(self, i: int, j: int) -> bool:
        return self.poset.leq(i, j)

    def interval(self, i: int, j: int) -> list[int]:
        return self.poset.interval(i, j)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1


def build_nc_lattice(params: GroupParams, gamma: ColoredPermutation | None = None,
                     cap: int = DEFAULT_CAP) -> NCLattice:
    """The interval [identity, gamma] in absolute order, built top-down."""
    if gamma is None:
        gamma = coxeter_element(params)
        predicted = catalog(params.family, params.d, params.n).catalan
        if predicted > cap:
            raise LatticeTooLarge(f"{params} has {predicted} noncrossing partitions, cap is {cap}")
    elif gamma.params != params:
        raise ValueError("gamma belongs to a different group")
    n = params.n
    oracle = _oracle(params)
    refl = oracle.refl
    top = oracle.length(gamma)
    rank_of = {gamma: top}
    down: dict[ColoredPermutation, list[ColoredPermutation]] = {}
    level = [gamma]
    for r in range(top, 0, -1):
        need = n - (r - 1)  # l(u) >= n - fix_dim(u) rules most candidates out
        nxt: dict[ColoredPermutation, None] = {}
        for w in level:
            lows = []
            for t in refl:
                u = compose(w, t)
                if fix_dim(u) < need:
                    continue
                if u in nxt or oracle.length(u) == r - 1:
                    lows.append(u)
                    nxt[u] = None
            down[w] = lows
        for u in nxt:
            rank_of[u] = r - 1
        if len(rank_of) > cap:
            raise LatticeTooLarge(f"more than {cap} elements below {format_element(gamma)}")
        level = list(nxt)
    elements = sorted(rank_of, key=lambda u: (rank_of[u], u.encoding))
    index = {u: i for i, u in enumerate(elements)}
    ups = [[] for _ in elements]
    downs = [[] for _ in elements]
    for w, lows in down.items():
        j = index[w]
        for u in lows:
            i = index[u]
            ups[i].append(j)
            downs[j].append(i)
    return NCLattice(params, gamma, elements, [rank_of[u] for u in elements],
                     [tuple(sorted(x)) for x in ups], [tuple(sorted(x)) for x in downs], index)


@lru_cache(maxsize=None)
def standard_lattice(d: int, n: int) -> NCLattice:
    """NC lattice for the standard Coxeter element, shared across callers."""
    return build_nc_lattice(GroupParams(d, n))


def atoms(L: NCLattice) -> set[ColoredPermutation]:
    return {L.elements[j] for j in L.up_covers[0]}


def coatoms(L: NCLattice) -> set[ColoredPermutation]:
    return {L.elements[j] for j in L.down_covers[L.top]}


def _as_index(L: NCLattice, x) -> int:
    return x if isinstance(x, int) else L.index(x)


def translate_interval(L: NCLattice, u, x, y) -> dict[int, int]:
    """Index map of w -> u^-1 w from [x, y] onto [u^-1 x, u^-1 y]."""
    iu, ix, iy = (_as_index(L, z) for z in (u, x, y))
    if not (L.leq(iu, ix) and L.leq(ix, iy)):
        raise ValueError("translate_interval needs u <= x <= y")
    uinv = inverse(L.elements[iu])
    return {i: L.index(compose(uinv, L.elements[i])) for i in L.interval(ix, iy)}


@dataclass(frozen=True)
class IntervalFactor:
    """One irreducible factor of [identity, w].

    Point ``support[j]`` with color c corresponds to point j+1 of the standard
    group with color ``multiplier * (c - offsets[j])``.
    """

    params: GroupParams        # ambient group
    std: GroupParams           # standard group of the factor
    support: tuple[int, ...]   # 1-based ambient indices
    offsets: tuple[int, ...]
    multiplier: int

    @property
    def family(self) -> str:
        return self.std.family

    @property
    def lattice(self) -> NCLattice:
        return standard_lattice(self.std.d, self.std.n)

    def to_standard(self, v: ColoredPermutation) -> ColoredPermutation:
        d = self.params.d
        pos = {k: j for j, k in enumerate(self.support)}
        perm, shifts = [], []
        for j, k in enumerate(self.support):
            t = v.perm[k - 1] + 1
            if t not in pos:
                raise ValueError(f"{format_element(v)} does not preserve the factor support")
            j2 = pos[t]
            s = self.multiplier * (v.shifts[k - 1] + self.offsets[j] - self.offsets[j2]) % d
            perm.append(j2)
            shifts.append(s)
        if self.std.d == 1:
            if any(shifts):
                raise ValueError(f"{format_element(v)} does not lie below a simultaneous cycle")
        return ColoredPermutation._make(self.std, tuple(perm), tuple(shifts))

    def embedding(self, e: ColoredPermutation) -> list[tuple[int, int, int]]:
        """Ambient (index, target, shift) triples, 0-based, for a standard element."""
        d = self.params.d
        inv = pow(self.multiplier, -1, d) if d > 1 else 0
        out = []
        for j, k in enumerate(self.support):
            j2 = e.perm[j]
            s = (inv * e.shifts[j] - self.offsets[j] + self.offsets[j2]) % d if d > 1 else 0
            out.append((k - 1, self.support[j2] - 1, s))
        return out

    def from_standard(self, e: ColoredPermutation) -> ColoredPermutation:
        n = self.params.n
        perm, shifts = list(range(n)), [0] * n
        for k, t, s in self.embedding(e):
            perm[k], shifts[k] = t, s
        return ColoredPermutation._make(self.params, tuple(perm), tuple(shifts))

    def describe(self) -> str:
        return f"NC({self.std})"


def factorize(w: ColoredPermutation) -> list[IntervalFactor]:
    """Split w into the standard Coxeter elements of its irreducible parts.

    Fixed points are dropped. All balanced cycles together must form a
    long cycle with unit winding plus one fixed-index balanced cycle.
    """
    params = w.params
    d = params.d
    factors = []
    balanced = []
    for cyc in cycle_decomposition(w):
        if cyc.winding:
            balanced.append(cyc)
        elif len(cyc) > 1:
            factors.append(IntervalFactor(params, GroupParams(1, len(cyc)), cyc.support,
                                          tuple(p.color for p in cyc.points), 1))
    if balanced:
        if len(balanced) == 1:
            raise ValueError("a single balanced cycle is not an element of G(d,d,n)")
        singles = [c for c in balanced if len(c) == 1]
        longs = [c for c in balanced if len(c) > 1]
        if len(balanced) != 2 or len(longs) > 1:
            raise ValueError(f"unsupported balanced cycles in {format_element(w)}")
        if longs:
            long, single = longs[0], singles[0]
        else:
            # two fixed indices: pick the one whose winding is a unit
            units = [c for c in balanced if _is_unit(c.winding, d)]
            if not units:
                raise ValueError(f"no unit winding in {format_element(w)}")
            long = units[0]
            single = balanced[1] if long is balanced[0] else balanced[0]
        if not _is_unit(long.winding, d):
            raise ValueError(f"winding {long.winding} is not a unit mod {d}")
        pts = long.points + single.points
        factors.append(IntervalFactor(params, GroupParams(d, len(pts)),
                                      tuple(p.index for p in pts),
                                      tuple(p.color for p in pts),
                                      pow(long.winding, -1, d)))
    factors.sort(key=lambda f: f.support)
    return factors


def _is_unit(s: int, d: int) -> bool:
    return gcd(s, d) == 1


def interval_factorization(L: NCLattice, w) -> list[IntervalFactor]:
    """Factors of [identity, w] for a lattice member w."""
    i = _as_index(L, w)
    return factorize(L.elements[i])


def split_element(factors: Sequence[IntervalFactor], v: ColoredPermutation) -> tuple[ColoredPermutation, ...]:
    return tuple(f.to_standard(v) for f in factors)


def join_elements(params: GroupParams, factors: Sequence[IntervalFactor],
                  parts: Sequence[ColoredPermutation]) -> ColoredPermutation:
    n = params.n
    perm, shifts = list(range(n)), [0] * n
    for f, e in zip(factors, parts):
        for k, t, s in f.embedding(e):
            perm[k], shifts[k] = t, s
    return ColoredPermutation._make(params, tuple(perm), tuple(shifts))


def galois_twist(u: ColoredPermutation, k: int) -> ColoredPermutation:
    """Apply the Galois automorphism zeta -> zeta^k to every color."""
    d = u.params.d
    return ColoredPermutation._make(u.params, u.perm, tuple(k * s % d for s in u.shifts))


def nc_isomorphic_all_coxeter(params: GroupParams, sample: int = 3, seed: int = 0,
                              cap: int = 64) -> bool:
    """Compare NC for the standard Coxeter element against conjugates and
    Galois twists of it."""
    base = build_nc_lattice(params, cap=cap)
    if len(base) > cap:
        raise LatticeTooLarge(f"{params} exceeds the isomorphism cap {cap}")
    gamma = base.gamma
    rng = random.Random(seed)
    others = []
    for _ in range(sample):
        g = random_element(params, rng)
        others.append(compose(compose(g, gamma), inverse(g)))
    for k in range(2, params.d):
        if _is_unit(k, params.d):
            others.append(galois_twist(gamma, k))
    for c in others:
        L = build_nc_lattice(params, gamma=c, cap=cap)
        if find_isomorphism(base.poset, L.poset, cap) is None:
            return False
    return True


def hasse_reachability_matches(L: NCLattice, pairs: Sequence[tuple[int, int]] | None = None) -> bool:
    """leq_T agrees with reachability in the Hasse diagram."""
    P = L.poset
    if pairs is None:
        pairs = [(i, j) for i in range(len(L)) for j in range(len(L))]
    return all(P.leq(i, j) == leq_T(L.elements[i], L.elements[j]) for i, j in pairs)
