"""Finite graded posets given by their Hasse diagrams.

Comparability is stored as Python ints used as bitsets: bit j of
``upsets[i]`` is set when i < j.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Sequence


def iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True, eq=False)
class GradedPoset:
    rank: tuple[int, ...]
    up_covers: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        m = len(self.rank)
        if len(self.up_covers) != m:
            raise ValueError("rank and up_covers must have the same length")
        if self.labels is not None and len(self.labels) != m:
            raise ValueError("labels must have one entry per element")
        for i, ups in enumerate(self.up_covers):
            if len(set(ups)) != len(ups):
                raise ValueError(f"duplicate cover above element {i}")
            for j in ups:
                if not (0 <= j < m):
                    raise ValueError(f"cover {i} -> {j} out of range")
                if self.rank[j] != self.rank[i] + 1:
                    raise ValueError(
                        f"cover {i} -> {j} jumps from rank {self.rank[i]} to {self.rank[j]}")

    @classmethod
    def from_covers(cls, rank: Sequence[int], covers: Iterable[tuple[int, int]],
                    labels: Sequence[str] | None = None) -> "GradedPoset":
        up = [[] for _ in rank]
        for lo, hi in covers:
            up[lo].append(hi)
        return cls(tuple(rank), tuple(tuple(sorted(u)) for u in up),
                   tuple(labels) if labels is not None else None)

    @property
    def m(self) -> int:
        return len(self.rank)

    def __len__(self):
        return len(self.rank)

    @cached_property
    def down_covers(self) -> tuple[tuple[int, ...], ...]:
        down = [[] for _ in range(self.m)]
        for i, ups in enumerate(self.up_covers):
            for j in ups:
                down[j].append(i)
        return tuple(tuple(sorted(x)) for x in down)

    def covers(self) -> list[tuple[int, int]]:
        return [(i, j) for i, ups in enumerate(self.up_covers) for j in ups]

    @cached_property
    def upsets(self) -> tuple[int, ...]:
        """Strict up-sets as bitsets."""
        order = sorted(range(self.m), key=lambda i: -self.rank[i])
        up = [0] * self.m
        for i in order:
            acc = 0
            for j in self.up_covers[i]:
                acc |= up[j] | (1 << j)
            up[i] = acc
        return tuple(up)

    @cached_property
    def downsets(self) -> tuple[int, ...]:
        down = [0] * self.m
        for i, ups in enumerate(self.upsets):
            for j in iter_bits(ups):
                down[j] |= 1 << i
        return tuple(down)

    def less(self, i: int, j: int) -> bool:
        return bool(self.upsets[i] >> j & 1)

    def leq(self, i: int, j: int) -> bool:
        return i == j or self.less(i, j)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    @property
    def min_rank(self) -> int:
        return min(self.rank) if self.rank else 0

    @property
    def max_rank(self) -> int:
        return max(self.rank) if self.rank else -1

    def rank_vector(self) -> tuple[int, ...]:
        if not self.rank:
            return ()
        c = Counter(self.rank)
        return tuple(c.get(k, 0) for k in range(self.max_rank + 1))

    def rank_levels(self) -> list[list[int]]:
        levels = [[] for _ in range(self.max_rank + 1)]
        for i, r in enumerate(self.rank):
            levels[r].append(i)
        return levels

    def interval(self, a: int, b: int) -> list[int]:
        mask = (self.upsets[a] | (1 << a)) & (self.downsets[b] | (1 << b))
        return list(iter_bits(mask))

    def induced_covers(self, ids: Sequence[int]) -> list[tuple[int, ...]]:
        """Hasse diagram of the restricted order, by position in ``ids``."""
        pos = {x: k for k, x in enumerate(ids)}
        mask = 0
        for x in ids:
            mask |= 1 << x
        up_sets = [self.upsets[x] & mask for x in ids]
        ups = []
        for k in range(len(ids)):
            above = up_sets[k]
            covered = 0
            for y in iter_bits(above):
                covered |= up_sets[pos[y]]
            ups.append(tuple(sorted(pos[y] for y in iter_bits(above & ~covered))))
        return ups

    def induced(self, ids: Iterable[int], regrade: bool = False,
                ranks: Sequence[int] | None = None) -> "GradedPoset":
        """Induced subposet on ``ids`` (in the given order).

        Covers are recomputed from the restricted comparability. Ranks are
        inherited, replaced by ``ranks``, or with ``regrade`` set to the
        length of the longest chain below each element inside the subposet.
        """
        ids = list(ids)
        ups = self.induced_covers(ids)
        if regrade:
            order = sorted(range(len(ids)), key=lambda k: self.rank[ids[k]])
            height = [0] * len(ids)
            for k in order:
                for j in ups[k]:
                    height[j] = max(height[j], height[k] + 1)
            rank = tuple(height)
        elif ranks is not None:
            rank = tuple(ranks)
        else:
            rank = tuple(self.rank[x] for x in ids)
        labels = tuple(self.labels[x] for x in ids) if self.labels is not None else None
        return GradedPoset(rank, tuple(ups), labels)

    def is_bounded(self) -> bool:
        rv = self.rank_vector()
        return bool(rv) and rv[0] == 1 and rv[-1] == 1


def transitive_closure(P: GradedPoset) -> tuple[int, ...]:
    """Strict order as a tuple of up-set bitsets.

    >>> chain = GradedPoset.from_covers([0, 1, 2], [(0, 1), (1, 2)])
    >>> sum(bin(x).count("1") for x in transitive_closure(chain))
    3
    """
    return P.upsets


def chain(k: int) -> GradedPoset:
    """The chain with k elements."""
    return GradedPoset.from_covers(list(range(k)), [(i, i + 1) for i in range(k - 1)])


def antichain(k: int) -> GradedPoset:
    return GradedPoset.from_covers([0] * k, [])


def boolean_lattice(k: int) -> GradedPoset:
    """Subsets of a k-set; element ``mask`` is the subset with those bits."""
    size = 1 << k
    rank = [bin(x).count("1") for x in range(size)]
    covers = [(x, x | 1 << b) for x in range(size) for b in range(k) if not x >> b & 1]
    return GradedPoset.from_covers(rank, covers)


def direct_product(P: GradedPoset, Q: GradedPoset) -> GradedPoset:
    """Element (p, q) gets index p * |Q| + q."""
    mq = Q.m
    rank = [P.rank[p] + Q.rank[q] for p in range(P.m) for q in range(mq)]
    covers = []
    for p in range(P.m):
        for q in range(mq):
            x = p * mq + q
            covers.extend((x, p2 * mq + q) for p2 in P.up_covers[p])
            covers.extend((x, p * mq + q2) for q2 in Q.up_covers[q])
    return GradedPoset.from_covers(rank, covers)


def is_lattice(P: GradedPoset) -> bool:
    """Every pair has a join and a meet (bounded finite poset check)."""
    full = [P.upsets[i] | (1 << i) for i in range(P.m)]
    fulld = [P.downsets[i] | (1 << i) for i in range(P.m)]

    def has_least(mask, below):
        # some element of mask lies below all of mask
        for x in iter_bits(mask):
            if (below[x] & mask) == mask:
                return True
        return False

    for i in range(P.m):
        for j in range(i + 1, P.m):
            if not has_least(full[i] & full[j], full):
                return False
            if not has_least(fulld[i] & fulld[j], fulld):
                return False
    return True


# rank profiles

@dataclass(frozen=True)
class RankProfile:
    rank_vector: tuple[int, ...]
    gamma_vector: tuple[int, ...] | None
    symmetric: bool
    unimodal: bool
    gamma_nonnegative: bool


def is_symmetric(rv: Sequence[int]) -> bool:
    return tuple(rv) == tuple(reversed(rv))


def is_unimodal(rv: Sequence[int]) -> bool:
    k = 0
    while k + 1 < len(rv) and rv[k] <= rv[k + 1]:
        k += 1
    while k + 1 < len(rv) and rv[k] >= rv[k + 1]:
        k += 1
    return k + 1 >= len(rv)


def gamma_vector(rv: Sequence[int]) -> tuple[int, ...]:
    """Coefficients of sum_j g_j t^j (1+t)^(N-2j) equal to the rank polynomial.

    >>> gamma_vector((1, 3, 4, 3, 1))
    (1, -1, 0)
    >>> gamma_vector((1, 12, 12, 1))
    (1, 9)
    """
    rv = tuple(rv)
    if not is_symmetric(rv):
        raise ValueError(f"gamma vector needs a symmetric rank vector, got {rv}")
    N = len(rv) - 1
    if N < 0:
        return ()
    gamma = []
    for k in range(N // 2 + 1):
        acc = rv[k] - sum(g * comb(N - 2 * j, k - j) for j, g in enumerate(gamma))
        gamma.append(acc)
    if gamma_polynomial(gamma, N) != rv:
        raise ArithmeticError(f"gamma expansion does not reproduce {rv}")
    return tuple(gamma)


def gamma_polynomial(gamma: Sequence[int], N: int) -> tuple[int, ...]:
    coeffs = [0] * (N + 1)
    for j, g in enumerate(gamma):
        for i in range(N - 2 * j + 1):
            coeffs[j + i] += g * comb(N - 2 * j, i)
    return tuple(coeffs)


def rank_profile(P: GradedPoset | Sequence[int]) -> RankProfile:
    rv = P.rank_vector() if isinstance(P, GradedPoset) else tuple(P)
    sym = is_symmetric(rv)
    gamma = gamma_vector(rv) if sym else None
    return RankProfile(
        rank_vector=rv,
        gamma_vector=gamma,
        symmetric=sym,
        unimodal=is_unimodal(rv),
        gamma_nonnegative=gamma is not None and all(g >= 0 for g in gamma),
    )


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


# isomorphism

ISO_CAP = 64


def _invariants(P: GradedPoset) -> list[tuple[int, int, int]]:
    height = [0] * P.m
    for i in sorted(range(P.m), key=lambda i: P.rank[i]):
        for j in P.up_covers[i]:
            height[j] = max(height[j], height[i] + 1)
    return [(height[i], len(P.up_covers[i]), len(P.down_covers[i])) for i in range(P.m)]


def find_isomorphism(P: GradedPoset, Q: GradedPoset, cap: int = ISO_CAP) -> list[int] | None:
    """Return a map f with f[p] = q realizing P ~ Q, or None.

    Backtracking over the Hasse diagrams, candidates filtered by
    (height, up-degree, down-degree).
    """
    if max(P.m, Q.m) > cap:
        raise ValueError(f"isomorphism search capped at {cap} elements")
    if P.m != Q.m:
        return None
    pc, qc = P.covers(), Q.covers()
    if len(pc) != len(qc):
        return None
    ip, iq = _invariants(P), _invariants(Q)
    if Counter(ip) != Counter(iq):
        return None
    m = P.m
    if m == 0:
        return []
    qup = [set(u) for u in Q.up_covers]
    # order P's elements so each one after the first touches an earlier one
    order, seen = [], [False] * m
    for root in sorted(range(m), key=lambda i: (ip[i], i)):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in P.up_covers[x] + P.down_covers[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    by_inv: dict[tuple, list[int]] = {}
    for q in range(m):
        by_inv.setdefault(iq[q], []).append(q)
    f = [-1] * m
    used = [False] * m

    def consistent(p, q):
        for y in P.up_covers[p]:
            if f[y] >= 0 and f[y] not in qup[q]:
                return False
        for y in P.down_covers[p]:
            if f[y] >= 0 and q not in qup[f[y]]:
                return False
        return True

    def search(k):
        if k == m:
            return True
        p = order[k]
        for q in by_inv[ip[p]]:
            if not used[q] and consistent(p, q):
                f[p], used[q] = q, True
                if search(k + 1):
                    return True
                f[p], used[q] = -1, False
        return False

    return f if search(0) else None


def is_isomorphic(P: GradedPoset, Q: GradedPoset, cap: int = ISO_CAP) -> bool:
    return find_isomorphism(P, Q, cap) is not None


# decompositions

@dataclass(frozen=True)
class Part:
    """One block of a decomposition.

    ``kind`` is "boolean", "chain" or "untyped"; ``size`` is the Boolean
    rank or chain length. ``boolean_map[mask]`` is the element playing the
    subset ``mask`` when the part carries a Boolean certificate.
    """

    elements: tuple[int, ...]
    kind: str = "untyped"
    size: int | None = None
    span: tuple[int, int] | None = None
    tag: str | None = None
    structure: str | None = None
    boolean_map: tuple[int, ...] | None = None

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[Part, ...]

    def __len__(self):
        return len(self.parts)

    def census(self) -> dict[int, int]:
        return dict(sorted(Counter(len(p) for p in self.parts).items(), reverse=True))


def make_part(P: GradedPoset, elements: Iterable[int], kind: str = "untyped",
              size: int | None = None, **kw) -> Part:
    els = tuple(sorted(elements))
    ranks = [P.rank[x] for x in els]
    return Part(els, kind, size, (min(ranks), max(ranks)), **kw)


def sort_parts(P: GradedPoset, parts: Iterable[Part],
               key_of=None) -> tuple[Part, ...]:
    """Order by (min rank, smallest element key)."""
    key_of = key_of or (lambda x: x)
    return tuple(sorted(parts, key=lambda p: (min(P.rank[x] for x in p.elements),
                                              min(key_of(x) for x in p.elements))))


@dataclass
class VerificationReport:
    mode: str
    violations: list[tuple[int, str]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


MODES = ("plain", "symmetric", "boolean", "chain")


def check_partition(P: GradedPoset, D: Decomposition) -> None:
    seen = [False] * P.m
    for k, part in enumerate(D.parts):
        if not part.elements:
            raise ValueError(f"part {k} is empty")
        for x in part.elements:
            if not (0 <= x < P.m):
                raise ValueError(f"part {k} has unknown element {x}")
            if seen[x]:
                raise ValueError(f"element {x} lies in more than one part")
            seen[x] = True
    missing = [x for x in range(P.m) if not seen[x]]
    if missing:
        raise ValueError(f"elements not covered by any part: {missing[:10]}")


def _part_problem(P: GradedPoset, part: Part) -> str | None:
    els = part.elements
    members = set(els)
    if part.span is not None:
        ranks = [P.rank[x] for x in els]
        if tuple(part.span) != (min(ranks), max(ranks)):
            return f"declared span {part.span} differs from actual ({min(ranks)}, {max(ranks)})"
    for a, ups in enumerate(P.induced_covers(els)):
        for b in ups:
            if els[b] not in P.up_covers[els[a]]:
                return f"induced cover {els[a]} < {els[b]} is not a cover of the poset"
    # connectivity through covers
    seen = {els[0]}
    stack = [els[0]]
    while stack:
        x = stack.pop()
        for y in P.up_covers[x] + P.down_covers[x]:
            if y in members and y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(els):
        return "part is not connected by covers"
    return None


def _minimal_maximal(P: GradedPoset, els: Sequence[int]) -> tuple[list[int], list[int]]:
    mask = 0
    for x in els:
        mask |= 1 << x
    mins = [x for x in els if not P.downsets[x] & mask]
    maxs = [x for x in els if not P.upsets[x] & mask]
    return mins, maxs


def _boolean_problem(P: GradedPoset, part: Part) -> str | None:
    size = len(part.elements)
    k = size.bit_length() - 1
    if size != 1 << k:
        return f"part has {size} elements, not a power of two"
    if part.kind == "boolean" and part.size is not None and part.size != k:
        return f"declared Boolean rank {part.size} but part has 2^{k} elements"
    sub = P.induced(part.elements)
    if size <= ISO_CAP:
        if not is_isomorphic(sub, boolean_lattice(k)):
            return f"part is not isomorphic to the Boolean lattice of rank {k}"
        return None
    # too large for search: check the recorded isomorphism instead
    bmap = part.boolean_map
    if bmap is None or sorted(bmap) != sorted(part.elements):
        return "part exceeds the isomorphism cap and carries no valid Boolean certificate"
    B = boolean_lattice(k)
    for x, y in B.covers():
        if bmap[y] not in P.up_covers[bmap[x]]:
            return f"certificate maps Boolean cover {x} < {y} to a non-cover"
    if len(B.covers()) != len(sub.covers()):
        return "certificate does not account for every cover inside the part"
    return None


def _chain_problem(P: GradedPoset, part: Part) -> str | None:
    els = sorted(part.elements, key=lambda x: P.rank[x])
    for a, b in zip(els, els[1:]):
        if b not in P.up_covers[a]:
            return f"{a} -> {b} is not a cover, part is not a saturated chain"
    if part.kind == "chain" and part.size is not None and part.size != len(els):
        return f"declared chain length {part.size} but part has {len(els)} elements"
    return None


def verify_decomposition(P: GradedPoset, D: Decomposition, mode: str = "plain") -> VerificationReport:
    """Check every part; record the first violation of each part."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    check_partition(P, D)
    report = VerificationReport(mode)
    top = P.max_rank
    for k, part in enumerate(D.parts):
        problem = _part_problem(P, part)
        if problem is None and mode == "symmetric":
            mins, maxs = _minimal_maximal(P, part.elements)
            lo = sorted(P.rank[x] for x in mins)
            hi = sorted((top - P.rank[x] for x in maxs))
            if lo != hi:
                problem = (f"minimal ranks {lo} and maximal ranks "
                           f"{sorted(P.rank[x] for x in maxs)} do not pair to {top}")
        elif problem is None and mode == "boolean":
            problem = _boolean_problem(P, part)
        elif problem is None and mode == "chain":
            problem = _chain_problem(P, part)
        if problem is not None:
            report.violations.append((k, problem))
    return report


def gamma_from_boolean_parts(P: GradedPoset, D: Decomposition) -> tuple[int, ...]:
    """gamma_j = number of parts with 2^(N-2j) elements."""
    for mode in ("boolean", "symmetric"):
        rep = verify_decomposition(P, D, mode)
        if not rep.valid:
            raise ValueError(f"decomposition fails {mode} verification: {rep.violations[0]}")
    N = P.max_rank
    census = Counter(len(p) for p in D.parts)
    gamma = [census.pop(1 << (N - 2 * j), 0) for j in range(N // 2 + 1)]
    if census:
        raise ValueError(f"part sizes {sorted(census)} do not fit a symmetric Boolean census")
    return tuple(gamma)


# random test posets

def random_graded_poset(rng: random.Random, max_elements: int = 20,
                        max_rank: int = 5, density: float = 0.4) -> GradedPoset:
    """Layered random poset; every non-minimum-rank element has a lower cover
    and every non-top element an upper cover."""
    height = rng.randint(0, max_rank)
    m = rng.randint(height + 1, max(height + 1, max_elements))
    sizes = [1] * (height + 1)
    for _ in range(m - height - 1):
        sizes[rng.randrange(height + 1)] += 1
    levels, rank, nxt = [], [], 0
    for r, s in enumerate(sizes):
        levels.append(list(range(nxt, nxt + s)))
        rank.extend([r] * s)
        nxt += s
    covers = set()
    for r in range(height):
        lo, hi = levels[r], levels[r + 1]
        for x in lo:
            for y in hi:
                if rng.random() < density:
                    covers.add((x, y))
        for y in hi:
            if not any((x, y) in covers for x in lo):
                covers.add((rng.choice(lo), y))
        for x in lo:
            if not any((x, y) in covers for y in hi):
                covers.add((x, rng.choice(hi)))
    return GradedPoset.from_covers(rank, sorted(covers))
