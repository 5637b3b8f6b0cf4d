"""Decompositions of noncrossing partition lattices.

Elements are grouped into chunks R(i,s) by the image of the colored point
1^0. The chunks are regrouped into a symmetric decomposition, and every
part is turned into symmetric Boolean pieces by transporting decompositions
of smaller lattices through translations and cycle factorizations.

Boolean pieces are handled as ``cells`` tuples: ``cells[mask]`` is the
lattice index of the element playing the subset ``mask``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .catalog import nar0
from .colored_perm import (
    ColoredPermutation, ColoredPoint, Reflection, apply, compose, coxeter_element,
    inverse,
)
from .poset import (
    Decomposition, GradedPoset, Part, boolean_lattice, find_isomorphism, make_part,
    sort_parts, verify_decomposition,
)
from .reflection_order import NCLattice, factorize, standard_lattice

Cells = tuple[int, ...]


@dataclass(frozen=True)
class ChunkTag:
    kind: str               # "R", "D1", "D2", "D", "E1", "E2", "SU_R"
    i: int | None = None
    s: int | None = None

    def __str__(self):
        if self.kind == "R":
            return f"R({self.i},{self.s})"
        if self.kind in ("SU_R", "D") and self.i is not None:
            return f"{self.kind}({self.i})"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "ChunkTag":
        m = re.fullmatch(r"R\((\d+),(\d+)\)", text)
        if m:
            return cls("R", int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"(SU_R|D)\((\d+)\)", text)
        if m:
            return cls(m.group(1), int(m.group(2)))
        if text in ("D1", "D2", "D", "E1", "E2"):
            return cls(text)
        raise ValueError(f"unknown chunk tag {text!r}")


def _check_standard(L: NCLattice, want_d1: bool):
    p = L.params
    if want_d1 and p.d != 1:
        raise ValueError(f"expected a G(1,1,n) lattice, got {p}")
    if not want_d1 and p.d < 2:
        raise ValueError(f"expected a G(d,d,n) lattice with d >= 2, got {p}")
    if L.gamma != coxeter_element(p):
        raise ValueError("lattice is not built on the standard Coxeter element")


def chunk_of(u: ColoredPermutation) -> tuple[int, int]:
    """(i, s) with u(1^0) = i^s."""
    return tuple(apply(u, ColoredPoint(1, 0)))


def chunk_members(L: NCLattice) -> dict[tuple[int, int], list[int]]:
    groups: dict[tuple[int, int], list[int]] = {}
    for idx, u in enumerate(L.elements):
        groups.setdefault(chunk_of(u), []).append(idx)
    return groups


def expected_empty(d: int, n: int, i: int, s: int) -> bool:
    """Emptiness pattern of the chunks R(i,s) of NC(G(d,d,n))."""
    if i == 1:
        return 2 <= s < d
    if 2 <= i < n:
        return 1 <= s < d - 1
    return False


def expected_factor_types(d: int, n: int, i: int, s: int) -> list[tuple[int, int]] | None:
    """Irreducible factors (d', m) of the chunk R(i,s) seen as an interval,
    with trivial factors dropped. None when no prediction applies."""
    if n < 3:
        return None
    if (i, s) in ((1, 0), (2, 0)):
        raw = [(d, n - 1)]
    elif (i, s) in ((1, 1), (2, d - 1)):
        raw = [(1, n - 2)]
    elif i == n:
        raw = [(1, n - 1)]
    elif 3 <= i < n and s == 0:
        raw = [(d, n - i + 1), (1, i - 2)]
    elif 3 <= i < n and s == d - 1:
        raw = [(1, n - i), (d, i - 1)]
    else:
        return None
    return sorted(t for t in raw if not (t[0] == 1 and t[1] <= 1))


def _interval_ends(L: NCLattice, members: Sequence[int]) -> tuple[int, int] | None:
    """(min, max) if ``members`` is exactly an interval of L."""
    lo = min(members, key=lambda x: L.rank[x])
    hi = max(members, key=lambda x: L.rank[x])
    if sorted(L.interval(lo, hi)) != sorted(members):
        return None
    return lo, hi


def _structure(L: NCLattice, lo: int, hi: int, double: bool = False) -> str:
    w = compose(inverse(L.elements[lo]), L.elements[hi])
    names = [str(f.std).replace("G", "NC(G") + ")" for f in factorize(w)]
    if double:
        names.insert(0, "2")
    return " x ".join(names) if names else "point"


def _factor_types(L: NCLattice, lo: int, hi: int) -> list[tuple[int, int]]:
    w = compose(inverse(L.elements[lo]), L.elements[hi])
    return sorted((f.std.d, f.std.n) for f in factorize(w))


def chunk_decompose(L: NCLattice) -> Decomposition:
    """Parts R(i,s) of a G(d,d,n) lattice, checked against the emptiness
    pattern and annotated with their product structure."""
    _check_standard(L, want_d1=False)
    d, n = L.params.d, L.params.n
    groups = chunk_members(L)
    for i in range(1, n + 1):
        for s in range(d):
            if ((i, s) not in groups) != expected_empty(d, n, i, s):
                raise AssertionError(f"chunk R({i},{s}) breaks the emptiness pattern")
    P = L.poset
    parts = []
    for (i, s), members in groups.items():
        ends = _interval_ends(L, members)
        structure = _structure(L, *ends) if ends else None
        parts.append(make_part(P, members, tag=str(ChunkTag("R", i, s)), structure=structure))
    return Decomposition(sort_parts(P, parts))


def su_decompose(L: NCLattice) -> Decomposition:
    """Type A parts R_i by u(1) = i, with R_1 and R_2 merged."""
    _check_standard(L, want_d1=True)
    P = L.poset
    parts = []
    for blk in _su_blocks(L):
        parts.append(make_part(P, blk.members, tag=blk.tag, structure=blk.structure))
    return Decomposition(sort_parts(P, parts))


@dataclass
class _Block:
    """A part of a symmetric decomposition plus the recipe for its SBD.

    ``base`` is the interval (lo, hi); for doubled blocks ``partner`` maps a
    base element to its partner and ``base_is_lower`` says which copy sits
    below.
    """

    tag: str
    members: list[int]
    base: tuple[int, int] | None
    partner: ColoredPermutation | None = None
    base_is_lower: bool = True
    structure: str | None = None
    explicit: list[Cells] | None = None


def _su_blocks(L: NCLattice) -> list[_Block]:
    n = L.params.n
    groups: dict[int, list[int]] = {}
    for idx, u in enumerate(L.elements):
        groups.setdefault(u.perm[0] + 1, []).append(idx)
    if n == 1:
        return [_Block("SU_R(1)", groups[1], (0, 0), structure="point")]
    blocks = []
    g = Reflection(1, 2).element(L.params)
    r1 = groups[1]
    ends = _interval_ends(L, r1)
    if ends is None:
        raise AssertionError("R_1 is not an interval")
    blocks.append(_Block("SU_R(1)+SU_R(2)", r1 + groups[2], ends, partner=g,
                         structure=_structure(L, *ends, double=True)))
    for i in range(3, n + 1):
        ends = _interval_ends(L, groups[i])
        if ends is None:
            raise AssertionError(f"R_{i} is not an interval")
        blocks.append(_Block(f"SU_R({i})", groups[i], ends, structure=_structure(L, *ends)))
    return blocks


def _rearranged_blocks(L: NCLattice) -> list[_Block]:
    d, n = L.params.d, L.params.n
    groups = chunk_members(L)
    elem = L.elements
    if n == 2:
        # the four extremes form one square, the other atoms stay alone
        g0 = L.index(Reflection(1, 2, 0).element(L.params))
        g1 = L.index(Reflection(1, 2, d - 1).element(L.params))
        cells = (0, g0, g1, L.top)
        blocks = [_Block("R(1,0)+R(2,0)+D1", list(cells), None, explicit=[cells],
                         structure="2 x 2")]
        for s in range(1, d - 1):
            (x,) = groups[(2, s)]
            blocks.append(_Block(str(ChunkTag("R", 2, s)), [x], (x, x), structure="point"))
        return blocks

    def interval_block(tag, members):
        ends = _interval_ends(L, members)
        if ends is None:
            raise AssertionError(f"{tag} is not an interval")
        return _Block(tag, list(members), ends, structure=_structure(L, *ends))

    blocks = []
    r10 = groups[(1, 0)]
    ends = _interval_ends(L, r10)
    g12 = Reflection(1, 2, 0).element(L.params)
    blocks.append(_Block("R(1,0)+R(2,0)", r10 + groups[(2, 0)], ends, partner=g12,
                         structure=_structure(L, *ends, double=True)))
    for i in range(3, n):
        blocks.append(interval_block(str(ChunkTag("R", i, 0)), groups[(i, 0)]))
        blocks.append(interval_block(str(ChunkTag("R", i, d - 1)), groups[(i, d - 1)]))
    for s in range(d - 1):
        blocks.append(interval_block(str(ChunkTag("R", n, s)), groups[(n, s)]))

    f1 = Reflection(1, n, d - 2).element(L.params)
    f2 = Reflection(2, n, 0).element(L.params)
    r11, r2d = groups[(1, 1)], groups[(2, d - 1)]
    e1 = [L.index(compose(f1, elem[x])) for x in r11]
    e2 = [L.index(compose(f2, elem[x])) for x in r2d]
    ends1 = _interval_ends(L, r11)
    ends2 = _interval_ends(L, r2d)
    blocks.append(_Block("D1", r11 + e1, ends1, partner=f1, base_is_lower=False,
                         structure=_structure(L, *ends1, double=True)))
    blocks.append(_Block("D2", r2d + e2, ends2, partner=f2, base_is_lower=True,
                         structure=_structure(L, *ends2, double=True)))

    taken = set(e1) | set(e2)
    rest = [x for x in groups[(n, d - 1)] if x not in taken]
    y_shift = Reflection(1, n, d - 1).element(L.params)
    pieces: dict[int, list[int]] = {}
    for x in rest:
        y = compose(y_shift, elem[x])
        # y lies below ((2^0 ... n^0)); reading n as 1 makes y(n) the type A chunk index
        j, c = apply(y, ColoredPoint(n, 0))
        if c != 0 or not (3 <= j <= n - 1):
            raise AssertionError(f"unexpected D element {elem[x]}")
        pieces.setdefault(j, []).append(x)
    for i in sorted(pieces):
        blocks.append(interval_block(str(ChunkTag("D", i)), pieces[i]))
    return blocks


def rearranged_decompose(L: NCLattice) -> Decomposition:
    """Symmetric decomposition of a G(d,d,n) lattice built from the chunks,
    the doubled sets D1, D2 and the pieces of D."""
    _check_standard(L, want_d1=False)
    P = L.poset
    parts = [make_part(P, b.members, tag=b.tag, structure=b.structure)
             for b in _rearranged_blocks(L)]
    return Decomposition(sort_parts(P, parts))


def f_maps(L: NCLattice) -> tuple[dict[int, int], dict[int, int]]:
    """The index maps x -> ((1 n))^(d-2) x on R(1,1) and x -> ((2 n))^0 x on R(2,d-1)."""
    d, n = L.params.d, L.params.n
    groups = chunk_members(L)
    f1 = Reflection(1, n, d - 2).element(L.params)
    f2 = Reflection(2, n, 0).element(L.params)
    m1 = {x: L.index(compose(f1, L.elements[x])) for x in groups.get((1, 1), [])}
    m2 = {x: L.index(compose(f2, L.elements[x])) for x in groups.get((2, d - 1), [])}
    return m1, m2


class _SBDBuilder:
    """Memo of Boolean decompositions of standard lattices for one call."""

    def __init__(self):
        self._memo: dict[tuple[int, int], list[Cells]] = {}
        self._busy: set[tuple[int, int]] = set()

    def standard(self, d: int, n: int) -> list[Cells]:
        key = (d, n)
        if key in self._memo:
            return self._memo[key]
        if key in self._busy:
            raise RecursionError(f"recursion reached NC(G({d},{d},{n})) again")
        self._busy.add(key)
        L = standard_lattice(d, n)
        out = []
        for blk in self.blocks(L):
            out.extend(self.block_cells(L, blk))
        self._busy.discard(key)
        self._memo[key] = out
        return out

    @staticmethod
    def blocks(L: NCLattice) -> list[_Block]:
        return _su_blocks(L) if L.params.d == 1 else _rearranged_blocks(L)

    def block_cells(self, L: NCLattice, blk: _Block) -> list[Cells]:
        if blk.explicit is not None:
            return list(blk.explicit)
        base = self.interval(L, *blk.base)
        if blk.partner is None:
            return base
        return [self._double(L, cells, blk.partner, blk.base_is_lower) for cells in base]

    def interval(self, L: NCLattice, lo: int, hi: int) -> list[Cells]:
        x = L.elements[lo]
        w = compose(inverse(x), L.elements[hi])
        factors = factorize(w)
        params = L.params
        per_factor = []
        for f in factors:
            if f.std == params and lo == 0 and hi == L.top:
                raise RecursionError("interval is the whole lattice")
            sub = f.lattice
            embeds = [f.embedding(e) for e in sub.elements]
            per_factor.append((self.standard(f.std.d, f.std.n), embeds))
        n = params.n
        out = []
        for combo in itertools.product(*[pf[0] for pf in per_factor]):
            widths = [len(c).bit_length() - 1 for c in combo]
            cells = []
            for mask in range(1 << sum(widths)):
                perm, shifts = list(range(n)), [0] * n
                rest = mask
                for (cs, (_, embeds)), k in zip(zip(combo, per_factor), widths):
                    sub_mask = rest & ((1 << k) - 1)
                    rest >>= k
                    for a, t, s in embeds[cs[sub_mask]]:
                        perm[a], shifts[a] = t, s
                v = ColoredPermutation._make(params, tuple(perm), tuple(shifts))
                cells.append(L.index(compose(x, v)))
            out.append(tuple(cells))
        return out

    @staticmethod
    def _double(L: NCLattice, cells: Cells, g: ColoredPermutation, base_is_lower: bool) -> Cells:
        other = tuple(L.index(compose(g, L.elements[c])) for c in cells)
        lower, upper = (cells, other) if base_is_lower else (other, cells)
        for a, b in zip(lower, upper):
            if b not in L.up_covers[a]:
                raise AssertionError("paired elements are not related by a cover")
        return lower + upper


def _boolean_parts(L: NCLattice) -> list[Part]:
    P = L.poset
    builder = _SBDBuilder()
    parts = []
    for blk in builder.blocks(L):
        for cells in builder.block_cells(L, blk):
            k = len(cells).bit_length() - 1
            parts.append(make_part(P, cells, kind="boolean", size=k, tag=blk.tag,
                                   structure=blk.structure, boolean_map=tuple(cells)))
    return parts


def sbd(L: NCLattice) -> Decomposition:
    """Symmetric Boolean decomposition with a Boolean certificate per part."""
    _check_standard(L, want_d1=L.params.d == 1)
    return Decomposition(sort_parts(L.poset, _boolean_parts(L)))


def bracket_chains(k: int) -> list[list[int]]:
    """Symmetric chain decomposition of the subsets of a k-set by bracketing.

    Bit b is the b-th symbol, 0 for an opening bracket and 1 for a closing
    one. Chains start at the subsets whose word has no unmatched closing
    bracket and climb by closing the unmatched openings from left to right.

    >>> bracket_chains(2)
    [[0, 1, 3], [2]]
    """
    chains = []
    for mask in range(1 << k):
        unmatched = _unmatched_zeros(mask, k)
        if unmatched is None:
            continue
        chain = [mask]
        cur = mask
        for b in unmatched:
            cur |= 1 << b
            chain.append(cur)
        chains.append(chain)
    return chains


def _unmatched_zeros(mask: int, k: int) -> list[int] | None:
    """Positions of unmatched 0s, or None if some 1 is unmatched.

    Position 0 is the leftmost symbol.
    """
    stack = []
    for b in range(k):
        if mask >> b & 1:
            if not stack:
                return None
            stack.pop()
        else:
            stack.append(b)
    return stack


def scd_from_sbd(P: GradedPoset, D: Decomposition) -> Decomposition:
    """Refine each Boolean part into bracketing chains."""
    for mode in ("boolean", "symmetric"):
        rep = verify_decomposition(P, D, mode)
        if not rep.valid:
            raise ValueError(f"decomposition fails {mode} verification: {rep.violations[0]}")
    parts = []
    for part in D.parts:
        bmap = part.boolean_map
        k = len(part.elements).bit_length() - 1
        if bmap is None:
            # no recorded map: search for one (small parts only)
            f = find_isomorphism(boolean_lattice(k), P.induced(part.elements))
            bmap = tuple(part.elements[f[mask]] for mask in range(1 << k))
        for ch in bracket_chains(k):
            els = [bmap[mask] for mask in ch]
            parts.append(make_part(P, els, kind="chain", size=len(els), tag=part.tag))
    return Decomposition(sort_parts(P, parts))


# rank numbers

@lru_cache(maxsize=None)
def rank_recursion(d: int, n: int) -> tuple[int, ...]:
    """Rank vector of NC(G(d,d,n)) summed chunk by chunk."""
    if d < 2 or n < 2:
        raise ValueError(f"rank_recursion needs d, n >= 2, got d={d}, n={n}")
    if n == 2:
        return (1, d, 1)

    def r(m, k):
        vec = rank_recursion(d, m)
        return vec[k] if 0 <= k < len(vec) else 0

    out = []
    for k in range(n + 1):
        total = r(n - 1, k) + r(n - 1, k - 1)
        for i in range(3, n):
            total += 2 * sum(r(n - i + 1, j) * nar0(i - 2, k - 1 - j) for j in range(k))
        total += d * nar0(n - 1, k - 1)
        total += nar0(n - 2, k - 2) + nar0(n - 2, k - 1)
        out.append(total)
    edge = (n - 1) * (n + d - 2)
    if out[0] != 1 or out[n] != 1 or out[1] != edge or out[n - 1] != edge:
        raise ArithmeticError(f"boundary values fail for d={d}, n={n}: {out}")
    return tuple(out)


def rank_recursion_printed(d: int, n: int, k: int) -> Fraction:
    """The displayed closed form, evaluated literally.

    Known to disagree with direct counts (it gives 22 instead of 24 at
    d=2, n=4, k=2); kept only for comparison.
    """
    if not (2 <= k <= n - 2):
        raise ValueError(f"closed form covers 2 <= k <= n-2, got k={k}, n={n}")
    r = lambda m, j: rank_recursion(d, m)[j] if 0 <= j <= m else 0
    total = Fraction(r(n - 1, k) + r(n - 1, k - 1))
    for i in range(1, n - 2):
        for j in range(k):
            total += Fraction(r(n - i - 1, j), i) * comb(i, k - j) * comb(i, k - j - 1)
    total += comb(n - 2, k - 1) * (Fraction(d, k) * comb(n - 1, k - 1)
                                   + Fraction(comb(n - 2, k - 2) + comb(n - 2, k), n - 2))
    return total
