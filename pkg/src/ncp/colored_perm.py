"""Colored permutations realizing G(d,d,n).

An element sends the colored point k^s to target(k)^(s + shift(k) mod d).
Roots of unity are never materialized: zeta^s is just the residue s.
With d = 1 every shift is zero and the group is the symmetric group S_n.

Products follow function composition, ``u * v`` applies ``v`` first.

>>> g = coxeter_element(GroupParams(5, 3))
>>> g.targets, g.shifts
((2, 1, 3), (0, 1, 4))
>>> format_element(g)
'[1^0 2^0]_1 [3^0]_4'
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence


@dataclass(frozen=True, order=True)
class GroupParams:
    d: int
    n: int

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise ValueError(f"need d >= 1 and n >= 1, got d={self.d}, n={self.n}")
        if self.d >= 2 and self.n < 2:
            raise ValueError(f"G(d,d,n) with d >= 2 needs n >= 2, got n={self.n}")

    @property
    def family(self) -> str:
        return "g11n" if self.d == 1 else "gddn"

    def __str__(self):
        return f"G({self.d},{self.d},{self.n})"


class ColoredPoint(NamedTuple):
    index: int  # 1-based
    color: int


class CycleKind(Enum):
    SIMULTANEOUS = "simultaneous"
    BALANCED = "balanced"


@dataclass(frozen=True)
class GenCycle:
    """A generalized cycle k1^t1 -> k2^t2 -> ... -> kr^tr -> k1^(t1 + winding).

    ``winding == 0`` is a simultaneous cycle ((...)), otherwise a balanced
    cycle [...]_winding.
    """

    points: tuple[ColoredPoint, ...]
    winding: int = 0

    @property
    def kind(self) -> CycleKind:
        return CycleKind.BALANCED if self.winding else CycleKind.SIMULTANEOUS

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p.index for p in self.points)

    def __len__(self):
        return len(self.points)

    def __str__(self):
        body = " ".join(f"{p.index}^{p.color}" for p in self.points)
        if self.winding:
            return f"[{body}]_{self.winding}"
        return f"(({body}))"


@dataclass(frozen=True)
class Reflection:
    """The reflection ((a b))^s: a^t -> b^(t+s) and b^t -> a^(t-s)."""

    a: int
    b: int
    s: int = 0

    def element(self, params: GroupParams) -> "ColoredPermutation":
        n, d = params.n, params.d
        if not (1 <= self.a < self.b <= n) or not (0 <= self.s < d):
            raise ValueError(f"invalid reflection {self} for {params}")
        perm = list(range(n))
        shifts = [0] * n
        a, b = self.a - 1, self.b - 1
        perm[a], perm[b] = b, a
        shifts[a] = self.s
        shifts[b] = (-self.s) % d
        return ColoredPermutation._make(params, tuple(perm), tuple(shifts))

    def __str__(self):
        return f"(({self.a} {self.b}))^{self.s}"


class ColoredPermutation:
    """An element of G(d,d,n).

    ``perm`` holds 0-based targets, ``shifts`` the color shift of each point.
    The public ``targets`` and ``encoding`` use 1-based indices.
    """

    __slots__ = ("params", "perm", "shifts", "_hash")

    def __init__(self, params: GroupParams, targets: Sequence[int], shifts: Sequence[int]):
        n, d = params.n, params.d
        if len(targets) != n or len(shifts) != n:
            raise ValueError(f"expected {n} targets and shifts")
        perm = tuple(int(t) - 1 for t in targets)
        if sorted(perm) != list(range(n)):
            raise ValueError(f"targets {tuple(targets)} are not a permutation of 1..{n}")
        sh = tuple(int(s) % d for s in shifts)
        if sum(sh) % d:
            raise ValueError(f"color shifts {tuple(shifts)} do not sum to 0 mod {d}")
        self._init(params, perm, sh)

    def _init(self, params, perm, shifts):
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "_hash", hash((perm, shifts)))

    @classmethod
    def _make(cls, params, perm, shifts) -> "ColoredPermutation":
        # trusted constructor, no validation
        obj = cls.__new__(cls)
        obj._init(params, perm, shifts)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ColoredPermutation is immutable")

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(t + 1 for t in self.perm)

    @property
    def key(self) -> tuple:
        return (self.perm, self.shifts)

    @property
    def encoding(self) -> tuple[int, ...]:
        """Flat (target(1), shift(1), ..., target(n), shift(n))."""
        out = []
        for t, s in zip(self.perm, self.shifts):
            out.extend((t + 1, s))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, ColoredPermutation):
            return NotImplemented
        return (self.params == other.params and self.perm == other.perm
                and self.shifts == other.shifts)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.encoding < other.encoding

    def __mul__(self, other):
        return compose(self, other)

    def __invert__(self):
        return inverse(self)

    def __call__(self, p):
        return apply(self, p)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and not any(self.shifts)

    def __repr__(self):
        return f"ColoredPermutation({self.params.d}, {self.params.n}, {format_element(self)!r})"

    def __str__(self):
        return format_element(self)


def identity(params: GroupParams) -> ColoredPermutation:
    n = params.n
    return ColoredPermutation._make(params, tuple(range(n)), (0,) * n)


def compose(u: ColoredPermutation, v: ColoredPermutation) -> ColoredPermutation:
    """Return u o v, which applies v first."""
    if u.params != v.params:
        raise ValueError(f"parameter mismatch: {u.params} vs {v.params}")
    d = u.params.d
    up, us = u.perm, u.shifts
    perm = tuple(up[t] for t in v.perm)
    shifts = tuple((s + us[t]) % d for t, s in zip(v.perm, v.shifts))
    return ColoredPermutation._make(u.params, perm, shifts)


def inverse(u: ColoredPermutation) -> ColoredPermutation:
    n, d = u.params.n, u.params.d
    perm = [0] * n
    shifts = [0] * n
    for k, (t, s) in enumerate(zip(u.perm, u.shifts)):
        perm[t] = k
        shifts[t] = (-s) % d
    return ColoredPermutation._make(u.params, tuple(perm), tuple(shifts))


def apply(u: ColoredPermutation, p: ColoredPoint | tuple[int, int]) -> ColoredPoint:
    k, c = p
    n, d = u.params.n, u.params.d
    if not (1 <= k <= n) or not (0 <= c < d):
        raise ValueError(f"point {k}^{c} out of range for {u.params}")
    return ColoredPoint(u.perm[k - 1] + 1, (c + u.shifts[k - 1]) % d)


def reflections(params: GroupParams) -> list[Reflection]:
    n, d = params.n, params.d
    return [Reflection(a, b, s)
            for a in range(1, n + 1) for b in range(a + 1, n + 1) for s in range(d)]


def cycle_decomposition(u: ColoredPermutation) -> list[GenCycle]:
    """Cycles of u ordered by smallest index, each starting at color 0."""
    n, d = u.params.n, u.params.d
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        points = []
        k, c = start, 0
        while not seen[k]:
            seen[k] = True
            points.append(ColoredPoint(k + 1, c))
            c = (c + u.shifts[k]) % d
            k = u.perm[k]
        cycles.append(GenCycle(tuple(points), c))
    return cycles


def from_cycles(params: GroupParams, cycles: Iterable[GenCycle]) -> ColoredPermutation:
    n, d = params.n, params.d
    perm = list(range(n))
    shifts = [0] * n
    used = set()
    total = 0
    for cyc in cycles:
        pts = cyc.points
        if not pts:
            raise ValueError("empty cycle")
        for p in pts:
            if not (1 <= p.index <= n):
                raise ValueError(f"index {p.index} out of range for {params}")
            if p.index in used:
                raise ValueError(f"index {p.index} appears in two cycles")
            used.add(p.index)
        r = len(pts)
        for j in range(r):
            k = pts[j].index - 1
            if j + 1 < r:
                nxt = pts[j + 1]
                shift = nxt.color - pts[j].color
            else:
                nxt = pts[0]
                shift = pts[0].color + cyc.winding - pts[j].color
            perm[k] = nxt.index - 1
            shifts[k] = shift % d
        total += cyc.winding
    if total % d:
        raise ValueError(f"windings sum to {total % d} mod {d}; element lies outside G(d,d,n)")
    return ColoredPermutation._make(params, tuple(perm), tuple(shifts))


def fix_dim(u: ColoredPermutation) -> int:
    """Dimension of the fixed space: cycles whose color sum vanishes mod d."""
    n, d = u.params.n, u.params.d
    perm, shifts = u.perm, u.shifts
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        k, c = start, 0
        while not seen[k]:
            seen[k] = True
            c += shifts[k]
            k = perm[k]
        if c % d == 0:
            count += 1
    return count


def order(u: ColoredPermutation) -> int:
    e = identity(u.params)
    x, k = u, 1
    while x != e:
        x = compose(x, u)
        k += 1
    return k


def coxeter_element(params: GroupParams) -> ColoredPermutation:
    """The long cycle for d = 1, otherwise [1^0 ... (n-1)^0]_1 [n^0]_(d-1)."""
    n, d = params.n, params.d
    if d == 1:
        return ColoredPermutation._make(params, tuple((k + 1) % n for k in range(n)), (0,) * n)
    long = GenCycle(tuple(ColoredPoint(k, 0) for k in range(1, n)), 1)
    last = GenCycle((ColoredPoint(n, 0),), d - 1)
    return from_cycles(params, [long, last])


def random_element(params: GroupParams, rng: random.Random) -> ColoredPermutation:
    n, d = params.n, params.d
    perm = list(range(n))
    rng.shuffle(perm)
    shifts = [rng.randrange(d) for _ in range(n)]
    shifts[-1] = (-sum(shifts[:-1])) % d
    return ColoredPermutation._make(params, tuple(perm), tuple(shifts))


def format_element(u: ColoredPermutation) -> str:
    return " ".join(str(c) for c in cycle_decomposition(u))


_CYCLE = re.compile(r"\(\(([^()\[\]]*)\)\)|\[([^()\[\]]*)\]_(-?\d+)")
_POINT = re.compile(r"^(\d+)\^(\d+)$")


def parse_cycles(text: str) -> list[GenCycle]:
    cycles = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _CYCLE.match(text, pos)
        if m is None:
            raise ValueError(f"cannot parse cycle notation at offset {pos}: {text[pos:pos + 20]!r}")
        body = m.group(1) if m.group(1) is not None else m.group(2)
        points = []
        for tok in body.split():
            pm = _POINT.match(tok)
            if pm is None:
                raise ValueError(f"bad point {tok!r}")
            points.append(ColoredPoint(int(pm.group(1)), int(pm.group(2))))
        if not points:
            raise ValueError("empty cycle")
        winding = int(m.group(3)) if m.group(3) is not None else 0
        if m.group(3) is not None and winding == 0:
            raise ValueError("balanced cycle needs a nonzero subscript")
        cycles.append(GenCycle(tuple(points), winding))
        pos = m.end()
    if not cycles:
        raise ValueError("empty element notation")
    return cycles


def parse_element(text: str, params: GroupParams) -> ColoredPermutation:
    cycles = parse_cycles(text)
    d = params.d
    norm = []
    for c in cycles:
        if any(not (0 <= p.color < d) for p in c.points):
            raise ValueError(f"color out of range in {c}")
        if c.winding and not (1 <= c.winding < d):
            raise ValueError(f"winding out of range in {c}")
        norm.append(c)
    return from_cycles(params, norm)
