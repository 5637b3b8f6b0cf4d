"""Degrees, Coxeter numbers, Catalan and Narayana numbers."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import comb

FAMILIES = ("g11n", "gddn")


@dataclass(frozen=True)
class GroupInvariants:
    family: str
    d: int
    n: int
    degrees: tuple[int, ...]
    h: int
    catalan: int


def degrees(family: str, d: int, n: int) -> tuple[int, ...]:
    if family == "g11n":
        if d != 1 or n < 1:
            raise ValueError(f"g11n needs d = 1 and n >= 1, got d={d}, n={n}")
        return tuple(range(2, n + 1))
    if family == "gddn":
        if d < 2 or n < 2:
            raise ValueError(f"gddn needs d >= 2 and n >= 2, got d={d}, n={n}")
        return tuple(sorted([k * d for k in range(1, n)] + [n]))
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def catalog(family: str, d: int, n: int) -> GroupInvariants:
    """
    >>> catalog("gddn", 5, 3)
    GroupInvariants(family='gddn', d=5, n=3, degrees=(3, 5, 10), h=10, catalan=26)
    >>> catalog("g11n", 1, 4).catalan
    14
    """
    degs = degrees(family, d, n)
    h = degs[-1] if degs else 1
    cat = Fraction(1)
    for di in degs:
        cat *= Fraction(di + h, di)
    if cat.denominator != 1:
        raise ArithmeticError(f"non-integral Catalan number {cat} for {family}({d},{n})")
    return GroupInvariants(family, d, n, degs, h, int(cat))


def narayana(n: int, k: int) -> int:
    """Nar(n,k) = C(n,k) C(n,k-1) / n.

    >>> narayana(4, 2)
    6
    >>> sum(narayana(4, k) for k in range(1, 5))
    14
    """
    if not (1 <= k <= n):
        raise ValueError(f"narayana needs 1 <= k <= n, got n={n}, k={k}")
    return comb(n, k) * comb(n, k - 1) // n


def nar0(n: int, k: int) -> int:
    # rank sizes of NC(G(1,1,n)) indexed from rank 0, zero outside the range
    if n == 0:
        return 1 if k == 0 else 0
    if not (0 <= k < n):
        return 0
    return narayana(n, k + 1)


def reference_table() -> dict[str, dict]:
    """Rank and gamma vectors for the exceptional groups, keyed by name."""
    text = resources.files("ncp.data").joinpath("exceptional_table.json").read_text()
    return json.loads(text)["groups"]
