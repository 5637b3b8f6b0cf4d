"""Width, k-families and Sperner-type properties of graded posets.

Width comes from a maximum matching in the comparability split graph
(Dilworth via Koenig). Normalized matching is decided one rank pair at a
time with an integer max-flow.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .poset import GradedPoset, is_symmetric, is_unimodal, iter_bits

INF = float("inf")


class HopcroftKarp:
    """Maximum matching in a bipartite graph given as left -> right lists."""

    def __init__(self, n_left: int, n_right: int, adj: Sequence[Sequence[int]]):
        self.n_left = n_left
        self.n_right = n_right
        self.adj = adj
        self.match_left = [-1] * n_left
        self.match_right = [-1] * n_right
        self.size = self._run()

    def _bfs(self, dist):
        q = deque()
        found = False
        for u in range(self.n_left):
            if self.match_left[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = -1
        while q:
            u = q.popleft()
            for v in self.adj[u]:
                w = self.match_right[v]
                if w < 0:
                    found = True
                elif dist[w] < 0:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def _dfs(self, u, dist, it):
        # iterative augmenting path search along the BFS layers
        stack = [u]
        path = []
        while stack:
            x = stack[-1]
            advanced = False
            while it[x] < len(self.adj[x]):
                v = self.adj[x][it[x]]
                it[x] += 1
                w = self.match_right[v]
                if w < 0:
                    path.append((x, v))
                    for a, b in path:
                        self.match_left[a] = b
                        self.match_right[b] = a
                    return True
                if dist[w] == dist[x] + 1:
                    path.append((x, v))
                    stack.append(w)
                    advanced = True
                    break
            if not advanced:
                dist[x] = -1
                stack.pop()
                if path:
                    path.pop()
        return False

    def _run(self) -> int:
        dist = [-1] * self.n_left
        size = 0
        while self._bfs(dist):
            it = [0] * self.n_left
            for u in range(self.n_left):
                if self.match_left[u] < 0 and self._dfs(u, dist, it):
                    size += 1
        return size


def _comparability_matching(P: GradedPoset) -> HopcroftKarp:
    adj = [list(iter_bits(P.upsets[i])) for i in range(P.m)]
    return HopcroftKarp(P.m, P.m, adj)


def width(P: GradedPoset) -> int:
    """Size of a largest antichain."""
    return P.m - _comparability_matching(P).size


def min_chain_cover(P: GradedPoset) -> list[list[int]]:
    """A minimum partition into chains, read off the matching."""
    hk = _comparability_matching(P)
    chains = []
    for start in range(P.m):
        if hk.match_right[start] >= 0:
            continue
        ch = [start]
        while hk.match_left[ch[-1]] >= 0:
            ch.append(hk.match_left[ch[-1]])
        chains.append(ch)
    return chains


def max_antichain(P: GradedPoset) -> list[int]:
    """A maximum antichain via Koenig's vertex cover construction."""
    hk = _comparability_matching(P)
    # alternating reachability from unmatched left vertices
    seen_left = [False] * P.m
    seen_right = [False] * P.m
    q = deque(u for u in range(P.m) if hk.match_left[u] < 0)
    for u in q:
        seen_left[u] = True
    while q:
        u = q.popleft()
        for v in hk.adj[u]:
            if not seen_right[v]:
                seen_right[v] = True
                w = hk.match_right[v]
                if w >= 0 and not seen_left[w]:
                    seen_left[w] = True
                    q.append(w)
    # cover = unreached left + reached right; antichain = elements in neither side of it
    return [x for x in range(P.m) if seen_left[x] and not seen_right[x]]


def shade(P: GradedPoset, L: Iterable[int]) -> set[int]:
    L = list(L)
    if not L:
        return set()
    ranks = {P.rank[x] for x in L}
    if len(ranks) > 1:
        raise ValueError(f"shade needs elements of one rank, got ranks {sorted(ranks)}")
    return {y for x in L for y in P.up_covers[x]}


def truncate(P: GradedPoset, tie: str = "smallest") -> tuple[GradedPoset, list[int]]:
    """Remove one largest rank; return the induced poset and the kept ids.

    ``tie`` picks the smallest or largest rank index among the largest ranks.
    Ranks above the removed one move down by one.
    """
    if P.m == 0:
        raise ValueError("cannot truncate an empty poset")
    rv = P.rank_vector()
    big = max(rv)
    candidates = [k for k, r in enumerate(rv) if r == big]
    if tie == "smallest":
        gone = candidates[0]
    elif tie == "largest":
        gone = candidates[-1]
    else:
        raise ValueError(f"tie must be 'smallest' or 'largest', got {tie!r}")
    keep = [x for x in range(P.m) if P.rank[x] != gone]
    ranks = [P.rank[x] - (P.rank[x] > gone) for x in keep]
    return P.induced(keep, ranks=ranks), keep


def sum_largest_ranks(P: GradedPoset, k: int) -> int:
    return sum(sorted(P.rank_vector(), reverse=True)[:k])


def is_sperner(P: GradedPoset) -> bool:
    if P.m == 0:
        return True
    return width(P) == max(P.rank_vector())


@dataclass
class Truncation:
    removed_ranks: int
    max_rank_size: int
    width: int
    sperner: bool


@dataclass
class SpernerReport:
    width: int
    truncations: list[Truncation] = field(default_factory=list)
    k_family_sizes: list[int] | None = None

    @property
    def strongly_sperner(self) -> bool:
        return all(t.sperner for t in self.truncations)

    def __bool__(self):
        return self.strongly_sperner


def is_strongly_sperner(P: GradedPoset, tie: str = "smallest") -> SpernerReport:
    """Strong Sperner via repeated removal of a largest rank.

    k_family_sizes[k-1] is the size of a maximum k-family, which the
    removal argument gives as sum of the k largest ranks whenever every
    stage is Sperner.

    Every stage being Sperner is necessary but not sufficient on arbitrary
    graded posets: tests/data/rank_removal_counterexample.json passes every
    stage yet has a 2-family of 13 > 7 + 5. Use
    is_strongly_sperner_bruteforce for an exact answer on small posets.
    """
    report = SpernerReport(width(P))
    Q, removed = P, 0
    while Q.m:
        w = width(Q) if removed else report.width
        biggest = max(Q.rank_vector())
        report.truncations.append(Truncation(removed, biggest, w, w == biggest))
        Q, _ = truncate(Q, tie)
        removed += 1
    if report.strongly_sperner:
        rv = sorted(P.rank_vector(), reverse=True)
        report.k_family_sizes = [sum(rv[:k]) for k in range(1, len(rv) + 1)]
    return report


BRUTE_CAP = 20


def max_k_family_bruteforce(P: GradedPoset, k: int) -> int:
    """Largest subset without a chain of k+1 elements, by exhaustive search."""
    if P.m > BRUTE_CAP:
        raise ValueError(f"brute force is capped at {BRUTE_CAP} elements, poset has {P.m}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    order = sorted(range(P.m), key=lambda x: (P.rank[x], x))
    if k == 0 or P.m == 0:
        return 0
    if P.max_rank - P.min_rank + 1 <= k:
        return P.m
    down = P.downsets
    # greedy chain partition for the upper bound: a k-family meets a chain
    # in at most k elements
    chain_id = [-1] * P.m
    chains = 0
    for x in order:
        if chain_id[x] >= 0:
            continue
        cur = x
        while True:
            chain_id[cur] = chains
            nxt = [y for y in P.up_covers[cur] if chain_id[y] < 0]
            if not nxt:
                break
            cur = nxt[0]
        chains += 1
    # remaining capacity per chain for the elements from position i on
    suffix_counts = [[0] * chains for _ in range(P.m + 1)]
    for i in range(P.m - 1, -1, -1):
        row = list(suffix_counts[i + 1])
        row[chain_id[order[i]]] += 1
        suffix_counts[i] = row

    best = sum_largest_ranks(P, k)  # any k ranks form a k-family
    height = [0] * P.m
    used_per_chain = [0] * chains

    def bound(i, size):
        extra = 0
        for c in range(chains):
            extra += min(suffix_counts[i][c], max(0, k - used_per_chain[c]))
        return size + extra

    def search(i, chosen, size):
        nonlocal best
        if size > best:
            best = size
        if i == P.m or bound(i, size) <= best:
            return
        x = order[i]
        h = 0
        below = down[x] & chosen
        for y in iter_bits(below):
            if height[y] > h:
                h = height[y]
        if h < k:
            height[x] = h + 1
            used_per_chain[chain_id[x]] += 1
            search(i + 1, chosen | (1 << x), size + 1)
            used_per_chain[chain_id[x]] -= 1
            height[x] = 0
        search(i + 1, chosen, size)

    search(0, 0, 0)
    return best


def is_k_sperner_bruteforce(P: GradedPoset, k: int) -> bool:
    return max_k_family_bruteforce(P, k) == sum_largest_ranks(P, k)


def is_strongly_sperner_bruteforce(P: GradedPoset) -> bool:
    return all(is_k_sperner_bruteforce(P, k) for k in range(1, len(P.rank_vector()) + 1))


class Dinic:
    """Integer max-flow by blocking flows on level graphs."""

    def __init__(self, n: int):
        self.n = n
        self.head = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[float] = []

    def add_edge(self, u: int, v: int, c) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _levels(self, s, t):
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in self.head[u]:
                if self.cap[e] > 0 and level[self.to[e]] < 0:
                    level[self.to[e]] = level[u] + 1
                    q.append(self.to[e])
        return level if level[t] >= 0 else None

    def _push(self, u, t, f, level, it):
        if u == t:
            return f
        while it[u] < len(self.head[u]):
            e = self.head[u][it[u]]
            v = self.to[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                got = self._push(v, t, min(f, self.cap[e]), level, it)
                if got > 0:
                    self.cap[e] -= got
                    self.cap[e ^ 1] += got
                    return got
            it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            it = [0] * self.n
            while True:
                f = self._push(s, t, INF, level, it)
                if f <= 0:
                    break
                flow += f


@dataclass
class NormalizedMatchingResult:
    holds: bool
    failing_pair: tuple[int, int] | None = None

    def __bool__(self):
        return self.holds


def _pair_flow_ok(P: GradedPoset, lower: Sequence[int], upper: Sequence[int]) -> bool:
    ri, rj = len(lower), len(upper)
    pos_u = {x: 1 + k for k, x in enumerate(lower)}
    pos_v = {y: 1 + ri + k for k, y in enumerate(upper)}
    sink = 1 + ri + rj
    net = Dinic(sink + 1)
    for x in lower:
        net.add_edge(0, pos_u[x], rj)
        for y in P.up_covers[x]:
            net.add_edge(pos_u[x], pos_v[y], INF)
    for y in upper:
        net.add_edge(pos_v[y], sink, ri)
    return net.max_flow(0, sink) == ri * rj


def normalized_matching(P: GradedPoset) -> NormalizedMatchingResult:
    """|shade(L)| * r_i >= |L| * r_(i+1) for every L inside every rank i."""
    levels = P.rank_levels()
    for i in range(len(levels) - 1):
        if not levels[i] or not levels[i + 1]:
            return NormalizedMatchingResult(False, (i, i + 1))
        if not _pair_flow_ok(P, levels[i], levels[i + 1]):
            return NormalizedMatchingResult(False, (i, i + 1))
    return NormalizedMatchingResult(True)


EXHAUSTIVE_CAP = 12


def normalized_matching_exhaustive(P: GradedPoset) -> NormalizedMatchingResult:
    """The same test by enumerating every subset of every rank."""
    levels = P.rank_levels()
    if any(len(lv) > EXHAUSTIVE_CAP for lv in levels):
        raise ValueError(f"exhaustive check needs ranks of at most {EXHAUSTIVE_CAP} elements")
    for i in range(len(levels) - 1):
        ri, rj = len(levels[i]), len(levels[i + 1])
        for size in range(1, ri + 1):
            for L in combinations(levels[i], size):
                if len(shade(P, L)) * ri < size * rj:
                    return NormalizedMatchingResult(False, (i, i + 1))
    return NormalizedMatchingResult(True)


def griggs_scd_exists(P: GradedPoset) -> bool:
    """Rank-symmetric, rank-unimodal and normalized matching together."""
    rv = P.rank_vector()
    return is_symmetric(rv) and is_unimodal(rv) and bool(normalized_matching(P))
