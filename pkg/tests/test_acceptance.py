"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ncp.catalog import catalog, narayana  # noqa: E402
from ncp.colored_perm import (  # noqa: E402
    ColoredPoint, GenCycle, GroupParams, Reflection, fix_dim, from_cycles, parse_element,
)
from ncp.decompose import (  # noqa: E402
    chunk_members, expected_empty, rank_recursion, rank_recursion_printed,
    rearranged_decompose, sbd, scd_from_sbd,
)
from ncp.io import import_poset, verify_reference_table  # noqa: E402
from ncp.poset import (  # noqa: E402
    gamma_from_boolean_parts, is_isomorphic, random_graded_poset, rank_profile,
    verify_decomposition,
)
from ncp.reflection_order import (  # noqa: E402
    _ORACLES, build_nc_lattice, coatoms, leq_T, reflection_length, standard_lattice,
)
from ncp.sperner import (  # noqa: E402
    griggs_scd_exists, is_k_sperner_bruteforce, is_sperner, is_strongly_sperner,
    max_k_family_bruteforce, normalized_matching, normalized_matching_exhaustive,
    sum_largest_ranks, truncate, width,
)
from helpers import GRID  # noqa: E402

DATA = Path(__file__).parent / "data"
FIXTURES = ["poset12", "poset25", "sperner_only", "two_sperner_only", "g23_synthetic"]


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    print(line, flush=True)
    return ok


def run_1():
    _ORACLES.clear()
    slowest, bad = 0.0, []
    start = time.perf_counter()
    for d, n in GRID:
        t0 = time.perf_counter()
        L = build_nc_lattice(GroupParams(d, n))
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if len(L) != catalog("gddn", d, n).catalan or dt >= 5:
            bad.append((d, n, len(L), round(dt, 2)))
    total = time.perf_counter() - start
    g553 = len(standard_lattice(5, 3)) == 26
    ok = not bad and g553 and total < 60
    return report(1, ok, f"{len(GRID)} lattices match Cat_W, G(5,5,3) has 26, slowest build "
                         f"{slowest:.2f}s, grid {total:.2f}s" + (f", bad {bad}" if bad else ""))


def run_2():
    bad = []
    for n in range(1, 9):
        L = build_nc_lattice(GroupParams(1, n))
        want = tuple(narayana(n, k) for k in range(1, n + 1))
        if len(L) != catalog("g11n", 1, n).catalan or L.rank_vector() != want:
            bad.append(n)
    return report(2, not bad, "type A n<=8: Catalan sizes and Narayana rank vectors"
                              + (f", bad n={bad}" if bad else ""))


def run_3():
    bad = []
    for d, n in GRID:
        rv = standard_lattice(d, n).rank_vector()
        edge = (n - 1) * (n + d - 2)
        if not (rv[0] == rv[n] == 1 and rv[1] == rv[n - 1] == edge):
            bad.append((d, n))
    return report(3, not bad, "r_0 = r_n = 1 and r_1 = r_(n-1) = (n-1)(n+d-2) on the grid")


def run_4():
    bad = [(d, n) for d, n in GRID if rank_recursion(d, n) != standard_lattice(d, n).rank_vector()]
    printed = rank_recursion_printed(2, 4, 2)
    direct = standard_lattice(2, 4).rank_vector()[2]
    ok = not bad and printed == 22 and direct == 24
    return report(4, ok, f"recursion equals counts on the grid; printed closed form gives "
                         f"{printed} vs direct {direct} at (d,n,k)=(2,4,2), reported")


def run_5():
    bad = []
    for d, n in GRID:
        L = standard_lattice(d, n)
        if not verify_decomposition(L.poset, rearranged_decompose(L), "symmetric"):
            bad.append(("symmetric", d, n))
        groups = chunk_members(L)
        for i in range(1, n + 1):
            for s in range(d):
                if ((i, s) not in groups) != expected_empty(d, n, i, s):
                    bad.append(("empty", d, n, i, s))
    return report(5, not bad, "rearranged decomposition symmetric and chunk emptiness "
                              "pattern exact on the grid" + (f", bad {bad[:5]}" if bad else ""))


def run_6():
    bad, slowest = [], 0.0
    for d, n in GRID:
        L = standard_lattice(d, n)
        P = L.poset
        t0 = time.perf_counter()
        B = sbd(L)
        ok = (verify_decomposition(P, B, "boolean").valid
              and verify_decomposition(P, B, "symmetric").valid
              and gamma_from_boolean_parts(P, B) == rank_profile(P).gamma_vector)
        C = scd_from_sbd(P, B)
        ok = ok and verify_decomposition(P, C, "chain").valid and verify_decomposition(P, C, "symmetric").valid
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if not ok or dt >= 10:
            bad.append((d, n, round(dt, 2)))
    L = standard_lattice(5, 3)
    B = sbd(L)
    example = B.census() == {8: 1, 2: 9} and gamma_from_boolean_parts(L.poset, B) == (1, 9)
    return report(6, not bad and example,
                  f"SBD boolean+symmetric, gamma from parts, SCD chain+symmetric on the grid; "
                  f"G(5,5,3) census {B.census()}; slowest {slowest:.2f}s"
                  + (f", bad {bad}" if bad else ""))


def run_7():
    bad = []
    for d, n in GRID:
        L = standard_lattice(d, n)
        P = L.poset
        prof = rank_profile(P)
        # a verified symmetric chain decomposition certifies strong Sperner on its own
        C = scd_from_sbd(P, sbd(L))
        certified = (verify_decomposition(P, C, "chain").valid
                     and verify_decomposition(P, C, "symmetric").valid)
        if not (is_strongly_sperner(P).strongly_sperner and certified and prof.symmetric
                and prof.unimodal and prof.gamma_nonnegative):
            bad.append((d, n))
    return report(7, not bad, "strongly Sperner (rank removal and SCD certificate), symmetric, "
                              "unimodal, gamma-nonnegative on the grid")


def run_8():
    rng = random.Random(20240611)
    posets = [random_graded_poset(rng, max_elements=20) for _ in range(200)]
    posets += [P for P in (import_poset(DATA / f"{f}.json") for f in FIXTURES) if P.m <= 20]
    bad = []
    for idx, P in enumerate(posets):
        sizes = [max_k_family_bruteforce(P, k) for k in range(1, len(P.rank_vector()) + 1)]
        truth = sizes == [sum_largest_ranks(P, k) for k in range(1, len(sizes) + 1)]
        for tie in ("smallest", "largest"):
            rep = is_strongly_sperner(P, tie)
            if rep.strongly_sperner != truth or (truth and rep.k_family_sizes != sizes):
                bad.append(f"#{idx} {tie} rank vector {P.rank_vector()} max k-families {sizes}")
    detail = f"rank removal vs brute force on {len(posets)} posets, both tie-breaks, every k"
    if bad:
        detail += f"; {len(bad)} disagreements: " + "; ".join(bad)
    return report(8, not bad, detail)


def run_9():
    a, b, c = (import_poset(DATA / f"{f}.json") for f in ("poset12", "sperner_only", "two_sperner_only"))
    checks = {
        "(a) strongly Sperner": is_strongly_sperner(a).strongly_sperner,
        "(b) Sperner": is_sperner(b),
        "(b) not 2-Sperner, 8 > 7": (not is_k_sperner_bruteforce(b, 2)
                                     and max_k_family_bruteforce(b, 2) == 8
                                     and sum_largest_ranks(b, 2) == 7),
        "(c) 2-Sperner": is_k_sperner_bruteforce(c, 2),
        "(c) not Sperner, width 4 > 3": not is_sperner(c) and width(c) == 4,
        "truncate(b) = c": is_isomorphic(truncate(b)[0], c),
    }
    failed = [k for k, v in checks.items() if not v]
    return report(9, not failed, "Sperner fixtures: " + ("all checks hold" if not failed else f"failed {failed}"))


def run_10():
    bad = []
    for d, n in GRID:
        P = standard_lattice(d, n).poset
        if n <= 4 and not griggs_scd_exists(P):
            bad.append(("griggs", d, n))
        if max(P.rank_vector()) <= 12:
            if normalized_matching(P).holds != normalized_matching_exhaustive(P).holds:
                bad.append(("flow", d, n))
    for d, n in [(1, k) for k in range(1, 6)]:
        P = standard_lattice(d, n).poset
        if max(P.rank_vector()) <= 12 and normalized_matching(P).holds != normalized_matching_exhaustive(P).holds:
            bad.append(("flow", d, n))
    return report(10, not bad, "normalized matching certificate for rank <= 4; flow equals "
                               "exhaustive where ranks have <= 12 elements")


def run_11():
    rep = verify_reference_table(DATA / "g23_synthetic.json")
    ok = rep.matches and rep.rank_vector == (1, 15, 15, 1) and rep.gamma_vector == (1, 12)
    return report(11, ok, f"reference row {rep.group}: rank {rep.rank_vector}, gamma {rep.gamma_vector}")


def run_12():
    bad = []
    for d, n in GRID:
        L = standard_lattice(d, n)
        if any(reflection_length(w) != n - fix_dim(w) for w in L.elements):
            bad.append(("length", d, n))
    for d in range(2, 6):
        for n in range(2, 5):
            p = GroupParams(d, n)
            L = standard_lattice(d, n)
            for a in range(2, n + 1):
                for s in range(1, d):
                    w = from_cycles(p, [GenCycle((ColoredPoint(1, 0),), s),
                                        GenCycle((ColoredPoint(a, 0),), d - s)])
                    if leq_T(w, L.gamma) != (a == n and s == 1):
                        bad.append(("membership", d, n, a, s))
            t = Reflection(1, 2, d - 1).element(p)
            above = {w for w in coatoms(L) if leq_T(t, w)}
            fam = set()
            for a in range(2, n):
                for b in range(a + 1, n):
                    pts = list(range(1, a + 1)) + list(range(b + 1, n))
                    inner = " ".join(f"{k}^0" for k in range(a + 1, b + 1))
                    fam.add(parse_element("[" + " ".join(f"{k}^0" for k in pts)
                                          + f"]_1 [{n}^0]_{d - 1} (({inner}))", p))
            for s in range(d):
                tail = " ".join(f"{k}^{d - 1}" for k in range(2, n))
                fam.add(parse_element(f"((1^0 {n}^{s} {tail}))", p))
            if not above <= fam or (n >= 3 and above != fam):
                bad.append(("coatoms", d, n))
    return report(12, not bad, "length = n - dim Fix on all members; two-balanced-point "
                               "membership; coatoms above ((1 2))^(d-1)" + (f", bad {bad[:5]}" if bad else ""))


CRITERIA = [run_1, run_2, run_3, run_4, run_5, run_6, run_7, run_8, run_9, run_10, run_11, run_12]


@pytest.mark.parametrize("run", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 13)])
def test_criterion(run, capsys):
    with capsys.disabled():
        ok = run()
    assert ok


if __name__ == "__main__":
    results = [run() for run in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
