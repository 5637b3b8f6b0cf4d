import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncp.io import import_decomposition, import_poset
from ncp.poset import (
    Decomposition, GradedPoset, Part, antichain, boolean_lattice, chain, direct_product,
    find_isomorphism, gamma_from_boolean_parts, gamma_polynomial, gamma_vector, is_isomorphic,
    is_lattice, is_symmetric, is_unimodal, make_part, poly_mul, random_graded_poset,
    rank_profile, transitive_closure, verify_decomposition,
)
from ncp.reflection_order import standard_lattice


def pairs(P):
    return sum(bin(x).count("1") for x in transitive_closure(P))


def test_construction_rejects_rank_jumps():
    with pytest.raises(ValueError, match="jumps"):
        GradedPoset.from_covers([0, 2], [(0, 1)])
    with pytest.raises(ValueError, match="duplicate"):
        GradedPoset((0, 1), ((1, 1), ()))
    with pytest.raises(ValueError, match="out of range"):
        GradedPoset((0,), ((3,),))


def test_gamma_examples():
    assert gamma_vector((1, 3, 4, 3, 1)) == (1, -1, 0)
    assert gamma_vector((1, 6, 11, 6, 1)) == (1, 2, 1)
    assert gamma_vector((1, 12, 12, 1)) == (1, 9)
    assert gamma_vector((1, 6, 6, 1)) == (1, 3)
    with pytest.raises(ValueError):
        gamma_vector((1, 2, 3))


def test_rank_profile_flags():
    prof = rank_profile((1, 3, 4, 3, 1))
    assert prof.symmetric and prof.unimodal and not prof.gamma_nonnegative
    prof = rank_profile((1, 3, 1, 3, 1))
    assert prof.symmetric and not prof.unimodal and prof.gamma_vector == (1, -1, -3)
    prof = rank_profile((1, 2, 3))
    assert prof.gamma_vector is None and not prof.symmetric
    assert is_symmetric(()) and is_unimodal((1, 1, 1))


@settings(max_examples=200)
@given(st.lists(st.integers(0, 30), min_size=1, max_size=8))
def test_gamma_reconstructs_symmetric_polynomials(half):
    N = 2 * len(half) - 1 if len(half) % 2 == 0 else 2 * len(half) - 2
    rv = tuple(half) + tuple(reversed(half[: N + 1 - len(half)]))
    assert is_symmetric(rv)
    g = gamma_vector(rv)
    assert len(g) == N // 2 + 1
    assert gamma_polynomial(g, N) == rv


def test_small_constructions():
    assert boolean_lattice(0).m == 1
    assert is_isomorphic(boolean_lattice(1), chain(2))
    assert boolean_lattice(3).rank_vector() == (1, 3, 3, 1)
    assert is_isomorphic(boolean_lattice(2), direct_product(chain(2), chain(2)))
    assert not is_isomorphic(boolean_lattice(2), chain(4))
    assert direct_product(chain(2), boolean_lattice(2)).rank_vector() == (1, 3, 3, 1)
    three = GradedPoset.from_covers([0, 1, 1, 1, 2], [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
    assert direct_product(chain(2), three).rank_vector() == (1, 4, 4, 1)
    A = standard_lattice(1, 3).poset
    assert direct_product(A, A).m == 25
    assert pairs(chain(3)) == 3
    assert pairs(antichain(4)) == 0
    assert pairs(boolean_lattice(2)) == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_product_multiplies_rank_polynomials(seed):
    rng = random.Random(seed)
    P = random_graded_poset(rng, max_elements=8, max_rank=3)
    Q = random_graded_poset(rng, max_elements=8, max_rank=3)
    assert direct_product(P, Q).rank_vector() == poly_mul(P.rank_vector(), Q.rank_vector())


def test_product_keeps_gamma_nonnegative():
    posets = [standard_lattice(d, n).poset for d, n in [(1, 3), (1, 4), (2, 2), (3, 3), (5, 2)]]
    for P in posets:
        for Q in posets:
            prof = rank_profile(direct_product(P, Q))
            assert prof.symmetric and prof.gamma_nonnegative


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_isomorphism_finds_relabelings(seed):
    rng = random.Random(seed)
    P = random_graded_poset(rng, max_elements=14)
    perm = list(range(P.m))
    rng.shuffle(perm)
    inv = {v: k for k, v in enumerate(perm)}
    rank = [P.rank[inv[j]] for j in range(P.m)]
    Q = GradedPoset.from_covers(rank, [(perm[a], perm[b]) for a, b in P.covers()])
    f = find_isomorphism(P, Q)
    assert f is not None
    for a, b in P.covers():
        assert f[b] in Q.up_covers[f[a]]


def test_isomorphism_cap():
    with pytest.raises(ValueError):
        is_isomorphic(boolean_lattice(7), boolean_lattice(7))


def test_lattice_check():
    assert is_lattice(boolean_lattice(3))
    bowtie = GradedPoset.from_covers([0, 0, 1, 1], [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert not is_lattice(bowtie)


def test_induced_recomputes_covers():
    P = chain(4)
    sub = P.induced([0, 2, 3], regrade=True)
    assert sub.rank == (0, 1, 2) and sub.covers() == [(0, 1), (1, 2)]
    assert P.induced([0, 1], ranks=[5, 6]).rank == (5, 6)


@pytest.mark.parametrize("k", range(7))
def test_boolean_lattice_verifies_as_one_part(k):
    P = boolean_lattice(k)
    D = Decomposition((make_part(P, range(P.m), "boolean", k),))
    assert verify_decomposition(P, D, "boolean")
    assert verify_decomposition(P, D, "symmetric")


def test_fixture_decompositions(data_dir):
    P = import_poset(data_dir / "poset12.json")
    assert P.rank_vector() == (1, 3, 4, 3, 1)
    plain = import_decomposition(data_dir / "poset12_plain.json")
    assert len(plain) == 3
    assert verify_decomposition(P, plain, "plain")
    assert not verify_decomposition(P, plain, "symmetric")
    assert verify_decomposition(P, import_decomposition(data_dir / "poset12_symmetric.json"), "symmetric")
    chains = import_decomposition(data_dir / "poset12_chains.json")
    assert verify_decomposition(P, chains, "chain") and verify_decomposition(P, chains, "symmetric")

    Q = import_poset(data_dir / "poset25.json")
    assert Q.rank_vector() == (1, 6, 11, 6, 1)
    D = import_decomposition(data_dir / "poset25_boolean.json")
    assert len(D) == 4
    assert verify_decomposition(Q, D, "boolean") and verify_decomposition(Q, D, "symmetric")
    assert D.census() == {16: 1, 4: 2, 1: 1}
    assert gamma_from_boolean_parts(Q, D) == rank_profile(Q).gamma_vector == (1, 2, 1)


def test_verifier_reports_violations():
    P = boolean_lattice(2)
    # {0, 3} is not connected by covers
    D = Decomposition((make_part(P, [0, 3]), make_part(P, [1]), make_part(P, [2])))
    rep = verify_decomposition(P, D, "plain")
    assert not rep.valid and rep.violations[0][0] == 0
    # a chain part that is not saturated is rejected even though covers are ambient
    C = chain(3)
    D = Decomposition((Part((0, 1, 2), "chain", 3, (0, 2)),))
    assert verify_decomposition(C, D, "chain")
    D = Decomposition((make_part(C, [0, 1], "boolean", 1), make_part(C, [2], "boolean", 0)))
    assert verify_decomposition(C, D, "boolean")
    assert not verify_decomposition(C, D, "symmetric")
    with pytest.raises(ValueError):
        verify_decomposition(C, Decomposition((make_part(C, [0, 1]),)), "plain")
    with pytest.raises(ValueError):
        verify_decomposition(C, Decomposition((make_part(C, [0, 1, 2]), make_part(C, [2]))), "plain")
    with pytest.raises(ValueError):
        verify_decomposition(C, Decomposition((make_part(C, [0, 1, 2]),)), "bogus")


def test_boolean_check_rejects_wrong_shape():
    P = chain(4)
    D = Decomposition((make_part(P, range(4), "boolean", 2),))
    assert not verify_decomposition(P, D, "boolean")


def test_gamma_from_parts_examples():
    P = boolean_lattice(3)
    D = Decomposition((make_part(P, range(8), "boolean", 3),))
    assert gamma_from_boolean_parts(P, D) == (1, 0)
    with pytest.raises(ValueError):
        gamma_from_boolean_parts(chain(3), Decomposition((make_part(chain(3), [0, 1, 2]),)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_posets_are_graded(seed):
    P = random_graded_poset(random.Random(seed))
    assert 1 <= P.m <= 20
    assert sum(P.rank_vector()) == P.m
    for i, j in P.covers():
        assert P.rank[j] == P.rank[i] + 1
