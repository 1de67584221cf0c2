from __future__ import annotations

import random
from itertools import combinations, permutations

import pytest

from flagcube.flags import (
    Flag,
    IntersectionType,
    all_types,
    canonical_form,
    enumerate_flags,
    flag_poset,
    is_isomorphic,
    mobius_coefficients,
)

CHERRY = IntersectionType(3, ((1, 2), (1, 3)))


def brute_force_flags(T, f):
    """All graphs on [f] inducing T on [t], deduplicated by relabelling the free vertices."""
    pairs = [p for p in combinations(range(1, f + 1), 2) if p[1] > T.t]
    free = list(range(T.t + 1, f + 1))
    seen = set()
    for k in range(len(pairs) + 1):
        for extra in combinations(pairs, k):
            es = set(T.edges) | set(extra)
            key = min(
                tuple(sorted(tuple(sorted((dict(zip(free, img)).get(i, i), dict(zip(free, img)).get(j, j)))) for i, j in es))
                for img in permutations(free)
            )
            seen.add(key)
    return seen


def test_cherry_flags_of_size_4():
    flags = enumerate_flags(CHERRY, 4)
    assert len(flags) == 8
    assert len({canonical_form(F) for F in flags}) == 8


def test_small_counts():
    assert enumerate_flags(IntersectionType(1), 1) == [Flag(IntersectionType(1), 1, ())]
    T = IntersectionType(2)
    assert len(enumerate_flags(T, 3)) == len(brute_force_flags(T, 3)) == 4


@pytest.mark.parametrize("t,f", [(0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (2, 5), (3, 5)])
def test_enumeration_matches_brute_force(t, f):
    for T in all_types(t):
        assert len(enumerate_flags(T, f)) == len(brute_force_flags(T, f))


def test_enumeration_errors_and_order():
    with pytest.raises(ValueError):
        enumerate_flags(CHERRY, 2)
    flags = enumerate_flags(IntersectionType(1), 3)
    sizes = [len(F.edges) for F in flags]
    assert sizes == sorted(sizes)


def test_canonical_form_examples():
    T = IntersectionType(1)
    one_free = Flag(T, 2, ((1, 2),))
    assert canonical_form(one_free) == one_free
    a = Flag(T, 3, ((1, 2),))
    b = Flag(T, 3, ((1, 3),))
    assert a != b and canonical_form(a) == canonical_form(b)
    assert is_isomorphic(a, b)


def test_flag_rejects_wrong_labelled_part():
    with pytest.raises(ValueError):
        Flag(CHERRY, 4, ((1, 2),))


def test_canonical_form_invariance_random():
    rng = random.Random(11)
    for T in all_types(2):
        for F in enumerate_flags(T, 5):
            free = list(range(3, 6))
            img = free[:]
            rng.shuffle(img)
            mp = dict(zip(free, img))
            es = tuple(sorted(tuple(sorted((mp.get(i, i), mp.get(j, j)))) for i, j in F.edges))
            G = Flag(T, 5, es)
            assert canonical_form(G) == canonical_form(F) == canonical_form(canonical_form(F))


def test_every_graph_maps_to_one_flag():
    T = IntersectionType(2, ((1, 2),))
    f = 5
    flags = set(enumerate_flags(T, f))
    pairs = [p for p in combinations(range(1, f + 1), 2) if p[1] > 2]
    for k in range(len(pairs) + 1):
        for extra in combinations(pairs, k):
            assert canonical_form(Flag(T, f, ((1, 2),) + extra)) in flags


def test_poset_examples():
    P = flag_poset(CHERRY, 4)
    assert len(P) == 16
    K3 = IntersectionType(3, ((1, 2), (1, 3), (2, 3)))
    assert len(flag_poset(K3, 3)) == 1
    assert max(P.rank(e) for e in P.elements) == 6


def test_mobius_examples():
    P = flag_poset(CHERRY, 4)
    top = P.elements[-1]
    assert mobius_coefficients(top, P) == {top: 1}
    below_top = tuple(e for e in top if e != (3, 4))
    assert sorted(mobius_coefficients(below_top, P).values()) == [-1, 1]
    # F6: edges ij, ik, jl, kl with (i,j,k,l) = (1,2,3,4)
    F6 = Flag(CHERRY, 4, ((1, 2), (1, 3), (2, 4), (3, 4)))
    mc = mobius_coefficients(F6, P)
    assert len(mc) == 4
    assert [mc[e] for e in sorted(mc, key=len)].count(-1) == 2
    assert mc[F6.edges] == 1 and mc[top] == 1


def test_mobius_total_mass():
    for T in all_types(2):
        P = flag_poset(T, 4)
        bottom = P.elements[0]
        free = 6 - len(T.edges)
        assert sum(abs(v) for v in mobius_coefficients(bottom, P).values()) == 2**free


def test_flag_json_round_trip():
    F = Flag(IntersectionType(2, ((1, 2),)), 3, ((1, 2), (1, 3)))
    assert F.to_dict() == {"t": 2, "f": 3, "type_edges": [[1, 2]], "edges": [[1, 2], [1, 3]]}
    assert Flag.from_json(F.to_json()) == F


def test_type_parse():
    assert IntersectionType.parse("3:1-2,1-3") == CHERRY
    assert IntersectionType.parse("1:") == IntersectionType(1)
    with pytest.raises(ValueError):
        IntersectionType.parse("2:1-2-3")
