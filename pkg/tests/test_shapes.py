from __future__ import annotations


import pytest
from hypothesis import given, strategies as st

from flagcube.repn import dim_irrep
from flagcube.shapes import (
    Partition,
    Tableau,
    all_tableaux,
    enumerate_lambda,
    hook_length_dimension,
    hook_of,
    is_standard,
    materialize_row_group,
    partitions,
    row_group,
    standard_tableaux,
    theta_of,
)


def P(*parts):
    return Partition(parts)


def lex_ge(a, b):
    return a.parts >= b.parts


def test_enumerate_lambda_n6_d1_against_filter():
    got = enumerate_lambda(6, 1)
    assert got == [P(6), P(5, 1), P(4, 2), P(4, 1, 1)]
    hook = P(4, 1, 1)
    allp = list(partitions(6))
    assert len(allp) == 11
    assert [lam for lam in allp if lex_ge(lam, hook)] == got


def test_enumerate_lambda_edge_cases():
    assert enumerate_lambda(5, 0) == [P(5)]
    with pytest.raises(ValueError):
        enumerate_lambda(3, 2)


@pytest.mark.parametrize("n,d", [(4, 1), (6, 1), (6, 2), (7, 2), (8, 3)])
def test_enumerate_lambda_bounds(n, d):
    lams = enumerate_lambda(n, d)
    bound = sum(len(list(partitions(k))) if k else 1 for k in range(2 * d + 1))
    assert len(lams) <= bound
    for lam in lams:
        assert len(lam) <= 2 * d + 1 and lam[0] >= n - 2 * d
    assert [l.parts for l in lams] == sorted((l.parts for l in lams), reverse=True)


def test_is_standard_examples():
    assert is_standard(Tableau(((1, 2), (3,))))
    assert not is_standard(Tableau(((2, 1), (3,))))
    brute = [t for t in all_tableaux(P(3, 1)) if is_standard(t)]
    assert len(list(all_tableaux(P(3, 1)))) == 24
    assert len(brute) == 3 == len(list(standard_tableaux(P(3, 1))))


def test_hook_and_theta_examples():
    assert hook_of(Tableau(((1, 2), (3, 4)))) == Tableau(((1, 2), (3,), (4,)))
    h = Tableau(((1, 2), (3,), (4,)))
    assert hook_of(h) == h
    assert hook_of(Tableau(((2, 4), (1, 3)))) == Tableau(((2, 4), (1,), (3,)))
    assert theta_of(h).images == (3, 4)
    assert theta_of(Tableau(((2, 4), (1, 3)))).images == (1, 3)
    assert theta_of(Tableau(((1, 2, 3),))).t == 0


def test_row_group_sizes():
    assert row_group(Tableau(((1, 2, 3, 4),)))[1] == 24
    assert row_group(Tableau(((1,), (2,), (3,))))[1] == 1
    tau = Tableau(((1, 3), (2, 4)))
    assert row_group(tau)[1] == 4 == len(materialize_row_group(tau))


def test_partition_text():
    assert str(P(4, 1, 1)) == "6=4+1+1"
    assert Partition.parse("6=4+1+1") == P(4, 1, 1)
    for bad in ["6=1+4+1", "5=4+1+1", "4+-1"]:
        with pytest.raises(ValueError):
            Partition.parse(bad)


def test_tableau_json_round_trip():
    t = Tableau(((2, 4), (1, 3)))
    assert Tableau.from_json(t.to_json()) == t


@st.composite
def tableaux(draw):
    n = draw(st.integers(1, 6))
    lam = draw(st.sampled_from(list(partitions(n))))
    labels = draw(st.permutations(range(1, n + 1)))
    rows, k = [], 0
    for r in lam.parts:
        rows.append(tuple(labels[k:k + r]))
        k += r
    return Tableau(tuple(rows))


@given(tableaux())
def test_hook_properties(tau):
    h = hook_of(tau)
    assert hook_of(h) == h
    assert theta_of(h) == theta_of(tau)
    assert h.rows[0] == tau.rows[0]


@pytest.mark.parametrize("n", range(1, 7))
def test_standard_count_is_dimension(n):
    for lam in partitions(n):
        k = len(list(standard_tableaux(lam)))
        assert k == hook_length_dimension(lam) == dim_irrep(lam)
