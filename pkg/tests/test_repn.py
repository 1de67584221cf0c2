from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import pytest

from flagcube.exact import mat_mul, rank
from flagcube.qpoly import SquareFreePolynomial, symmetrize_subgroup
from flagcube.repn import (
    centralizer_order,
    char_value,
    class_size,
    compute_W,
    cycle_type,
    dim_irrep,
    dominates,
    first_tableau,
    isotypic_projection,
    isotypic_report,
    monomial_basis,
    multiplicity_by_trace,
    poly_to_vector,
)
from flagcube.shapes import Partition, all_tableaux, partitions, row_group, standard_tableaux


def P(*parts):
    return Partition(parts)


def test_character_examples():
    for n in range(1, 7):
        for lam in partitions(n):
            assert char_value(lam, P(*[1] * n)) == len(list(standard_tableaux(lam)))
    for n in range(2, 7):
        assert char_value(P(*[1] * n), P(2, *[1] * (n - 2))) == -1
    assert char_value(P(3, 1), P(1, 1, 1, 1)) == 3
    with pytest.raises(ValueError):
        char_value(P(3, 1), P(2, 1))


def test_dimension_examples():
    assert dim_irrep(P(7)) == 1
    assert dim_irrep(P(4, 1)) == 4 == len(list(standard_tableaux(P(4, 1))))
    assert dim_irrep(P(2, 2)) == 2 == len(list(standard_tableaux(P(2, 2))))


@pytest.mark.parametrize("n", range(1, 8))
def test_character_orthogonality(n):
    lams = list(partitions(n))
    for a in lams:
        for b in lams:
            s = sum(class_size(mu) * char_value(a, mu) * char_value(b, mu) for mu in lams)
            assert s == (factorial(n) if a == b else 0)


def test_class_sizes_add_up():
    for n in range(1, 8):
        assert sum(class_size(mu) for mu in partitions(n)) == factorial(n)
    assert cycle_type((2, 3, 1, 5, 4)) == P(3, 2)
    assert centralizer_order(P(2, 2)) == 8


def _identity(k):
    return [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]


def test_projections_n4_d1():
    n, d = 4, 1
    k = len(monomial_basis(n, d))
    lams = list(partitions(n))
    pis = {lam: isotypic_projection(lam, n, d) for lam in lams}
    total = [[sum(pis[l][i][j] for l in lams) for j in range(k)] for i in range(k)]
    assert total == _identity(k)
    for a in lams:
        assert mat_mul(pis[a], pis[a]) == pis[a]
        for b in lams:
            if a != b:
                assert all(v == 0 for row in mat_mul(pis[a], pis[b]) for v in row)


def test_projection_ranks_n6_d1():
    ranks = {str(lam): rank(isotypic_projection(lam, 6, 1)) for lam in partitions(6)}
    assert {k: v for k, v in ranks.items() if v} == {"6=6": 2, "6=5+1": 5, "6=4+2": 9}


def test_multiplicities_n6_d1():
    want = {P(6): 2, P(5, 1): 1, P(4, 2): 1, P(4, 1, 1): 0}
    for lam, m in want.items():
        assert len(compute_W(first_tableau(lam), 1)) == m
        assert multiplicity_by_trace(lam, 6, 1) == m


def test_W_dimension_same_for_every_tableau_of_a_shape():
    for lam in [P(3, 1), P(2, 2), P(2, 1, 1)]:
        dims = {len(compute_W(t, 1)) for t in all_tableaux(lam)}
        assert len(dims) == 1


@pytest.mark.parametrize("n,d", [(4, 1), (5, 1), (6, 1), (4, 2), (5, 2)])
def test_dimension_bookkeeping_and_vanishing(n, d):
    rep = isotypic_report(n, d)
    assert rep.total == sum(comb(comb(n, 2), i) for i in range(d + 1))
    for row in rep.rows:
        lam = Partition.parse(row["lambda"])
        if n - lam.parts[0] > 2 * d:
            assert row["m_lambda"] == 0


def test_row_invariants_live_above_mu():
    # averaging over R_mu then projecting to any lambda not dominating mu gives zero
    n, d = 5, 1
    basis = monomial_basis(n, d)
    for mu in partitions(n):
        tau = first_tableau(mu)
        gens, size = row_group(tau)
        avgs = [poly_to_vector(symmetrize_subgroup(SquareFreePolynomial(n, {m: 1}), gens, size), basis) for m in basis]
        for lam in partitions(n):
            if dominates(lam, mu):
                continue
            pi = isotypic_projection(lam, n, d)
            for v in avgs:
                assert all(sum(pi[i][j] * v[j] for j in range(len(v))) == 0 for i in range(len(v)))


def test_caps():
    with pytest.raises(ValueError):
        isotypic_projection(P(8), 8, 1)
    with pytest.raises(ValueError):
        compute_W(first_tableau(P(4)), 3)


def test_report_json():
    import json

    rep = isotypic_report(4, 1, all_partitions=False)
    data = json.loads(rep.to_json())
    assert data["dimension"] == 7 and data["sum_m_n"] == 7
