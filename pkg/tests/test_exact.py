from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from flagcube.exact import LDL, NotPSD, _ldl_fractions, in_span, ldl_psd, nullspace, quadratic_form, rank, solve
from flagcube.sos.certificate import psd_check_exact

F = Fraction


def test_psd_examples():
    w = psd_check_exact([[2, 1], [1, 2]])
    assert isinstance(w, LDL) and w.D == (F(2), F(3, 2))
    v = psd_check_exact([[1, 2], [2, 1]])
    assert isinstance(v, NotPSD)
    assert v.vector == (1, -1) and v.value == -2
    z = psd_check_exact([[0, 0], [0, 0]])
    assert isinstance(z, LDL) and z.D == (0, 0)


def test_rejects_non_symmetric():
    with pytest.raises(ValueError):
        ldl_psd([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        ldl_psd([[1, 2]])


small = st.integers(-4, 4).map(F)


@st.composite
def gram(draw, k=4, r=3):
    B = [[draw(small) for _ in range(r)] for _ in range(k)]
    return [[sum((B[i][a] * B[j][a] for a in range(r)), F(0)) for j in range(k)] for i in range(k)]


@st.composite
def symmetric(draw, k=4):
    M = [[F(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            M[i][j] = M[j][i] = F(draw(st.integers(-6, 6)), draw(st.integers(1, 3)))
    return M


@given(gram())
def test_gram_matrices_factor_exactly(A):
    w = ldl_psd(A)
    assert isinstance(w, LDL)
    assert all(d >= 0 for d in w.D)
    assert w.reconstruct() == A


@given(symmetric())
def test_witness_or_factorization(A):
    w = ldl_psd(A)
    if isinstance(w, NotPSD):
        assert w.value < 0 and quadratic_form(A, w.vector) == w.value
    else:
        assert w.reconstruct() == A


@given(symmetric())
def test_fraction_free_matches_rational_route(A):
    assert ldl_psd(A) == _ldl_fractions(A)


def test_rank_span_nullspace_solve():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(rows) == 2
    assert in_span([1, 3, 4], rows)
    assert not in_span([0, 0, 1], rows)
    N = nullspace(rows, 3)
    assert len(N) == 1 and all(sum(F(r[i]) * N[0][i] for i in range(3)) == 0 for r in rows)
    assert solve(rows, [1, 2, 0]) is not None
    assert solve(rows, [1, 3, 0]) is None
