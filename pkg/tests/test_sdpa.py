from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from flagcube.qpoly import SquareFreePolynomial, edge_sum, symmetrize_full
from flagcube.sos.assemble import assemble
from flagcube.sos.ideal import hypercube
from flagcube.sos.pipeline import certify_numeric, to_reduced
from flagcube.sos.sdpa import (
    export_sdpa,
    format_sdpa,
    format_sdpa_result,
    parse_sdpa,
    parse_sdpa_result,
    read_sdpa,
    scatter_blocks,
    sdpa_problem,
)
from flagcube.sos.solve import solve_internal


def square_target(n=4):
    s = edge_sum(n)
    c = SquareFreePolynomial.constant(n, 3)
    return symmetrize_full((s - c) * (s - c))


def test_degree_zero_export():
    p = assemble(SquareFreePolynomial.constant(4, 2), 0, hypercube(4))
    sp = sdpa_problem(p)
    assert sp.m == 1 and sp.block_sizes == [1]
    text = format_sdpa(sp)
    assert text.splitlines()[2:5] == ["1", "1", "1"]


def test_round_trip_is_exact(tmp_path):
    p = assemble(square_target(), 1, hypercube(4))
    path = tmp_path / "p.dat-s"
    sp = export_sdpa(p, str(path))
    back = read_sdpa(str(path))
    assert back.block_sizes == sp.block_sizes
    assert back.F == sp.F and back.c == sp.c
    assert format_sdpa(back) == path.read_text()


def test_rows_are_rescaled_to_integers():
    p = assemble(square_target(), 1, hypercube(4))
    sp = sdpa_problem(p)
    for line in format_sdpa(sp).splitlines()[6:]:
        assert all("/" not in tok for tok in line.split())


def test_parse_rejects_nonzero_objective_matrix():
    text = '"x"\n1\n1\n1\n1\n0 1 1 1 1\n1 1 1 1 1\n'
    with pytest.raises(ValueError):
        parse_sdpa(text)
    with pytest.raises(ValueError):
        parse_sdpa('"x"\n1\n1\n1\n1\n1 1 1 1\n')


def test_result_round_trip_certifies():
    p = assemble(square_target(), 1, hypercube(4))
    red, numeric, report = solve_internal(p)
    assert report.status == "numerically_feasible_only"
    full = red.expand([[[Fraction(v) for v in row] for row in np.asarray(B).tolist()] for B in numeric])
    kept = [np.array(B, dtype=float) for B, s in zip(full, p.block_sizes) if s]
    text = format_sdpa_result(kept)
    blocks = scatter_blocks(p, parse_sdpa_result(text))
    for a, b in zip(blocks, full):
        assert np.allclose(a, np.array(b, dtype=float))
    r = certify_numeric(p, blocks)
    assert r.status == "certified"


def test_result_parser_diagonal_blocks():
    text = "yMat =\n{\n{ {1,2},{2,5} }\n{ 3, 4 }\n}\n"
    A, B = parse_sdpa_result(text)
    assert A.tolist() == [[1, 2], [2, 5]]
    assert B.tolist() == [[3, 0], [0, 4]]
    with pytest.raises(ValueError):
        parse_sdpa_result("xVec = {1}")


def test_to_reduced_inverts_expand():
    p = assemble(square_target(), 1, hypercube(4))
    red, numeric, _ = solve_internal(p)
    full = red.expand([[[Fraction(v) for v in row] for row in np.asarray(B).tolist()] for B in numeric])
    again = to_reduced(red, [np.array(B, dtype=float) for B in full])
    for a, b in zip(again, numeric):
        assert np.allclose(a, b, atol=1e-8)
