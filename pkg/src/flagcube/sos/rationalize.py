"""Rounding a numeric solution to an exact certificate."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from flagcube.exact import Matrix, NotPSD, ldl_psd, solve as exact_solve
from flagcube.sos.assemble import FlagSosProblem
from flagcube.sos.certificate import CertBlock, FlagSosCertificate
from flagcube.sos.solve import Reduction, reduce_problem

DENOMINATOR_BOUND = 10**6


@dataclass
class RationalizeFailure:
    reason: str
    log: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return False


def round_matrix(M, bound: int = DENOMINATOR_BOUND, mode: str = "grid") -> Matrix:
    """Exactly symmetric rounding of every entry.

    ``grid`` rounds to multiples of 1/bound, so all entries share one
    denominator and the exact projection stays cheap. ``cf`` takes the best
    continued-fraction approximant with denominator <= bound, which recovers
    small rationals but mixes denominators.
    """
    A = np.asarray(M, dtype=float)
    k = A.shape[0] if A.ndim == 2 else 0
    A = (A + A.T) / 2 if k else A
    if mode == "grid":
        return [[Fraction(int(round(float(A[i, j]) * bound)), bound) for j in range(k)] for i in range(k)]
    Q = [[Fraction(float(A[i, j])).limit_denominator(bound) for j in range(k)] for i in range(k)]
    return [[(Q[i][j] + Q[j][i]) / 2 for j in range(k)] for i in range(k)]


def _inner(A: Matrix, B: Matrix) -> Fraction:
    return sum((a * b for ra, rb in zip(A, B) for a, b in zip(ra, rb) if a and b), Fraction(0))


def project(red: Reduction, R: list[Matrix]) -> list[Matrix] | None:
    """Least Frobenius-norm exact correction with A'(R) = b'; None if impossible."""
    m = len(red.A)
    if m == 0:
        return R
    r = [b - sum((_inner(red.A[c][k], R[k]) for k in range(len(R))), Fraction(0)) for c, b in enumerate(red.b)]
    if not any(r):
        return R
    G = [[sum((_inner(red.A[i][k], red.A[j][k]) for k in range(len(R))), Fraction(0)) for j in range(m)] for i in range(m)]
    y = exact_solve(G, r)
    if y is None:
        return None
    out = []
    for k, Rk in enumerate(R):
        Rk = [row[:] for row in Rk]
        for c in range(m):
            if y[c]:
                M = red.A[c][k]
                for i, row in enumerate(M):
                    for j, v in enumerate(row):
                        if v:
                            Rk[i][j] += y[c] * v
        out.append(Rk)
    return out


def rationalize(
    numeric: Sequence,
    problem: FlagSosProblem,
    reduction: Reduction | None = None,
    denominator_bound: int = DENOMINATOR_BOUND,
) -> FlagSosCertificate | RationalizeFailure:
    """``numeric`` holds one block per problem block, in reduced coordinates when a reduction is given."""
    log: list[str] = []
    if reduction is None:
        reduction, rlog, verdict = reduce_problem(problem, facial=False)
        log += rlog
        if verdict is not None:
            return RationalizeFailure(f"problem is {verdict}", log)
    if len(numeric) != len(problem.blocks):
        return RationalizeFailure("block count mismatch", log)
    for k, (B, s) in enumerate(zip(numeric, reduction.sizes)):
        if np.asarray(B).shape != (s, s):
            return RationalizeFailure(f"block {k} has shape {np.asarray(B).shape}, expected {(s, s)}", log)
    Rp = None
    for mode in ("grid", "cf"):
        cand = project(reduction, [round_matrix(B, denominator_bound, mode) for B in numeric])
        if cand is None:
            return RationalizeFailure("projection onto the linear identity failed", log)
        bad = next(((k, w) for k, B in enumerate(cand) if isinstance(w := ldl_psd(B), NotPSD)), None)
        if bad is None:
            log.append(f"rounded ({mode}) with denominator bound {denominator_bound}")
            Rp = cand
            break
        log.append(f"{mode} rounding: block {bad[0]} not psd (v^T R v = {float(bad[1].value):.3e})")
    if Rp is None:
        return RationalizeFailure("rounded blocks are not psd", log)
    R = reduction.expand(Rp)
    if any(problem.residual(R)):
        return RationalizeFailure("identity residue nonzero after projection", log)
    blocks = []
    for blk, Rk in zip(problem.blocks, R):
        w = ldl_psd(Rk)
        if isinstance(w, NotPSD):
            return RationalizeFailure("expanded block is not psd", log)
        blocks.append(CertBlock(blk.t, blk.type, blk.flags, tuple(tuple(r) for r in Rk), w))
    log.append("exact LDL^T witnesses found for every block")
    fs = None if problem.flag_size == 2 * problem.d else problem.flag_size
    return FlagSosCertificate(problem.n, problem.d, problem.variant, problem.ideal, tuple(blocks), fs)
