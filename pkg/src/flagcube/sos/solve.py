"""Numeric solution of an assembled flag-SOS problem.

The feasibility question "is there R_T psd with A(R) = b" is posed as
maximizing lambda subject to R_T - lambda I psd, with a trace bound that keeps
the feasible set compact. lambda* > 0 means strictly feasible, lambda* < 0
means infeasible. Zeros of the target on the variety force a face of the cone;
that face is computed exactly and the problem restricted to it first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math
from math import comb

import numpy as np

from flagcube.exact import Matrix, independent_rows, nullspace, solve as exact_solve
from flagcube.sos.assemble import FlagCounter, FlagSosProblem
from flagcube.sos.ideal import class_values, variety
from flagcube.sos.ipm import solve_sdp

STATUSES = ("certified", "numerically_feasible_only", "infeasible_at_degree", "solver_limit")
FACIAL_BITS_CAP = 15


@dataclass
class Reduction:
    """Problem restricted to R_T = P_T R'_T P_T^T and to independent constraints."""

    P: list[Matrix]  # k_T x k'_T, columns span the allowed face
    A: list[list[Matrix]]  # A'[c][k] = P^T A[c][k] P, independent rows only
    b: list[Fraction]
    rows: list[int]
    zero_classes: list[int] = field(default_factory=list)

    @property
    def sizes(self) -> list[int]:
        return [len(p[0]) if p else 0 for p in self.P]

    def expand(self, Rp: list[Matrix]) -> list[Matrix]:
        out = []
        for P, R in zip(self.P, Rp):
            k = len(P)
            kp = len(R)
            PR = [[sum((P[i][a] * R[a][c] for a in range(kp) if P[i][a]), Fraction(0)) for c in range(kp)] for i in range(k)]
            out.append(
                [[sum((PR[i][c] * P[j][c] for c in range(kp) if P[j][c]), Fraction(0)) for j in range(k)] for i in range(k)]
            )
        return out


@dataclass
class SolveReport:
    status: str
    objective: float | None = None  # lambda*
    slack: float | None = None  # trace-bound slack
    primal_residual: float | None = None
    dual_residual: float | None = None
    iterations: int = 0
    strict: bool = False
    log: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "objective": self.objective,
            "slack": self.slack,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "iterations": self.iterations,
            "log": list(self.log),
        }


def _vec(mats: list[Matrix]) -> list[Fraction]:
    """Upper-triangular coordinates with doubled off-diagonal weights: <A, R> = vec(A) . svec(R)."""
    out = []
    for M in mats:
        k = len(M)
        for i in range(k):
            out.append(M[i][i])
            for j in range(i + 1, k):
                out.append(M[i][j] + M[j][i])
    return out


def _congruence(P: Matrix, M: Matrix) -> Matrix:
    k = len(P)
    kp = len(P[0]) if P else 0
    MP = [[sum((M[i][a] * P[a][c] for a in range(k) if P[a][c]), Fraction(0)) for c in range(kp)] for i in range(k)]
    return [[sum((P[a][r] * MP[a][c] for a in range(k) if P[a][r]), Fraction(0)) for c in range(kp)] for r in range(kp)]


def _identity(k: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]


def point_classes(problem: FlagSosProblem) -> tuple[tuple[int, ...], tuple[Fraction, ...]] | None:
    """Variety class representatives and target values there (None when too large)."""
    ideal = problem.ideal
    if comb(problem.n, 2) > FACIAL_BITS_CAP and problem.coordinate_kind == "orbit":
        return None
    V = variety(ideal)
    return V.reps, class_values(problem.target, ideal)


def _balance(P: list[Matrix], A: list[list[Matrix]]) -> None:
    """Rescale each face coordinate by a power of two so moment diagonals are of order one."""
    for k, Pk in enumerate(P):
        kp = len(Pk[0]) if Pk else 0
        for a in range(kp):
            s = max((abs(A[c][k][a][a]) for c in range(len(A))), default=Fraction(0))
            if not s:
                continue
            e = round(math.log2(float(s)) / 2)
            if e == 0:
                continue
            f = Fraction(1, 2**e) if e > 0 else Fraction(2 ** (-e))
            for row in Pk:
                row[a] *= f
            for c in range(len(A)):
                M = A[c][k]
                for i in range(kp):
                    M[i][a] *= f
                    M[a][i] *= f


def reduce_problem(problem: FlagSosProblem, facial: bool = True) -> tuple[Reduction | None, list[str], str | None]:
    """Exact preprocessing. Returns (reduction, log, verdict); verdict is set when already decided."""
    log: list[str] = []
    P = [_identity(blk.size) for blk in problem.blocks]
    zeros: list[int] = []
    if facial:
        pc = point_classes(problem)
        if pc is None:
            log.append("facial reduction skipped: variety too large to enumerate")
        else:
            reps, vals = pc
            neg = [i for i, v in enumerate(vals) if v < 0]
            if neg:
                log.append(f"target is negative at variety class {neg[0]} (value {vals[neg[0]]})")
                return None, log, "infeasible_at_degree"
            zeros = [i for i, v in enumerate(vals) if v == 0]
            if zeros:
                for k, blk in enumerate(problem.blocks):
                    if not blk.size:
                        continue
                    cnt = FlagCounter(blk, problem.n, problem.variant)
                    U = []
                    for z in zeros:
                        for th in cnt.thetas():
                            v = cnt.vector(reps[z], th)
                            if any(v):
                                U.append(v)
                    if U:
                        N = nullspace(U, blk.size)
                        P[k] = [[N[c][i] for c in range(len(N))] for i in range(blk.size)]
                log.append(f"facial reduction at {len(zeros)} zero classes: sizes {[len(p[0]) if p and p[0] else 0 for p in P]}")
    A = []
    for mats in problem.A:
        A.append([_congruence(P[k], M) if len(P[k]) and len(P[k][0]) != len(P[k]) else [row[:] for row in M] for k, M in enumerate(mats)])
    for k in range(len(P)):
        if P[k] and not P[k][0]:
            for c in range(len(A)):
                A[c][k] = []
    _balance(P, A)
    rows = [_vec(m) for m in A]
    if exact_solve(rows, problem.b) is None:
        log.append("linear identity has no solution (target outside the span of the moment matrices)")
        return None, log, "infeasible_at_degree"
    keep = independent_rows(rows)
    log.append(f"constraints: {len(A)} coordinates, {len(keep)} independent")
    red = Reduction(P, [A[c] for c in keep], [problem.b[c] for c in keep], keep, zeros)
    return red, log, None


def _float_blocks(mats: list[Matrix]) -> list[np.ndarray]:
    return [np.array([[float(v) for v in row] for row in M], dtype=float).reshape(len(M), len(M)) for M in mats]


def _scatter(blocks: list[np.ndarray], active: list[int], sizes: list[int]) -> list[np.ndarray]:
    out = [np.zeros((s, s)) for s in sizes]
    for k, B in zip(active, blocks):
        out[k] = B
    return out


def solve_reduced(red: Reduction, tol: float = 1e-8, margin: float = 1e-6, max_iter: int = 100) -> tuple[list[np.ndarray], SolveReport]:
    sizes = red.sizes
    m = len(red.A)
    log: list[str] = []
    if m == 0:
        R = [np.eye(s) for s in sizes]
        return R, SolveReport("numerically_feasible_only", 1.0, None, 0.0, 0.0, 0, True, ["no constraints left"])
    if sum(sizes) == 0:
        ok = all(b == 0 for b in red.b)
        st = "numerically_feasible_only" if ok else "infeasible_at_degree"
        return [np.zeros((s, s)) for s in sizes], SolveReport(st, None, None, 0.0, 0.0, 0, ok, ["every block eliminated by facial reduction"])
    active = [k for k, s in enumerate(sizes) if s]
    A = [[M for k, M in enumerate(_float_blocks(mats)) if sizes[k]] for mats in red.A]
    all_sizes, sizes = sizes, [sizes[k] for k in active]
    b = np.array([float(v) for v in red.b])
    scale = np.array([max(np.sqrt(sum(np.sum(M * M) for M in mats)), 1e-300) for mats in A])
    A = [[M / s for M in mats] for mats, s in zip(A, scale)]
    b = b / scale
    # least-norm solution of A(R) = b
    G = np.array([[sum(np.vdot(x, y) for x, y in zip(A[i], A[j])) for j in range(m)] for i in range(m)])
    y0 = np.linalg.lstsq(G, b, rcond=None)[0]
    R0 = [sum(y0[i] * A[i][k] for i in range(m)) for k in range(len(sizes))]
    lmin = min((np.linalg.eigvalsh(R).min() for R in R0 if R.size), default=0.0)
    L = 1.0 + 2.0 * max(0.0, -lmin)
    a = np.array([sum(np.trace(M) for M in mats) for mats in A])
    ktot = sum(sizes)
    Mbound = 10.0 * (sum(np.trace(R) for R in R0 if R.size) + L * ktot) + ktot
    report = SolveReport("solver_limit")
    for attempt in range(4):
        # blocks: S_T..., [mu], [w], [u]
        nb = len(sizes)
        C = [np.zeros((s, s)) for s in sizes] + [np.array([[-1.0]]), np.zeros((1, 1)), np.zeros((1, 1))]
        cons = []
        rhs = []
        for i in range(m):
            cons.append([A[i][k] for k in range(nb)] + [np.array([[a[i]]]), np.zeros((1, 1)), np.zeros((1, 1))])
            rhs.append(b[i] + L * a[i])
        cons.append([np.eye(s) for s in sizes] + [np.zeros((1, 1)), np.zeros((1, 1)), np.array([[1.0]])])
        rhs.append(Mbound)
        cons.append([np.zeros((s, s)) for s in sizes] + [np.array([[1.0]]), np.array([[1.0]]), np.zeros((1, 1))])
        rhs.append(L + 1.0)
        res = solve_sdp(C, cons, np.array(rhs), tol=tol, max_iter=max_iter)
        lam = float(res.X[nb][0, 0]) - L
        u = float(res.X[nb + 2][0, 0])
        log.append(
            f"ipm attempt {attempt}: status={res.status} iters={res.iterations} lambda*={lam:.3e} "
            f"trace slack={u:.3e} bound={Mbound:.3e}"
        )
        report = SolveReport(
            "solver_limit", lam, u, res.primal_residual, res.dual_residual, res.iterations, False, log
        )
        if res.status != "optimal":
            if max(res.primal_residual, res.dual_residual, res.gap) < 1e-6:
                log.append("accepting near-optimal iterate")
            elif u < 1e-6 * Mbound:
                # stalled against the trace bound
                Mbound *= 100.0
                continue
            else:
                return _scatter(list(res.X[:nb]), active, all_sizes), report
        R = _scatter([res.X[k] + lam * np.eye(sizes[k]) for k in range(nb)], active, all_sizes)
        rscale = 1.0 + max((np.abs(x).max() for x in R if x.size), default=0.0)
        bound_active = u < 1e-6 * Mbound
        if lam > margin * rscale:
            report.status, report.strict = "numerically_feasible_only", True
            return R, report
        if bound_active:
            Mbound *= 100.0
            continue
        if lam < -margin * rscale:
            report.status = "infeasible_at_degree"
        else:
            report.status = "numerically_feasible_only"
        return R, report
    log.append("trace bound still active after enlargement")
    report.status = "solver_limit"
    return R, report


def solve_internal(problem: FlagSosProblem, tol: float = 1e-8, facial: bool = True, max_iter: int = 100):
    """Returns (reduction or None, numeric reduced blocks, SolveReport)."""
    red, log, verdict = reduce_problem(problem, facial)
    if verdict is not None:
        return None, [], SolveReport(verdict, log=log)
    R, report = solve_reduced(red, tol=tol, max_iter=max_iter)
    report.log = log + report.log
    return red, R, report
