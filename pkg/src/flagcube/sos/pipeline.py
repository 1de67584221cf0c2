"""assemble -> solve -> rationalize -> verify."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from flagcube.qpoly import SquareFreePolynomial
from flagcube.sos.assemble import FlagSosProblem, assemble
from flagcube.sos.certificate import FlagSosCertificate, VerifyResult, verify_certificate
from flagcube.sos.ideal import IdealSpec
from flagcube.sos.rationalize import DENOMINATOR_BOUND, RationalizeFailure, rationalize
from flagcube.sos.solve import SolveReport, reduce_problem, solve_internal


@dataclass
class CertifyResult:
    problem: FlagSosProblem | None
    certificate: FlagSosCertificate | None
    report: SolveReport
    verification: VerifyResult | None = None

    @property
    def status(self) -> str:
        return self.report.status


def finish(problem: FlagSosProblem, numeric, reduction, report: SolveReport, denominator_bound: int) -> CertifyResult:
    """Rationalize a numeric solution and stamp "certified" only after exact verification."""
    cert = rationalize(numeric, problem, reduction, denominator_bound)
    if isinstance(cert, RationalizeFailure):
        report.log += cert.log + [f"rationalization failed: {cert.reason}"]
        return CertifyResult(problem, None, report)
    report.log += ["rationalization succeeded"]
    ver = verify_certificate(cert, problem.target, problem.ideal)
    report.log.append(f"verification: {ver.summary()}")
    if ver.ok:
        report.status = "certified"
        return CertifyResult(problem, cert, report, ver)
    return CertifyResult(problem, None, report, ver)


def certify(
    target: SquareFreePolynomial,
    d: int,
    ideal: IdealSpec,
    variant: str = "d",
    tol: float = 1e-8,
    denominator_bound: int = DENOMINATOR_BOUND,
    flag_size: int | None = None,
    facial: bool = True,
    max_edges: int | None = None,
) -> CertifyResult:
    problem = assemble(target, d, ideal, variant, flag_size=flag_size, max_edges=max_edges)
    red, numeric, report = solve_internal(problem, tol=tol, facial=facial)
    report.log = problem.log + report.log
    if report.status != "numerically_feasible_only":
        return CertifyResult(problem, None, report)
    return finish(problem, numeric, red, report, denominator_bound)


def to_reduced(reduction, blocks) -> list[np.ndarray]:
    """Least-squares coordinates R' with P R' P^T closest to R, block by block."""
    out = []
    for P, R in zip(reduction.P, blocks):
        Pf = np.array([[float(v) for v in row] for row in P], dtype=float).reshape(len(P), len(P[0]) if P else 0)
        if Pf.shape[1] == 0:
            out.append(np.zeros((0, 0)))
            continue
        Q = np.linalg.pinv(Pf)
        out.append(Q @ np.asarray(R, dtype=float) @ Q.T)
    return out


def certify_numeric(
    problem: FlagSosProblem,
    blocks,
    denominator_bound: int = DENOMINATOR_BOUND,
    facial: bool = True,
) -> CertifyResult:
    """Finish from numeric blocks in assembled coordinates, e.g. read from an SDPA .result file."""
    red, log, verdict = reduce_problem(problem, facial)
    report = SolveReport(verdict or "numerically_feasible_only", log=problem.log + log + ["numeric blocks supplied externally"])
    if verdict is not None:
        return CertifyResult(problem, None, report)
    return finish(problem, to_reduced(red, blocks), red, report, denominator_bound)
