"""Small dense primal-dual interior-point method for block-diagonal SDPs.

Solves   min <C, X>  s.t.  <A_i, X> = b_i,  X psd (block diagonal)
with the HKM search direction and a Mehrotra predictor-corrector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class IPMResult:
    X: list[np.ndarray]
    y: np.ndarray
    Z: list[np.ndarray]
    status: str  # "optimal" | "max_iter" | "numerical"
    iterations: int
    primal_residual: float
    dual_residual: float
    gap: float


def _inner(A: list[np.ndarray], B: list[np.ndarray]) -> float:
    return float(sum(np.vdot(a, b) for a, b in zip(A, B)))


def _max_step(X: np.ndarray, dX: np.ndarray) -> float:
    """Largest alpha with X + alpha dX psd (capped at 1e6); X positive definite."""
    if X.shape[0] == 0:
        return 1e6
    w, V = np.linalg.eigh(X)
    if w.min() <= 0:
        return 0.0
    S = V @ np.diag(w ** -0.5) @ V.T
    M = S @ dX @ S
    lam = np.linalg.eigvalsh((M + M.T) / 2).min()
    if lam >= 0:
        return 1e6
    return -1.0 / lam


def solve_sdp(
    C: list[np.ndarray],
    A: list[list[np.ndarray]],
    b: np.ndarray,
    tol: float = 1e-8,
    max_iter: int = 100,
) -> IPMResult:
    """``A[i][k]`` is the block-k part of constraint matrix i."""
    m = len(A)
    sizes = [c.shape[0] for c in C]
    b = np.asarray(b, dtype=float)
    # scaled starting point (as in SDPT3): X large enough for b, Z for A and C
    N = max(sum(sizes), 1)
    anorm = [np.sqrt(sum(np.sum(M * M) for M in Ai)) for Ai in A]
    xi = max(10.0, np.sqrt(N), max((N * (1 + abs(bi)) / (1 + an) for bi, an in zip(b, anorm)), default=0.0))
    eta = max(10.0, np.sqrt(N), max(anorm, default=0.0), np.sqrt(sum(np.sum(c * c) for c in C)))
    X = [xi * np.eye(s) for s in sizes]
    Z = [eta * np.eye(s) for s in sizes]
    y = np.zeros(m)
    nN = max(sum(sizes), 1)
    bnorm = 1 + np.linalg.norm(b)
    cnorm = 1 + np.sqrt(sum(np.sum(c * c) for c in C))

    def A_op(Xs):
        return np.array([_inner(Ai, Xs) for Ai in A]) if m else np.zeros(0)

    def At_op(v):
        out = [np.zeros((s, s)) for s in sizes]
        for i in range(m):
            if v[i]:
                for k in range(len(sizes)):
                    out[k] += v[i] * A[i][k]
        return out

    status = "max_iter"
    it = 0
    rp_n = rd_n = gap = float("inf")
    for it in range(1, max_iter + 1):
        rp = b - A_op(X)
        AtY = At_op(y)
        Rd = [C[k] - Z[k] - AtY[k] for k in range(len(sizes))]
        mu = _inner(X, Z) / nN
        rp_n = float(np.linalg.norm(rp)) / bnorm
        rd_n = float(np.sqrt(sum(np.sum(r * r) for r in Rd))) / cnorm
        pobj, dobj = _inner(C, X), float(b @ y)
        # complementarity gap; equals pobj - dobj up to residual terms
        gap = _inner(X, Z) / (1 + abs(pobj) + abs(dobj))
        if rp_n < tol and rd_n < tol and gap < tol:
            status = "optimal"
            break
        try:
            Zi = [np.linalg.inv(z) for z in Z]
            Zi = [(z + z.T) / 2 for z in Zi]
            # Schur complement M_ij = tr(A_i X A_j Z^-1), formed as a Gram matrix
            Lx = [np.linalg.cholesky(x) for x in X]
            Lz = [np.linalg.cholesky(z) for z in Zi]
            Bm = np.array(
                [np.concatenate([(Lx[k].T @ A[i][k] @ Lz[k]).ravel() for k in range(len(sizes))]) for i in range(m)]
            ).reshape(m, -1)
            M = Bm @ Bm.T
            M += 1e-14 * np.eye(m) * max(1.0, float(np.abs(M).max()) if m else 1.0)
            cf = np.linalg.cholesky(M) if m else None
        except np.linalg.LinAlgError:
            status = "numerical"
            break

        def direction(sig_mu, corr):
            # dX = sig_mu Z^-1 - X - sym(X dZ Z^-1) - corr ; dZ = Rd - A^T dy
            def complete(dy):
                AtD = At_op(dy)
                dZ = [Rd[k] - AtD[k] for k in range(len(sizes))]
                dX = []
                for k in range(len(sizes)):
                    t = X[k] @ dZ[k] @ Zi[k]
                    d = sig_mu * Zi[k] - X[k] - (t + t.T) / 2 - corr[k]
                    dX.append((d + d.T) / 2)
                return dX, dZ

            if not m:
                dX, dZ = complete(np.zeros(0))
                return dX, np.zeros(0), dZ
            dy = np.zeros(m)
            err = rp.copy()
            base, _ = complete(dy)
            err = rp - A_op(base)
            # the Schur system is ill-conditioned near the boundary; refine
            for _ in range(3):
                dy = dy + np.linalg.solve(cf.T, np.linalg.solve(cf, err))
                dX, dZ = complete(dy)
                err = rp - A_op(dX)
                if np.linalg.norm(err) <= 1e-14 * bnorm:
                    break
            return dX, dy, dZ

        zero = [np.zeros((s, s)) for s in sizes]
        dXa, dya, dZa = direction(0.0, zero)
        ap = min(1.0, min((_max_step(X[k], dXa[k]) for k in range(len(sizes))), default=1.0))
        ad = min(1.0, min((_max_step(Z[k], dZa[k]) for k in range(len(sizes))), default=1.0))
        mu_aff = _inner([X[k] + ap * dXa[k] for k in range(len(sizes))], [Z[k] + ad * dZa[k] for k in range(len(sizes))]) / nN
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0
        corr = []
        for k in range(len(sizes)):
            t = dXa[k] @ dZa[k] @ Zi[k]
            corr.append((t + t.T) / 2)
        dX, dy, dZ = direction(sigma * mu, corr)
        ap = min(1.0, 0.95 * min((_max_step(X[k], dX[k]) for k in range(len(sizes))), default=1e6))
        ad = min(1.0, 0.95 * min((_max_step(Z[k], dZ[k]) for k in range(len(sizes))), default=1e6))
        if ap < 1e-12 and ad < 1e-12:
            status = "numerical"
            break
        X = [X[k] + ap * dX[k] for k in range(len(sizes))]
        Z = [Z[k] + ad * dZ[k] for k in range(len(sizes))]
        y = y + ad * dy
        X = [(x + x.T) / 2 for x in X]
        Z = [(z + z.T) / 2 for z in Z]
    return IPMResult(X, y, Z, status, it, rp_n, rd_n, gap)
