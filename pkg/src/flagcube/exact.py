"""Exact rational linear algebra: row reduction, rank, span membership, pivoted LDL^T."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fractions(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in r] for r in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = to_fractions(rows)
    if not a:
        return a, []
    m, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                ri = a[i]
                rr = a[r]
                a[i] = [x - f * y for x, y in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def row_space_basis(rows: Sequence[Sequence]) -> Matrix:
    return rref(rows)[0]


def in_span(vector: Sequence, rows: Sequence[Sequence]) -> bool:
    return rank(list(rows) + [vector]) == rank(rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*a)]


@dataclass(frozen=True)
class LDL:
    """P A P^T = L D L^T with unit lower-triangular L; perm[i] is the row of A placed at i."""

    perm: tuple[int, ...]
    L: tuple[tuple[Fraction, ...], ...]
    D: tuple[Fraction, ...]

    def reconstruct(self) -> Matrix:
        k = len(self.D)
        out = [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            LD = [self.L[i][r] * self.D[r] for r in range(i + 1)]
            for j in range(i + 1):
                v = sum((LD[r] * self.L[j][r] for r in range(j + 1) if LD[r] and self.L[j][r]), Fraction(0))
                out[self.perm[i]][self.perm[j]] = v
                out[self.perm[j]][self.perm[i]] = v
        return out


@dataclass(frozen=True)
class NotPSD:
    """Witness v with v^T A v = value < 0."""

    vector: tuple[Fraction, ...]
    value: Fraction


def _ldl_fractions(A: Sequence[Sequence]) -> LDL | NotPSD:
    """Symmetric pivoted LDL^T over Q: a factorization with D >= 0, or a negativity witness.

    Pivots on the largest remaining diagonal entry of the Schur complement
    (lowest index on ties). A zero pivot is accepted only when its whole
    remaining column vanishes.
    """
    a = to_fractions(A)
    k = len(a)
    for i in range(k):
        if len(a[i]) != k:
            raise ValueError("matrix is not square")
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    w = [row[:] for row in a]
    active = list(range(k))
    perm: list[int] = []
    D: list[Fraction] = []
    cols: dict[int, list[Fraction]] = {i: [] for i in range(k)}
    for _ in range(k):
        p = max(active, key=lambda i: (w[i][i], -i))
        d = w[p][p]
        if d < 0 or (d == 0 and any(w[i][p] for i in active if i != p)):
            return _witness(a, perm, w, active)
        active.remove(p)
        perm.append(p)
        D.append(d)
        cols[p].append(Fraction(1))
        if d == 0:
            for i in active:
                cols[i].append(Fraction(0))
            continue
        col = {i: w[i][p] / d for i in active}
        for i in active:
            cols[i].append(col[i])
        for i in active:
            ci = col[i]
            if ci:
                wi = w[i]
                s = ci * d
                for j in active:
                    if col[j]:
                        wi[j] -= s * col[j]
    L = tuple(tuple(cols[p] + [Fraction(0)] * (k - len(cols[p]))) for p in perm)
    return LDL(tuple(perm), L, tuple(D))


def _common_denominator(values) -> int:
    d = 1
    for v in values:
        q = v.denominator
        if d % q:
            d = d * q // gcd(d, q)
    return d


def ldl_psd(A: Sequence[Sequence]) -> LDL | NotPSD:
    """Symmetric pivoted LDL^T over Q: a factorization with D >= 0, or a negativity witness.

    Pivots on the largest remaining diagonal entry of the Schur complement
    (lowest index on ties). A zero pivot is accepted only when its whole
    remaining column vanishes. Runs fraction-free on integers (Bareiss) and
    falls back to plain rational elimination to build a witness.
    """
    a = to_fractions(A)
    k = len(a)
    for i in range(k):
        if len(a[i]) != k:
            raise ValueError("matrix is not square")
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    den = _common_denominator(v for row in a for v in row)
    w = [[int(v * den) for v in row] for row in a]
    active = list(range(k))
    perm: list[int] = []
    pivots: list[int] = []  # integer pivot values a^(s-1)_pp
    cols: dict[int, list[Fraction]] = {i: [] for i in range(k)}
    prev = 1
    while active:
        p = max(active, key=lambda i: (w[i][i], -i))
        d = w[p][p]
        if d < 0 or (d == 0 and any(w[i][p] for i in active if i != p)):
            return _ldl_fractions(a)
        active.remove(p)
        perm.append(p)
        if d == 0:
            # whole remaining matrix vanishes on this column; D entry zero
            pivots.append(0)
            cols[p].append(Fraction(1))
            for i in active:
                cols[i].append(Fraction(0))
            continue
        pivots.append(d * 1)
        cols[p].append(Fraction(1))
        for i in active:
            cols[i].append(Fraction(w[i][p], d))
        wp = w[p]
        for i in active:
            wi = w[i]
            wip = wi[p]
            for j in active:
                if j < i:
                    continue
                v = (d * wi[j] - wip * wp[j]) // prev
                wi[j] = v
                w[j][i] = v
        prev = d
    # D_s = pivot_s / (den * previous nonzero pivot)
    D = []
    last = 1
    for pv in pivots:
        if pv == 0:
            D.append(Fraction(0))
        else:
            D.append(Fraction(pv, den * last))
            last = pv
    L = tuple(tuple(cols[p] + [Fraction(0)] * (k - len(cols[p]))) for p in perm)
    return LDL(tuple(perm), L, tuple(D))


def quadratic_form(a: Sequence[Sequence], v: Sequence) -> Fraction:
    n = len(v)
    return sum((Fraction(v[i]) * a[i][j] * v[j] for i in range(n) if v[i] for j in range(n) if v[j]), Fraction(0))


def _simple_witness(a: Matrix) -> tuple[Fraction, ...] | None:
    k = len(a)
    for i in range(k):
        if a[i][i] < 0:
            return tuple(Fraction(int(r == i)) for r in range(k))
    for i in range(k):
        for j in range(i + 1, k):
            for s in (-1, 1):
                if a[i][i] + a[j][j] + 2 * s * a[i][j] < 0:
                    return tuple(Fraction(1 if r == i else (s if r == j else 0)) for r in range(k))
    return None


def _witness(a: Matrix, done: list[int], w: Matrix, active: list[int]) -> NotPSD:
    v = _simple_witness(a)
    if v is None:
        p = min(active, key=lambda i: (w[i][i], i))
        if w[p][p] < 0:
            tail = {p: Fraction(1)}
        else:
            z, i = next((z, i) for z in active if w[z][z] == 0 for i in active if i != z and w[i][z])
            tail = {z: -(w[i][i] + 1) / (2 * w[z][i]), i: Fraction(1)}
        v = _extend(a, done, tail)
    return NotPSD(v, quadratic_form(a, v))


def _extend(a: Matrix, done: list[int], tail: dict[int, Fraction]) -> tuple[Fraction, ...]:
    """Fill pivoted coordinates x = -A_dd^+ A_dt y so that v^T A v equals the Schur value."""
    k = len(a)
    v = [Fraction(0)] * k
    for i, c in tail.items():
        v[i] = c
    if done:
        rhs = [-sum((a[r][i] * c for i, c in tail.items()), Fraction(0)) for r in done]
        aug = [[a[r][c] for c in done] + [rhs[x]] for x, r in enumerate(done)]
        red, piv = rref(aug)
        for row, c in zip(red, piv):
            if c < len(done):
                v[done[c]] = row[-1]
    return tuple(v)


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis (as rows) of {x : rows x = 0}."""
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def independent_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    keep = []
    for idx, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for c, b in basis:
            if v[c]:
                f = v[c] / b[c]
                v = [x - f * y for x, y in zip(v, b)]
        c = next((i for i, x in enumerate(v) if x), None)
        if c is not None:
            basis.append((c, v))
            keep.append(idx)
    return keep


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of a x = b, or None if inconsistent."""
    if not a:
        return []
    ncols = len(a[0])
    red, piv = rref([list(r) + [bv] for r, bv in zip(a, b)])
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(red, piv):
        x[c] = row[-1]
    return x
