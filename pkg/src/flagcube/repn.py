"""Symmetric-group characters and isotypic data of R[V_n]_{<=d} at small n."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial, prod
from typing import Sequence

from flagcube.exact import rank, row_space_basis
from flagcube.qpoly import SquareFreePolynomial, edge_list, monomial_key, permute_mask, symmetrize_subgroup
from flagcube.shapes import Partition, Tableau, enumerate_lambda, hook_length_dimension, partitions, row_group

MAX_N = 7
MAX_D = 2


def _beta(parts: Sequence[int], length: int) -> tuple[int, ...]:
    parts = list(parts) + [0] * (length - len(parts))
    return tuple(parts[i] + length - 1 - i for i in range(length))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        if b - k >= 0 and b - k not in beads:
            between = sum(1 for c in beta if b - k < c < b)
            new = tuple(sorted((beads - {b}) | {b - k}, reverse=True))
            total += (-1) ** between * _mn(new, rest)
    return total


def char_value(lam: Partition, mu: Partition | Sequence[int]) -> int:
    """chi_lambda at cycle type mu (Murnaghan-Nakayama, rim hooks on the abacus)."""
    mu = mu.parts if isinstance(mu, Partition) else tuple(sorted(mu, reverse=True))
    if sum(mu) != lam.n:
        raise ValueError(f"|lambda| = {lam.n} but |mu| = {sum(mu)}")
    return _mn(_beta(lam.parts, len(lam.parts)), tuple(mu))


def dim_irrep(lam: Partition) -> int:
    return hook_length_dimension(lam)


def centralizer_order(mu: Partition) -> int:
    counts: dict[int, int] = {}
    for p in mu.parts:
        counts[p] = counts.get(p, 0) + 1
    return prod(k**m * factorial(m) for k, m in counts.items())


def class_size(mu: Partition) -> int:
    return factorial(mu.n) // centralizer_order(mu)


def cycle_type(sigma: Sequence[int]) -> Partition:
    n = len(sigma)
    seen = [False] * (n + 1)
    lens = []
    for i in range(1, n + 1):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = sigma[j - 1]
                k += 1
            lens.append(k)
    return Partition(tuple(sorted(lens, reverse=True)))


def monomial_basis(n: int, d: int) -> list[int]:
    """Square-free monomials of degree <= d as masks, canonical order."""
    ne = len(edge_list(n))
    out = []
    for k in range(d + 1):
        for combo in combinations(range(ne), k):
            out.append(sum(1 << b for b in combo))
    return sorted(out, key=monomial_key)


def _check_caps(n: int, d: int) -> None:
    if n > MAX_N or d > MAX_D:
        raise ValueError(f"isotypic computations are capped at n <= {MAX_N}, d <= {MAX_D}")


@lru_cache(maxsize=None)
def _class_sums(n: int, d: int) -> dict[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Integer matrices sum_{sigma in class} sigma on the degree <= d monomial basis."""
    basis = monomial_basis(n, d)
    pos = {m: k for k, m in enumerate(basis)}
    size = len(basis)
    mats: dict[tuple[int, ...], list[list[int]]] = {}
    for sigma in permutations(range(1, n + 1)):
        mu = cycle_type(sigma).parts
        M = mats.setdefault(mu, [[0] * size for _ in range(size)])
        for c, m in enumerate(basis):
            M[pos[permute_mask(sigma, m)]][c] += 1
    return {mu: tuple(tuple(r) for r in M) for mu, M in mats.items()}


def isotypic_projection(lam: Partition, n: int, d: int) -> list[list[Fraction]]:
    """pi_lambda = (n_lambda / n!) sum_mu chi_lambda(mu) C_mu in the monomial basis."""
    _check_caps(n, d)
    if lam.n != n:
        raise ValueError("partition size differs from n")
    sums = _class_sums(n, d)
    size = len(monomial_basis(n, d))
    acc = [[0] * size for _ in range(size)]
    for mu, M in sums.items():
        chi = char_value(lam, mu)
        if chi:
            for i in range(size):
                Mi, Ai = M[i], acc[i]
                for j in range(size):
                    if Mi[j]:
                        Ai[j] += chi * Mi[j]
    scale = Fraction(dim_irrep(lam), factorial(n))
    return [[scale * v for v in row] for row in acc]


def poly_to_vector(p: SquareFreePolynomial, basis: Sequence[int]) -> list[Fraction]:
    pos = {m: k for k, m in enumerate(basis)}
    v = [Fraction(0)] * len(basis)
    for m, c in p.mask_terms.items():
        if m not in pos:
            raise ValueError("polynomial has terms outside the basis")
        v[pos[m]] = c
    return v


def vector_to_poly(n: int, v: Sequence[Fraction], basis: Sequence[int]) -> SquareFreePolynomial:
    return SquareFreePolynomial(n, {m: c for m, c in zip(basis, v) if c})


def row_average_matrix(tau: Tableau, d: int) -> list[list[Fraction]]:
    n = tau.n
    basis = monomial_basis(n, d)
    gens, size = row_group(tau)
    cols = [poly_to_vector(symmetrize_subgroup(SquareFreePolynomial(n, {m: 1}), gens, size), basis) for m in basis]
    return [list(r) for r in zip(*cols)]


def compute_W(tau: Tableau, d: int) -> list[SquareFreePolynomial]:
    """Basis of W_{tau lambda}: the image of row-group averaging after pi_lambda."""
    n = tau.n
    _check_caps(n, d)
    basis = monomial_basis(n, d)
    P = isotypic_projection(tau.shape, n, d)
    R = row_average_matrix(tau, d)
    # columns of R P span the image; rows of (R P)^T = P^T R^T
    Rt = list(zip(*R))
    RPt = [[sum((P[k][j] * Rt[k][i] for k in range(len(basis)) if P[k][j]), Fraction(0)) for i in range(len(basis))] for j in range(len(basis))]
    return [vector_to_poly(n, row, basis) for row in row_space_basis(RPt)]


def first_tableau(lam: Partition) -> Tableau:
    """Row-reading standard tableau: row 1 holds 1..lambda_1, and so on."""
    rows, k = [], 1
    for r in lam.parts:
        rows.append(tuple(range(k, k + r)))
        k += r
    return Tableau(tuple(rows))


@dataclass
class IsotypicReport:
    n: int
    d: int
    rows: list[dict] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(r["m_lambda"] * r["n_lambda"] for r in self.rows)

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "d": self.d,
            "dimension": sum(comb(comb(self.n, 2), i) for i in range(self.d + 1)),
            "sum_m_n": self.total,
            "partitions": self.rows,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def isotypic_report(n: int, d: int, all_partitions: bool = True) -> IsotypicReport:
    _check_caps(n, d)
    lams = list(partitions(n)) if all_partitions else enumerate_lambda(n, d)
    rep = IsotypicReport(n, d)
    for lam in lams:
        tau = first_tableau(lam)
        W = compute_W(tau, d)
        rep.rows.append(
            {
                "lambda": str(lam),
                "n_lambda": dim_irrep(lam),
                "m_lambda": len(W),
                "tableau": [list(r) for r in tau.rows],
                "basis": [str(p) for p in W],
            }
        )
    return rep


def multiplicity_by_trace(lam: Partition, n: int, d: int) -> int:
    """m_lambda from the rank of pi_lambda divided by n_lambda (independent route)."""
    r = rank(isotypic_projection(lam, n, d))
    q, rem = divmod(r, dim_irrep(lam))
    if rem:
        raise ArithmeticError("isotypic rank is not a multiple of the irrep dimension")
    return q


def dominates(lam: Partition, mu: Partition) -> bool:
    a = b = 0
    for k in range(max(len(lam), len(mu))):
        a += lam.parts[k] if k < len(lam) else 0
        b += mu.parts[k] if k < len(mu) else 0
        if a < b:
            return False
    return True
