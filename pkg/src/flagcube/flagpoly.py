"""Flag polynomials g_F^Theta and d_F^Theta, the expectation operator, and identity checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterable, Iterator, Literal, Sequence

from flagcube.flags import Flag, FlagPoset, all_types, enumerate_flags, flag_poset, mobius_coefficients
from flagcube.qpoly import (
    SquareFreePolynomial,
    edge_index,
    edge_list,
    mask_orbit,
    symmetrize_full,
    symmetrize_subgroup,
)
from flagcube.shapes import ThetaLabeling, Tableau, hook_of, hook_tableau, identity_theta, row_group, theta_of

Kind = Literal["g", "d"]


@dataclass(frozen=True)
class FlagPolynomial:
    flag: Flag
    theta: ThetaLabeling
    n: int
    poly: SquareFreePolynomial
    kind: str

    def __str__(self) -> str:
        return f"# {self.kind} {self.flag.to_json()} theta={list(self.theta.images)}\n{self.poly}"


def _check(F: Flag, theta: ThetaLabeling, n: int) -> None:
    if F.f > n:
        raise ValueError(f"flag size {F.f} exceeds n={n}")
    if theta.t != F.t:
        raise ValueError(f"theta has length {theta.t}, type has {F.t} vertices")
    if theta.n != n:
        raise ValueError("theta is defined on a different ground set")


def injections(F: Flag, theta: ThetaLabeling, n: int) -> Iterator[tuple[int, ...]]:
    """Inj_Theta(V(F), [n]): h[i-1] = h(i), labeled vertices fixed by Theta."""
    used = set(theta.images)
    free = [v for v in range(1, n + 1) if v not in used]
    for tail in permutations(free, F.f - F.t):
        yield theta.images + tail


def _pair_bit(idx: dict, h: Sequence[int], i: int, j: int) -> int:
    a, b = h[i - 1], h[j - 1]
    return 1 << idx[(a, b) if a < b else (b, a)]


def _g_from_edges(edges: Iterable[tuple[int, int]], F: Flag, theta: ThetaLabeling, n: int) -> SquareFreePolynomial:
    idx = edge_index(n)
    acc: dict[int, int] = {}
    edges = tuple(edges)
    for h in injections(F, theta, n):
        m = 0
        for i, j in edges:
            m |= _pair_bit(idx, h, i, j)
        acc[m] = acc.get(m, 0) + 1
    return SquareFreePolynomial(n, acc)


def g_poly(F: Flag, theta: ThetaLabeling, n: int) -> FlagPolynomial:
    _check(F, theta, n)
    return FlagPolynomial(F, theta, n, _g_from_edges(F.edges, F, theta, n), "g")


def d_poly_product(F: Flag, theta: ThetaLabeling, n: int) -> SquareFreePolynomial:
    """Sum over h of prod_{E(F)} x * prod_{non-edges} (1 - x), expanded."""
    _check(F, theta, n)
    idx = edge_index(n)
    acc: dict[int, int] = {}
    non = F.non_edges
    for h in injections(F, theta, n):
        base = 0
        for i, j in F.edges:
            base |= _pair_bit(idx, h, i, j)
        bits = [_pair_bit(idx, h, i, j) for i, j in non]
        for k in range(len(bits) + 1):
            sign = -1 if k % 2 else 1
            for sub in combinations(bits, k):
                m = base
                for b in sub:
                    m |= b
                acc[m] = acc.get(m, 0) + sign
    return SquareFreePolynomial(n, acc)


def d_poly_mobius(F: Flag, theta: ThetaLabeling, n: int, poset: FlagPoset | None = None) -> SquareFreePolynomial:
    """Sum over F' above F in the poset of (-1)^{|E(F')|-|E(F)|} g_{F'}."""
    _check(F, theta, n)
    P = poset if poset is not None else flag_poset(F.type, F.f)
    out = SquareFreePolynomial.zero(n)
    for edges, sign in mobius_coefficients(F, P).items():
        out = out + _g_from_edges(edges, F, theta, n).scale(sign)
    return out


def d_poly(F: Flag, theta: ThetaLabeling, n: int, route: str = "product") -> FlagPolynomial:
    if route == "product":
        p = d_poly_product(F, theta, n)
    elif route == "mobius":
        p = d_poly_mobius(F, theta, n)
    else:
        raise ValueError(f"unknown route {route!r}")
    return FlagPolynomial(F, theta, n, p, "d")


def flag_poly(F: Flag, theta: ThetaLabeling, n: int, kind: str) -> SquareFreePolynomial:
    if kind == "g":
        return g_poly(F, theta, n).poly
    if kind == "d":
        return d_poly(F, theta, n).poly
    raise ValueError(f"kind must be 'g' or 'd', got {kind!r}")


def g_from_d(F: Flag, theta: ThetaLabeling, n: int) -> SquareFreePolynomial:
    """Inverse transform: g_F is the sum of d_{F'} over all F' above F."""
    P = flag_poset(F.type, F.f)
    out = SquareFreePolynomial.zero(n)
    for edges in P.above(F.edges):
        G = _graph_as_flag(F, edges)
        out = out + d_poly_product(G, theta, n)
    return out


def _graph_as_flag(F: Flag, edges: Sequence[tuple[int, int]]) -> Flag:
    from flagcube.flags import IntersectionType

    t = F.t
    T = IntersectionType(t, tuple(p for p in edges if p[1] <= t))
    return Flag(T, F.f, tuple(edges))


def expectation_product(F: Flag, G: Flag, n: int, kind: str = "d") -> SquareFreePolynomial:
    """E_Theta[p_F p_G] = sym(p_F^{Theta0} p_G^{Theta0}) with Theta0(i) = i."""
    if F.type != G.type:
        raise ValueError("flags must share an intersection type")
    th = identity_theta(n, F.t)
    return symmetrize_full(flag_poly(F, th, n, kind) * flag_poly(G, th, n, kind))


def explicit_expectation(F: Flag, G: Flag, n: int, kind: str = "d") -> SquareFreePolynomial:
    """Direct average of p_F^Theta p_G^Theta over all Theta in Inj([t],[n])."""
    if F.type != G.type:
        raise ValueError("flags must share an intersection type")
    t = F.t
    total = SquareFreePolynomial.zero(n)
    count = 0
    for imgs in permutations(range(1, n + 1), t):
        th = ThetaLabeling(imgs, n)
        total = total + flag_poly(F, th, n, kind) * flag_poly(G, th, n, kind)
        count += 1
    return total / count


def witness_injection(F: Flag, theta: ThetaLabeling, n: int) -> tuple[int, ...]:
    """A fixed h*: unlabeled vertices go to the smallest free labels in order."""
    return next(injections(F, theta, n))


def hook_sym(monomial_mask: int, theta: ThetaLabeling, n: int) -> SquareFreePolynomial:
    gens, size = row_group(hook_tableau(n, theta))
    return symmetrize_subgroup(SquareFreePolynomial(n, {monomial_mask: 1}), gens, size)


def check_g_equals_scaled_hook_sym(F: Flag, theta: ThetaLabeling, n: int) -> bool:
    _check(F, theta, n)
    h = witness_injection(F, theta, n)
    idx = edge_index(n)
    m = 0
    for i, j in F.edges:
        m |= _pair_bit(idx, h, i, j)
    scale = Fraction(factorial(n - F.t), factorial(n - F.f))
    return g_poly(F, theta, n).poly == hook_sym(m, theta, n).scale(scale)


def isolated_vertex_factor(n: int, f: int, f2: int) -> int:
    return comb(n - f, f2 - f) * factorial(f2 - f)


def check_isolated_vertex_scaling(F: Flag, F2: Flag, theta: ThetaLabeling, n: int) -> bool:
    if F.edges != F2.edges or F.type != F2.type:
        raise ValueError("flags must have the same labeled type and edge set")
    if F2.f < F.f:
        raise ValueError("second flag must be at least as large")
    lhs = g_poly(F2, theta, n).poly
    return lhs == g_poly(F, theta, n).poly.scale(isolated_vertex_factor(n, F.f, F2.f))


def _monomial_orbit_reps(n: int, max_degree: int, gens) -> list[int]:
    """Orbit representatives of square-free monomials of degree <= max_degree."""
    nedges = len(edge_list(n))
    reps = []
    seen: set[int] = set()
    for k in range(max_degree + 1):
        for combo in combinations(range(nedges), k):
            m = 0
            for b in combo:
                m |= 1 << b
            if m in seen:
                continue
            seen |= mask_orbit(m, gens)
            reps.append(m)
    return reps


def covering_flag_size(n: int, t: int, d: int) -> int:
    """Flag size that also covers monomials avoiding some labeled vertices."""
    return min(n, t + 2 * d)


def spanning_set_for_W(
    tau: Tableau, d: int, kind: str = "g", flag_size: int | None = None
) -> list[SquareFreePolynomial]:
    """Spanning polynomials for W_tau at Theta = theta_of(tau).

    ``flag_size`` defaults to 2d. Monomials of degree d that miss a labeled
    vertex need up to t + 2d vertices; see :func:`covering_flag_size`.
    """
    n = tau.n
    lam1 = len(tau.rows[0]) if tau.rows else 0
    t = n - lam1
    if t > 2 * d:
        raise ValueError(f"lambda_1 = {lam1} < n - 2d = {n - 2 * d}")
    if kind in ("g", "d"):
        theta = theta_of(tau)
        out = []
        for T in all_types(t):
            for F in enumerate_flags(T, 2 * d if flag_size is None else flag_size):
                if F.f > n:
                    raise ValueError("flag size exceeds n")
                out.append(flag_poly(F, theta, n, kind))
        return out
    if kind == "hook_sym":
        hk = hook_of(tau)
        gens, size = row_group(hk)
        return [
            symmetrize_subgroup(SquareFreePolynomial(n, {m: 1}), gens, size)
            for m in _monomial_orbit_reps(n, d, gens)
        ]
    raise ValueError(f"unknown kind {kind!r}")


def flags_for_types(t: int, f: int) -> list[Flag]:
    return [F for T in all_types(t) for F in enumerate_flags(T, f)]
