"""Ideals of the form I_n + <S_n-orbits of extra generators> and their varieties."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Sequence

from flagcube.qpoly import (
    SquareFreePolynomial,
    adjacent_transpositions,
    apply_permutation,
    edge_list,
    format_poly,
    parse_poly,
    permute_mask,
)

VARIETY_BITS_CAP = 21


@dataclass(frozen=True)
class IdealSpec:
    n: int
    kind: str = "hypercube"
    generators: tuple[SquareFreePolynomial, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("hypercube", "hypercube_plus"):
            raise ValueError(f"unknown ideal kind {self.kind!r}")
        if self.kind == "hypercube" and self.generators:
            raise ValueError("the plain hypercube ideal takes no extra generators")
        if self.kind == "hypercube_plus" and not self.generators:
            raise ValueError("hypercube_plus needs at least one generator family")
        for g in self.generators:
            if g.n != self.n:
                raise ValueError("generator lives on a different ground set")

    def closure(self) -> tuple[SquareFreePolynomial, ...]:
        return _closure(self)

    def is_monomial(self) -> bool:
        return all(len(g) == 1 for g in self.closure())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "name": self.name,
            "generators": [format_poly(g) for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IdealSpec":
        n = int(data["n"])
        gens = tuple(parse_poly(s, n) for s in data.get("generators", []))
        return cls(n, data.get("kind", "hypercube"), gens, data.get("name", ""))

    def swap_colors(self) -> "IdealSpec":
        """Image of the ideal under x -> 1 - x."""
        return IdealSpec(self.n, self.kind, tuple(color_swap(g) for g in self.generators), self.name)


def polynomial_orbit(p: SquareFreePolynomial) -> list[SquareFreePolynomial]:
    gens = adjacent_transpositions(p.n)
    seen = {p}
    order = [p]
    queue = deque([p])
    while queue:
        q = queue.popleft()
        for g in gens:
            r = apply_permutation(g, q)
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    return order


@lru_cache(maxsize=64)
def _closure(ideal: IdealSpec) -> tuple[SquareFreePolynomial, ...]:
    out: list[SquareFreePolynomial] = []
    seen: set[SquareFreePolynomial] = set()
    for g in ideal.generators:
        for q in polynomial_orbit(g):
            if q not in seen:
                seen.add(q)
                out.append(q)
    return tuple(out)


def color_swap(p: SquareFreePolynomial) -> SquareFreePolynomial:
    """Substitute x_e -> 1 - x_e for every edge."""
    n = p.n
    out = SquareFreePolynomial.zero(n)
    for m, c in p.mask_terms.items():
        term = SquareFreePolynomial.constant(n, c)
        k = 0
        mm = m
        while mm:
            if mm & 1:
                term = term * (SquareFreePolynomial.constant(n, 1) - SquareFreePolynomial(n, {1 << k: 1}))
            mm >>= 1
            k += 1
        out = out + term
    return out


# ---------------------------------------------------------------- presets


def hypercube(n: int) -> IdealSpec:
    return IdealSpec(n, "hypercube", (), "hypercube")


def c4free(n: int) -> IdealSpec:
    if n < 4:
        return hypercube(n)
    g = parse_poly("x{1,2}*x{2,3}*x{3,4}*x{1,4}", n)
    return IdealSpec(n, "hypercube_plus", (g,), "c4free")


def ramsey33(n: int = 6) -> IdealSpec:
    if n < 3:
        return hypercube(n)
    red = parse_poly("x{1,2}*x{1,3}*x{2,3}", n)
    blue = color_swap(red)
    return IdealSpec(n, "hypercube_plus", (red, blue), "ramsey33")


def parse_ideal(spec: str, n: int) -> IdealSpec:
    """``hypercube``, ``c4free``, ``ramsey33`` or ``file:<path>`` (one generator per line)."""
    if spec == "hypercube":
        return hypercube(n)
    if spec == "c4free":
        return c4free(n)
    if spec == "ramsey33":
        return ramsey33(n)
    if spec.startswith("file:"):
        with open(spec[5:], encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            return hypercube(n)
        return IdealSpec(n, "hypercube_plus", tuple(parse_poly(s, n) for s in lines), spec)
    raise ValueError(f"unknown ideal spec {spec!r}")


# ---------------------------------------------------------------- variety


@dataclass(frozen=True)
class Variety:
    """Zero set of the ideal inside V_n, with S_n-orbit classes."""

    n: int
    points: tuple[int, ...]
    class_of: dict = field(compare=False, hash=False, repr=False)
    reps: tuple[int, ...] = ()
    sizes: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.points)


def _integer_terms(g: SquareFreePolynomial) -> list[tuple[int, int]]:
    """Terms scaled to integer coefficients (same zero set)."""
    den = 1
    for c in g.mask_terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return [(m, int(c * den)) for m, c in g.mask_terms.items()]


def _eval_mask(terms: Sequence[tuple[int, Fraction]], g: int) -> Fraction:
    return sum((c for m, c in terms if m & g == m), Fraction(0))


@lru_cache(maxsize=32)
def variety(ideal: IdealSpec, cap: int = VARIETY_BITS_CAP) -> Variety:
    n = ideal.n
    ne = len(edge_list(n))
    if ne > cap:
        raise ValueError(f"variety enumeration needs C(n,2) = {ne} <= {cap}")
    monos_by_last: list[list[int]] = [[] for _ in range(max(ne, 1))]
    polys_by_last: list[list[list[tuple[int, int]]]] = [[] for _ in range(max(ne, 1))]
    constant_fail = False
    for g in ideal.closure():
        terms = _integer_terms(g)
        top = max((m.bit_length() - 1 for m, _ in terms), default=-1)
        if top < 0:
            constant_fail = constant_fail or bool(g.constant_term())
            continue
        if len(terms) == 1:
            monos_by_last[top].append(terms[0][0])
        else:
            polys_by_last[top].append(terms)
    points: list[int] = []
    if not constant_fail:
        stack = [(0, 0)]
        while stack:
            k, mask = stack.pop()
            if k == ne:
                points.append(mask)
                continue
            monos, polys = monos_by_last[k], polys_by_last[k]
            for bit in (1, 0):
                m2 = mask | (bit << k)
                if bit and any(m2 & g == g for g in monos):
                    continue
                if all(sum(c for m, c in t if m & m2 == m) == 0 for t in polys):
                    stack.append((k + 1, m2))
    points.sort()
    pset = set(points)
    gens = adjacent_transpositions(n)
    class_of: dict[int, int] = {}
    reps, sizes = [], []
    for p in points:
        if p in class_of:
            continue
        cid = len(reps)
        orbit = {p}
        queue = deque([p])
        while queue:
            q = queue.popleft()
            for g in gens:
                r = permute_mask(g, q)
                if r not in orbit:
                    if r not in pset:
                        raise AssertionError("variety is not S_n-invariant")
                    orbit.add(r)
                    queue.append(r)
        for q in orbit:
            class_of[q] = cid
        reps.append(min(orbit))
        sizes.append(len(orbit))
    return Variety(n, tuple(points), class_of, tuple(reps), tuple(sizes))


def brute_force_variety(ideal: IdealSpec) -> list[int]:
    """Every point of V_n checked against every closure generator (oracle)."""
    ne = len(edge_list(ideal.n))
    gens = [list(g.mask_terms.items()) for g in ideal.closure()]
    return [m for m in range(1 << ne) if all(_eval_mask(t, m) == 0 for t in gens)]


@dataclass(frozen=True)
class FunctionTable:
    """Values of a polynomial on the points of a variety (in variety order)."""

    ideal: IdealSpec
    values: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return not any(self.values)


def evaluate_mask(p: SquareFreePolynomial, g: int) -> Fraction:
    return _eval_mask(list(p.mask_terms.items()), g)


def reduce_mod_ideal(p: SquareFreePolynomial, ideal: IdealSpec) -> SquareFreePolynomial | FunctionTable:
    """Normal form for the hypercube ideal; a function table on the variety otherwise."""
    if p.n != ideal.n:
        raise ValueError("polynomial and ideal live on different ground sets")
    if ideal.kind == "hypercube":
        return p
    V = variety(ideal)
    terms = list(p.mask_terms.items())
    return FunctionTable(ideal, tuple(_eval_mask(terms, g) for g in V.points))


def class_values(p: SquareFreePolynomial, ideal: IdealSpec) -> tuple[Fraction, ...]:
    """Values at one representative per S_n-class of the variety (for invariant p)."""
    V = variety(ideal)
    terms = list(p.mask_terms.items())
    return tuple(_eval_mask(terms, g) for g in V.reps)


def equivalent_mod(p: SquareFreePolynomial, q: SquareFreePolynomial, ideal: IdealSpec) -> bool:
    r = reduce_mod_ideal(p - q, ideal)
    return r.is_zero()


def monomial_normal_form(p: SquareFreePolynomial, ideal: IdealSpec) -> SquareFreePolynomial:
    """Drop monomials divisible by a monomial generator; exact when all generators are monomials."""
    if ideal.kind == "hypercube":
        return p
    if not ideal.is_monomial():
        raise ValueError("monomial normal form needs monomial generators")
    gens = [next(iter(g.mask_terms)) for g in ideal.closure()]
    return SquareFreePolynomial(p.n, {m: c for m, c in p.mask_terms.items() if not any(m & g == g for g in gens)})


def variety_size_bound(n: int) -> int:
    return 1 << comb(n, 2)
