"""Executable reproductions of the worked examples, each checked against an independent oracle."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from flagcube.flagpoly import flag_poly
from flagcube.flags import Flag, IntersectionType
from flagcube.qpoly import SquareFreePolynomial, edge_list, edge_sum, mask_of, symmetrize_full
from flagcube.shapes import identity_theta
from flagcube.sos.certificate import FlagSosCertificate, certificate_polynomial, make_block, verify_certificate
from flagcube.sos.ideal import (
    IdealSpec,
    c4free,
    color_swap,
    evaluate_mask,
    hypercube,
    monomial_normal_form,
    ramsey33 as ramsey_ideal,
    variety,
)

# ---------------------------------------------------------------- results


@dataclass
class Claim:
    description: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"description": self.description, "pass": self.ok, "detail": self.detail}


@dataclass
class ReproResult:
    name: str
    claims: list[Claim] = field(default_factory=list)
    wall_time: float = 0.0
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.claims)

    def check(self, description: str, ok: bool, detail="") -> bool:
        self.claims.append(Claim(description, bool(ok), str(detail)))
        return bool(ok)

    def text(self) -> str:
        lines = [f"== {self.name}"]
        for c in self.claims:
            lines.append(f"[{'PASS' if c.ok else 'FAIL'}] {c.description}" + (f"  ({c.detail})" if c.detail else ""))
        for m in self.data.get("mismatches", []):
            lines.append(f"[MISMATCH] {m}")
        lines.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.ok,
            "claims": [c.to_dict() for c in self.claims],
            "data": self.data,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


# ---------------------------------------------------------------- small helpers


def x(n: int, i: int, j: int) -> SquareFreePolynomial:
    return SquareFreePolynomial.var(n, i, j)


def one(n: int) -> SquareFreePolynomial:
    return SquareFreePolynomial.constant(n, 1)


def star(n: int, v: int, skip=()) -> SquareFreePolynomial:
    """Sum of x_{v,i} over i != v (and i not in skip): the degree of v."""
    out = SquareFreePolynomial.zero(n)
    for i in range(1, n + 1):
        if i != v and i not in skip:
            out = out + x(n, v, i)
    return out


def product(polys, n: int) -> SquareFreePolynomial:
    out = one(n)
    for p in polys:
        out = out * p
    return out


def red_triangle(n: int, a: int, b: int, c: int) -> SquareFreePolynomial:
    return x(n, a, b) * x(n, a, c) * x(n, b, c)


def blue_triangle(n: int, a: int, b: int, c: int) -> SquareFreePolynomial:
    return product([one(n) - x(n, a, b), one(n) - x(n, a, c), one(n) - x(n, b, c)], n)


# ---------------------------------------------------------------- ideal membership


@dataclass
class Membership:
    """p = sum_k g_k h_k with every g_k a listed generator (identity mod x^2 - x)."""

    target: SquareFreePolynomial
    terms: list[tuple[str, SquareFreePolynomial, SquareFreePolynomial]]  # (label, generator, multiplier)

    def residue(self) -> SquareFreePolynomial:
        total = SquareFreePolynomial.zero(self.target.n)
        for _, g, h in self.terms:
            total = total + g * h
        return total - self.target

    def holds(self, generators: dict[str, SquareFreePolynomial]) -> bool:
        if any(generators.get(label) != g for label, g, _ in self.terms):
            return False
        return self.residue().is_zero()

    def times(self, m: SquareFreePolynomial) -> "Membership":
        return Membership(self.target * m, [(lab, g, h * m) for lab, g, h in self.terms])

    def swapped(self) -> "Membership":
        """Image under x -> 1 - x: red and blue generators trade places."""
        flip = {"R": "B", "B": "R"}
        return Membership(
            color_swap(self.target),
            [(flip[lab[0]] + lab[1:], color_swap(g), color_swap(h)) for lab, g, h in self.terms],
        )


def ramsey_generators(n: int) -> dict[str, SquareFreePolynomial]:
    out = {}
    for a, b, c in combinations(range(1, n + 1), 3):
        out[f"R{a}{b}{c}"] = red_triangle(n, a, b, c)
        out[f"B{a}{b}{c}"] = blue_triangle(n, a, b, c)
    return out


def _triangle_in(mask: int, n: int) -> tuple[int, int, int] | None:
    idx = {e: k for k, e in enumerate(edge_list(n))}
    for a, b, c in combinations(range(1, n + 1), 3):
        m = (1 << idx[(a, b)]) | (1 << idx[(a, c)]) | (1 << idx[(b, c)])
        if mask & m == m:
            return a, b, c
    return None


def _split_by_red_triangles(p: SquareFreePolynomial) -> list[tuple[str, SquareFreePolynomial, SquareFreePolynomial]] | None:
    """Write p as a combination of red-triangle monomials, or None if some monomial has no triangle."""
    n = p.n
    idx = {e: k for k, e in enumerate(edge_list(n))}
    groups: dict[tuple[int, int, int], dict[int, Fraction]] = {}
    for m, c in p.mask_terms.items():
        tri = _triangle_in(m, n)
        if tri is None:
            return None
        a, b, cc = tri
        tm = (1 << idx[(a, b)]) | (1 << idx[(a, cc)]) | (1 << idx[(b, cc)])
        groups.setdefault(tri, {})
        groups[tri][m & ~tm] = groups[tri].get(m & ~tm, Fraction(0)) + c
    return [(f"R{a}{b}{c}", red_triangle(n, a, b, c), SquareFreePolynomial(n, h)) for (a, b, c), h in sorted(groups.items())]


def red_claw_membership(n: int, i: int, j: int, k: int, l: int) -> Membership:
    """x_ij x_ik x_il = claw * blue(jkl) + (a combination of red triangles)."""
    claw = x(n, i, j) * x(n, i, k) * x(n, i, l)
    blue = blue_triangle(n, j, k, l)
    rest = _split_by_red_triangles(claw - claw * blue)
    if rest is None:
        raise AssertionError("claw remainder has a monomial without a red triangle")
    return Membership(claw, [(f"B{''.join(map(str, sorted((j, k, l))))}", blue, claw)] + rest)


def claw_consequence_membership(n: int, v: int = 1) -> Membership:
    """1 - S + e2 in I, where S, e2 are the elementary symmetric sums of x_{v,i}."""
    others = [i for i in range(1, n + 1) if i != v]
    xs = [x(n, v, i) for i in others]
    target = one(n) - sum(xs, SquareFreePolynomial.zero(n))
    for a, b in combinations(range(len(xs)), 2):
        target = target + xs[a] * xs[b]
    # prod (1 - x_vi) is the blue claw on the first three neighbours times the rest
    a, b, c = others[:3]
    blue = red_claw_membership(n, v, a, b, c).swapped()
    terms = list(blue.times(product([one(n) - xi for xi in xs[3:]], n)).terms)
    # prod (1 - x_vi) - target consists of monomials with >= 3 edges at v: red claws
    extra = product([one(n) - xi for xi in xs], n) - target
    for m, coef in sorted(extra.mask_terms.items()):
        at_v = [others[q] for q, xi in enumerate(xs) if next(iter(xi.mask_terms)) & m]
        if len(at_v) < 3:
            raise AssertionError("expansion left a monomial with fewer than three edges at v")
        p, q, r = at_v[:3]
        cm = red_claw_membership(n, v, p, q, r)
        claw_mask = next(iter(cm.target.mask_terms))
        mult = SquareFreePolynomial(n, {m & ~claw_mask: -coef})
        terms += cm.times(mult).terms
    return Membership(target, terms)


# ---------------------------------------------------------------- Ramsey R(3,3)

T0 = IntersectionType(0)
T1 = IntersectionType(1)
EDGE0 = Flag(T0, 2, ((1, 2),))
NONEDGE0 = Flag(T0, 2, ())
LEDGE = Flag(T1, 2, ((1, 2),))
LNONEDGE = Flag(T1, 2, ())


def ramsey_d_certificate(n: int = 6) -> FlagSosCertificate:
    w = Fraction(1, 8 * comb(n, 2) ** 2)
    blocks = (
        make_block(0, T0, (EDGE0, NONEDGE0), [[w, w], [w, w]]),
        make_block(1, T1, (LEDGE, LNONEDGE), [[Fraction(1, 2), Fraction(-1, 2)], [Fraction(-1, 2), Fraction(1, 2)]]),
    )
    return FlagSosCertificate(n, 1, "d", ramsey_ideal(n), blocks)


def ramsey_g_certificate(n: int = 6) -> FlagSosCertificate:
    """(sqrt2 a - b/sqrt2)^2 = 2a^2 - 2ab + b^2/2, so the Gram matrix is rational."""
    g0 = n * (n - 1)
    blocks = (
        make_block(0, T0, (NONEDGE0,), [[Fraction(1, 2 * g0 * g0)]]),
        make_block(1, T1, (LEDGE, LNONEDGE), [[2, -1], [-1, Fraction(1, 2)]]),
    )
    return FlagSosCertificate(n, 1, "g", ramsey_ideal(n), blocks)


def monochromatic_triangle_free(n: int) -> np.ndarray:
    """All 2-colourings of K_n (as masks) without a monochromatic triangle, by direct enumeration."""
    idx = {e: k for k, e in enumerate(edge_list(n))}
    masks = np.arange(1 << len(idx), dtype=np.int64)
    full = (1 << len(idx)) - 1
    ok = np.ones(len(masks), dtype=bool)
    for a, b, c in combinations(range(1, n + 1), 3):
        t = (1 << idx[(a, b)]) | (1 << idx[(a, c)]) | (1 << idx[(b, c)])
        ok &= (masks & t) != t
        ok &= ((full ^ masks) & t) != t
    return masks[ok]


def ramsey33() -> ReproResult:
    t0 = time.perf_counter()
    res = ReproResult("ramsey33")
    n = 6
    ideal = ramsey_ideal(n)
    m1 = one(n).scale(-1)

    # the variety really is empty, so identities "mod I" must be checked beyond evaluation
    free6 = monochromatic_triangle_free(6)
    res.check("no 2-colouring of K6 avoids monochromatic triangles (32768 checked)", len(free6) == 0, f"{len(free6)} survivors")
    res.check("variety enumerator agrees: Ramsey variety at n=6 is empty", len(variety(ideal)) == 0)
    free5 = monochromatic_triangle_free(5)
    cyc = mask_of(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    gens5 = ramsey_ideal(5).closure()
    res.check(
        "K5 witness: red 5-cycle with blue complement has no monochromatic triangle",
        cyc in set(free5.tolist()) and all(evaluate_mask(g, cyc) == 0 for g in gens5),
    )
    res.check("Ramsey variety at n=5 has 12 points (the labelled 5-cycles)", len(variety(ramsey_ideal(5))) == 12 == len(free5))

    # flag polynomial constants and closed forms
    th0, th1 = identity_theta(n, 0), identity_theta(n, 1)
    s = edge_sum(n)
    S = star(n, 1)
    res.check("d_edge = 2s and d_nonedge = 2(C(6,2) - s)", flag_poly(EDGE0, th0, n, "d") == s.scale(2)
              and flag_poly(NONEDGE0, th0, n, "d") == (one(n).scale(comb(n, 2)) - s).scale(2))
    res.check("d_{labelled edge} = sum_j x_1j and d_{labelled nonedge} = sum_j (1 - x_1j)",
              flag_poly(LEDGE, th1, n, "d") == S and flag_poly(LNONEDGE, th1, n, "d") == one(n).scale(n - 1) - S)
    g_ne, g_lne = flag_poly(NONEDGE0, th0, n, "g"), flag_poly(LNONEDGE, th1, n, "g")
    res.check("g_nonedge = 30 and g_{labelled nonedge} = 5", g_ne == SquareFreePolynomial.constant(n, 30)
              and g_lne == SquareFreePolynomial.constant(n, 5), f"{g_ne}, {g_lne}")

    # both certificates equal sym(1/2 + (sqrt2 S - 5/sqrt2)^2) = sym((2-S)^2 + (S-3)^2)
    quad = (S * S).scale(2) - S.scale(10) + SquareFreePolynomial.constant(n, 13)
    two_sq = (one(n).scale(2) - S) * (one(n).scale(2) - S) + (S - one(n).scale(3)) * (S - one(n).scale(3))
    res.check("1/2 + (sqrt2 S - 5/sqrt2)^2 = (2-S)^2 + (S-3)^2 exactly", quad == two_sq)
    target_sym = symmetrize_full(two_sq)
    for name, cert in (("d", ramsey_d_certificate(n)), ("g", ramsey_g_certificate(n))):
        poly = certificate_polynomial(cert)
        res.check(f"{name}-expression equals sym((2-S)^2 + (S-3)^2) as a polynomial", poly == target_sym)
        v = verify_certificate(cert, m1, ideal)
        res.check(f"{name}-certificate verifies as -1 on the Ramsey variety", v.ok, v.summary())

    # ideal-membership algebra with explicit combinations
    gens = ramsey_generators(n)
    claws = [(i, *jkl) for i in range(1, n + 1) for jkl in combinations([v for v in range(1, n + 1) if v != i], 3)]
    red_ok = all(red_claw_membership(n, *c).holds(gens) for c in claws)
    res.check(f"all {len(claws)} red claws x_ij x_ik x_il lie in I (explicit combinations)", red_ok)
    blue_ok = all(red_claw_membership(n, *c).swapped().holds(gens) for c in claws)
    res.check(f"all {len(claws)} blue claws lie in I (colour-swapped combinations)", blue_ok)
    ell = claw_consequence_membership(n, 1)
    res.check("1 - sum x_1i + sum x_1i x_1j lies in I (explicit combination)", ell.holds(gens), f"{len(ell.terms)} generator terms")
    res.check("its colour swap lies in I as well", ell.swapped().holds(gens))
    L = ell.target
    res.check("(2 - S)^2 - (2 - S) = 2(1 - S + e2)", (one(n).scale(2) - S) ** 2 - (one(n).scale(2) - S) == L.scale(2))
    res.check("(2-S)^2 + (S-3)^2 + 1 = 2(l + swap(l)), so the sum of squares is -1 mod I",
              two_sq + one(n) == (L + color_swap(L)).scale(2))
    for name, cert in (("d", ramsey_d_certificate(n)), ("g", ramsey_g_certificate(n))):
        diff = certificate_polynomial(cert) - m1
        res.check(f"{name}-expression + 1 = sym(2 l + 2 swap(l)), an element of I", diff == symmetrize_full((L + color_swap(L)).scale(2)))

    # colour swap and non-vacuous evaluation at n=5
    res.check("colour swap is an involution on the generators and on l",
              all(color_swap(color_swap(g)) == g for g in gens.values()) and color_swap(color_swap(L)) == L)
    res.check("colour swap exchanges the red and blue generator sets",
              {color_swap(g) for k, g in gens.items() if k[0] == "R"} == {g for k, g in gens.items() if k[0] == "B"})
    V5 = variety(ramsey_ideal(5))
    n5 = 5
    claws5 = [x(n5, i, j) * x(n5, i, k) * x(n5, i, l) for i in range(1, 6) for j, k, l in combinations([v for v in range(1, 6) if v != i], 3)]
    vanish = all(evaluate_mask(p, g) == 0 and evaluate_mask(color_swap(p), g) == 0 for p in claws5 for g in V5.points)
    res.check("red and blue claws vanish on the 12 Ramsey points at n=5", vanish)
    res.check("1 - S + e2 vanishes on the Ramsey points at n=5",
              all(evaluate_mask(claw_consequence_membership(5, 1).target, g) == 0 for g in V5.points))
    res.wall_time = time.perf_counter() - t0
    return res



# ---------------------------------------------------------------- C4-free graphs

T_NONEDGE = IntersectionType(2)
T_EDGE = IntersectionType(2, ((1, 2),))
H0 = Flag(T_NONEDGE, 3, ())
H1 = Flag(T_NONEDGE, 3, ((1, 3),))
H1R = Flag(T_NONEDGE, 3, ((2, 3),))
H2 = Flag(T_NONEDGE, 3, ((1, 3), (2, 3)))
H1B = Flag(T_EDGE, 3, ((1, 2),))
H2L = Flag(T_EDGE, 3, ((1, 2), (1, 3)))
H2R = Flag(T_EDGE, 3, ((1, 2), (2, 3)))


def c4_target(n: int) -> SquareFreePolynomial:
    s = edge_sum(n)
    return SquareFreePolynomial.constant(n, n) + s.scale(Fraction(2, n - 1)) - (s * s).scale(Fraction(2, comb(n, 2)))


def _gram(terms: list[tuple[Fraction, list[Fraction]]], k: int) -> list[list[Fraction]]:
    """sum_w w v v^T."""
    return [[sum((w * v[i] * v[j] for w, v in terms), Fraction(0)) for j in range(k)] for i in range(k)]


def c4_g_terms(n: int) -> list[tuple[Fraction, list[Fraction]]]:
    """Weights and coefficient vectors over (H0, H1, H1R, H2) of the two g-squares."""
    return [
        (Fraction(n), [Fraction(1, n - 2), Fraction(0), Fraction(0), Fraction(-1)]),
        (Fraction(1, 2), [Fraction(0), Fraction(1), Fraction(-1), Fraction(0)]),
    ]


def c4_g_certificate(n: int) -> FlagSosCertificate:
    R = _gram(c4_g_terms(n), 4)
    return FlagSosCertificate(n, 2, "g", c4free(n), (make_block(2, T_NONEDGE, (H0, H1, H1R, H2), R),))


def c4_d_printed_certificate(n: int) -> FlagSosCertificate:
    """The d-version with the weights exactly as displayed."""
    terms = [(Fraction(n), [Fraction(1)] * 3), (Fraction(1, 2), [Fraction(0), Fraction(1), Fraction(-1)])]
    R = _gram(terms, 3)
    return FlagSosCertificate(
        n, 2, "d", c4free(n),
        (make_block(2, T_NONEDGE, (H0, H1, H1R), R), make_block(2, T_EDGE, (H1B, H2L, H2R), R)),
    )


def g_as_d(F: Flag) -> list[Flag]:
    """Flags F' on the same vertex set whose edges contain E(F), labelled pairs included.

    g_F is the sum of the d_{F'}; the type of F' records which labelled pairs are edges.
    """
    pairs = [p for p in combinations(range(1, F.f + 1), 2) if p not in set(F.edges)]
    out = []
    for k in range(len(pairs) + 1):
        for extra in combinations(pairs, k):
            es = tuple(sorted(F.edges + extra))
            T = IntersectionType(F.t, tuple(p for p in es if p[1] <= F.t))
            out.append(Flag(T, F.f, es))
    return out


def c4_d_derived_certificate(n: int) -> FlagSosCertificate:
    """Each g-square rewritten in d-polynomials and split by type (cross terms vanish)."""
    gflags = (H0, H1, H1R, H2)
    by_type: dict[IntersectionType, list[Flag]] = {}
    for F in gflags:
        for G in g_as_d(F):
            lst = by_type.setdefault(G.type, [])
            if G not in lst:
                lst.append(G)
    blocks = []
    for T in sorted(by_type, key=lambda T: T.edges):
        flags = by_type[T]
        terms = []
        for w, c in c4_g_terms(n):
            v = [Fraction(0)] * len(flags)
            for cf, F in zip(c, gflags):
                for G in g_as_d(F):
                    if G.type == T:
                        v[flags.index(G)] += cf
            terms.append((w, v))
        blocks.append(make_block(2, T, tuple(flags), _gram(terms, len(flags))))
    return FlagSosCertificate(n, 2, "d", c4free(n), tuple(blocks))


def c4_free_graphs(n: int) -> np.ndarray:
    """Masks of all C4-free graphs on [n], by direct enumeration of every graph."""
    idx = {e: k for k, e in enumerate(edge_list(n))}
    masks = np.arange(1 << len(idx), dtype=np.int64)
    ok = np.ones(len(masks), dtype=bool)
    for a, b, c, d in combinations(range(1, n + 1), 4):
        for cyc in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            m = 0
            for u, v in zip(cyc, cyc[1:] + cyc[:1]):
                m |= 1 << idx[(min(u, v), max(u, v))]
            ok &= (masks & m) != m
    return masks[ok]


def popcount(a: np.ndarray) -> np.ndarray:
    out = np.zeros(len(a), dtype=np.int64)
    b = a.copy()
    while b.any():
        out += b & 1
        b >>= 1
    return out


def c4_implied_bound(n: int) -> float:
    return (n + math.sqrt(4 * n**3 - 3 * n**2)) / 4


def c4_bound(n: int, rediscover: bool | None = None) -> ReproResult:
    if not 5 <= n <= 7:
        raise ValueError("c4_bound needs 5 <= n <= 7 (variety enumeration cap)")
    t0 = time.perf_counter()
    res = ReproResult(f"c4:{n}")
    ideal = c4free(n)
    target = c4_target(n)
    th = identity_theta(n, 2)
    A = SquareFreePolynomial.zero(n)
    for i in range(3, n + 1):
        A = A + x(n, 1, i) * x(n, 2, i)
    res.check(
        "g-polynomials: g_H0 = n-2, g_H1 = sum x_i1, g_H1r = sum x_i2, g_H2 = sum x_i1 x_i2",
        flag_poly(H0, th, n, "g") == SquareFreePolynomial.constant(n, n - 2)
        and flag_poly(H1, th, n, "g") == star(n, 1, skip=(2,))
        and flag_poly(H1R, th, n, "g") == star(n, 2, skip=(1,))
        and flag_poly(H2, th, n, "g") == A,
    )
    # (1 - A)^2 - (1 - A) is a sum of C4 monomials
    sq = (one(n) - A) * (one(n) - A) - (one(n) - A)
    res.check("(1 - sum x_ij x_ik)^2 = (1 - sum x_ij x_ik) mod I (difference is a sum of C4 monomials)",
              not sq.is_zero() and monomial_normal_form(sq, ideal).is_zero(), f"{len(sq)} C4 monomials")
    # the two expectation identities behind the certificate
    pair_sum = SquareFreePolynomial.zero(n)
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            if j != k:
                for i in range(1, n + 1):
                    if i not in (j, k):
                        pair_sum = pair_sum + x(n, i, j) * x(n, i, k)
    s = edge_sum(n)
    e1 = symmetrize_full((one(n) - A) * (one(n) - A)).scale(n)
    want1 = SquareFreePolynomial.constant(n, n) - pair_sum.scale(Fraction(1, n - 1))
    res.check("E[n (g_H0/(n-2) - g_H2)^2] = n - (1/(n-1)) sum_{j != k} sum_i x_ij x_ik mod I",
              monomial_normal_form(e1 - want1, ideal).is_zero())
    D = star(n, 1, skip=(2,)) - star(n, 2, skip=(1,))
    e2 = symmetrize_full(D * D).scale(Fraction(1, 2))
    want2 = pair_sum.scale(Fraction(1, n - 1)) + s.scale(Fraction(2, n - 1)) - (s * s).scale(Fraction(4, n * (n - 1)))
    res.check("E[(g_H1 - g_H1r)^2 / 2] = (1/(n-1)) sum x_ij x_ik + 2s/(n-1) - 4s^2/(n(n-1)) exactly", e2 == want2)
    res.check("the two expectations add up to the target", monomial_normal_form(e1 + e2 - target, ideal).is_zero())

    V = variety(ideal)
    cg = c4_g_certificate(n)
    v = verify_certificate(cg, target, ideal)
    res.check(f"g-version certificate verifies on the C4-free variety ({len(V)} points, {len(V.reps)} classes)", v.ok, v.summary())

    cd = c4_d_printed_certificate(n)
    vp = verify_certificate(cd, target, ideal)
    mismatch = []
    if not vp.ok:
        mismatch.append("d-version with the displayed weights: " + vp.summary()[:200])
    cdd = c4_d_derived_certificate(n)
    vd = verify_certificate(cdd, target, ideal)
    res.check("d-version obtained from the g-version by Moebius expansion verifies", vd.ok,
              f"blocks {[len(b.flags) for b in cdd.blocks]}")

    graphs = c4_free_graphs(n)
    best = int(popcount(graphs).max())
    res.check("direct enumeration and the variety enumerator agree on the C4-free graphs",
              sorted(graphs.tolist()) == list(V.points), f"{len(graphs)} graphs")
    bound = c4_implied_bound(n)
    res.check("implied bound (n + sqrt(4n^3 - 3n^2))/4 is at least the brute-force maximum", bound >= best,
              f"bound {bound:.4f}, maximum {best}")
    vals = [evaluate_mask(target, g) for g in V.reps]
    res.check("target is nonnegative on every C4-free graph (direct evaluation)", min(vals) >= 0, f"min {min(vals)}")
    if rediscover is None:
        rediscover = n == 5
    if rediscover:
        from flagcube.sos.pipeline import certify

        r = certify(target, 2, ideal, "d")
        res.check("the SDP pipeline finds its own d-certificate", r.status == "certified", r.status)
    res.data = {"n": n, "implied_bound": round(bound, 4), "brute_force_max": best, "variety_points": len(V),
                "mismatches": mismatch}
    res.wall_time = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------- f_n family


def grigoriev_poly(n: int) -> SquareFreePolynomial:
    C = comb(n, 2)
    h = C // 2
    s = edge_sum(n)
    return ((s - one(n).scale(h)) * (s - one(n).scale(h + 1))).scale(Fraction(1, C * C))


def grigoriev_values(n: int) -> dict[int, Fraction]:
    """f_n as a function of the edge count, from its defining product."""
    C = comb(n, 2)
    h = C // 2
    return {k: Fraction((k - h) * (k - h - 1), C * C) for k in range(C + 1)}


def grigoriev_family(n: int, d_probe: int = 1) -> ReproResult:
    if n > 6:
        raise ValueError("grigoriev_family needs n <= 6 for the exhaustive checks")
    t0 = time.perf_counter()
    res = ReproResult(f"grigoriev:{n}")
    C = comb(n, 2)
    f = grigoriev_poly(n)
    pts = variety(hypercube(n)).points
    vals = [evaluate_mask(f, g) for g in pts]
    res.check(f"0 <= f_n <= 1 on all {len(pts)} points of V_n", min(vals) >= 0 and max(vals) <= 1,
              f"min {min(vals)}, max {max(vals)}")
    by_count = grigoriev_values(n)
    res.check("polynomial values match the closed form in the edge count",
              all(v == by_count[bin(g).count('1')] for g, v in zip(pts, vals)))
    # (s - h)(s - h - 1) + 1/4 = (s - h - 1/2)^2 as polynomials in s
    h = C // 2
    lhs = [Fraction(h * (h + 1)) + Fraction(1, 4), Fraction(-(2 * h + 1)), Fraction(1)]
    half = Fraction(2 * h + 1, 2)
    rhs = [half * half, -2 * half, Fraction(1)]
    res.check("f_n + (1/4)/C^2 = ((s - floor(C/2) - 1/2)/C)^2 identically over the reals", lhs == rhs)
    lin = (edge_sum(n) - one(n).scale(half)).scale(Fraction(1, C))
    res.check("the same identity holds modulo x^2 - x", f + SquareFreePolynomial.constant(n, Fraction(1, 4 * C * C)) == lin * lin)
    res.check("minimum of f_n over the reals is -(1/4)/C^2, attained off the cube",
              min(by_count.values()) >= 0 and Fraction(-1, 4 * C * C) < 0)
    from flagcube.sos.pipeline import certify

    r = certify(f, d_probe, hypercube(n), "d")
    res.data = {"n": n, "d_probe": d_probe, "flag_sos_status": r.status, "f_n": str(f)}
    res.check(f"flag-SOS SDP at d={d_probe} ran and reported a status (recorded, not asserted)",
              r.status in ("certified", "numerically_feasible_only", "infeasible_at_degree", "solver_limit"), r.status)
    res.wall_time = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------- unreduced oracle

ORACLE_BASIS_CAP = 60


@dataclass
class OracleResult:
    status: str  # feasible | infeasible | unknown
    objective: float | None
    basis_size: int


def monomial_masks(n: int, d: int) -> list[int]:
    ne = len(edge_list(n))
    return [sum(1 << b for b in c) for k in range(d + 1) for c in combinations(range(ne), k)]


def brute_force_symmetric_sos(target: SquareFreePolynomial, d: int, ideal: IdealSpec, margin: float = 1e-6) -> OracleResult:
    """Direct Gram-matrix SDP over all square-free monomials of degree <= d, no symmetry reduction.

    Same semantics as the flag SDP: maximize lambda with Q - lambda I psd under a
    trace bound; lambda* > margin is feasible, < -margin infeasible, and the
    boundary band counts as (numerically) feasible.
    """
    import cvxpy as cp

    n = target.n
    basis = monomial_masks(n, d)
    k = len(basis)
    if k > ORACLE_BASIS_CAP:
        raise ValueError(f"oracle basis has {k} > {ORACLE_BASIS_CAP} monomials")
    Q = cp.Variable((k, k), symmetric=True)
    lam = cp.Variable()
    cons = []
    if ideal.kind == "hypercube":
        groups: dict[int, list[tuple[int, int]]] = {}
        for a in range(k):
            for b in range(k):
                groups.setdefault(basis[a] | basis[b], []).append((a, b))
        for m in set(groups) | set(target.mask_terms):
            lhs = sum(Q[a, b] for a, b in groups.get(m, []))
            cons.append(lhs == float(target.mask_terms.get(m, 0)))
        scale = 1 + max((abs(float(c)) for c in target.mask_terms.values()), default=0.0)
    else:
        V = variety(ideal)
        if not len(V):
            # every identity holds on the empty variety
            return OracleResult("feasible", None, k)
        for g in V.points:
            idx = [a for a in range(k) if basis[a] & g == basis[a]]
            cons.append(cp.sum(Q[np.ix_(idx, idx)]) == float(evaluate_mask(target, g)))
        scale = 1 + max(abs(float(evaluate_mask(target, g))) for g in V.points)
    bound = 100.0 * k * scale
    cons += [Q - lam * np.eye(k) >> 0, cp.trace(Q) <= bound, lam <= 1]
    prob = cp.Problem(cp.Maximize(lam), cons)
    # Clarabel is accurate but gives up on some degenerate variety systems; SCS is the fallback
    for solver, opts in ((cp.CLARABEL, {}), (cp.SCS, {"eps": 1e-9, "max_iters": 200000})):
        try:
            prob.solve(solver=solver, **opts)
            break
        except cp.error.SolverError:
            continue
    else:
        return OracleResult("unknown", None, k)
    if prob.status == cp.INFEASIBLE:
        return OracleResult("infeasible", None, k)
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or lam.value is None:
        return OracleResult("unknown", None, k)
    val = float(lam.value)
    status = "infeasible" if val < -margin * scale else "feasible"
    return OracleResult(status, val, k)


def flag_status_class(status: str) -> str:
    return {"certified": "feasible", "numerically_feasible_only": "feasible", "infeasible_at_degree": "infeasible"}.get(status, "unknown")


REPRO_NAMES = ("ramsey33", "c4:5", "c4:6", "c4:7", "grigoriev:4")


def run_repro(name: str) -> ReproResult:
    if name == "ramsey33":
        return ramsey33()
    if name.startswith("c4:"):
        return c4_bound(int(name[3:]))
    if name.startswith("grigoriev:"):
        return grigoriev_family(int(name.split(":")[1]), 1)
    raise ValueError(f"unknown reproduction {name!r}; choose from {', '.join(REPRO_NAMES)}")
