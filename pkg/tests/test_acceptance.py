"""Acceptance gate: one PASS/FAIL line per criterion (see the summary section of the pytest output)."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations
from math import comb, sqrt

import pytest

from flagcube.exact import rank
from flagcube.flagpoly import (
    check_g_equals_scaled_hook_sym,
    check_isolated_vertex_scaling,
    covering_flag_size,
    d_poly,
    expectation_product,
    explicit_expectation,
    flag_poly,
    spanning_set_for_W,
)
from flagcube.flags import Flag, IntersectionType, all_types, enumerate_flags, flag_poset, mobius_coefficients, pad_flag
from flagcube.qpoly import SquareFreePolynomial, edge_sum, mask_of, parse_poly, symmetrize_full
from flagcube.repn import compute_W, isotypic_report
from flagcube.repro import (
    brute_force_symmetric_sos,
    c4_bound,
    c4_g_certificate,
    c4_target,
    claw_consequence_membership,
    flag_status_class,
    grigoriev_family,
    monochromatic_triangle_free,
    ramsey_d_certificate,
    ramsey_g_certificate,
    ramsey_generators,
    red_claw_membership,
    star,
)
from flagcube.shapes import Partition, ThetaLabeling, all_tableaux, identity_theta
from flagcube.sos.certificate import FlagSosCertificate, certificate_polynomial, verify_certificate
from flagcube.sos.ideal import c4free, color_swap, evaluate_mask, hypercube, ramsey33, variety
from flagcube.sos.pipeline import certify
from flagcube.sos.sdpa import format_sdpa, parse_sdpa, sdpa_problem
from flagcube.sos.assemble import assemble

CHERRY = IntersectionType(3, ((1, 2), (1, 3)))


def const(n, c):
    return SquareFreePolynomial.constant(n, c)


# ---------------------------------------------------------------- 1


def test_criterion_1_ramsey(criterion):
    t0 = time.perf_counter()
    n = 6
    I = ramsey33(n)
    d_ok = verify_certificate(ramsey_d_certificate(n), const(n, -1), I).ok
    g_ok = verify_certificate(ramsey_g_certificate(n), const(n, -1), I).ok
    survivors = len(monochromatic_triangle_free(6))
    empty = len(variety(I)) == 0
    cyc = mask_of(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    witness = all(evaluate_mask(g, cyc) == 0 for g in ramsey33(5).closure())
    dt = time.perf_counter() - t0
    criterion(
        "criterion 1 (Ramsey)",
        d_ok and g_ok and survivors == 0 and empty and witness and dt < 10,
        f"d {d_ok}, g {g_ok}, 32768 colourings -> {survivors} survivors, K5 witness {witness}, {dt:.2f}s",
    )


# ---------------------------------------------------------------- 2


def test_criterion_2_membership_algebra(criterion):
    t0 = time.perf_counter()
    n = 6
    gens = ramsey_generators(n)
    claws = [(i, *r) for i in range(1, n + 1) for r in combinations([v for v in range(1, n + 1) if v != i], 3)]
    red = all(red_claw_membership(n, *c).holds(gens) for c in claws)
    blue = all(red_claw_membership(n, *c).swapped().holds(gens) for c in claws)
    ell = claw_consequence_membership(n, 1)
    S = star(n, 1)
    xs = [parse_poly(f"x{{1,{i}}}", n) for i in range(2, n + 1)]
    e2 = sum((a * b for a, b in combinations(xs, 2)), const(n, 0))
    ell_ok = ell.holds(gens) and ell.target == const(n, 1) - S + e2
    two = const(n, 2) - S
    # (2-S)^2 - (2-S) = 2 l with l in I
    square_red = two * two - two == ell.target.scale(2)
    # (2-S)^2 + (S-3)^2 = -1 + 2 (l + swap l), and both certificates expand to its symmetrization
    three = S - const(n, 3)
    L = ell.target
    final = two * two + three * three + const(n, 1) == (L + color_swap(L)).scale(2)
    final = final and ell.swapped().holds(gens)
    lifted = all(
        certificate_polynomial(c) + const(n, 1) == symmetrize_full((L + color_swap(L)).scale(2))
        for c in (ramsey_d_certificate(n), ramsey_g_certificate(n))
    )
    dt = time.perf_counter() - t0
    criterion(
        "criterion 2 (claw memberships and square reduction)",
        red and blue and ell_ok and square_red and final and lifted and dt < 5,
        f"{len(claws)} red and blue claws, l in I, (2-S)^2 = 2-S mod I, -1 identity, {dt:.2f}s",
    )


# ---------------------------------------------------------------- 3


def test_criterion_3_c4(criterion):
    ok = True
    parts = []
    for n in (5, 6, 7):
        t0 = time.perf_counter()
        res = c4_bound(n, rediscover=False)
        v = verify_certificate(c4_g_certificate(n), c4_target(n), c4free(n))
        dt = time.perf_counter() - t0
        ok = ok and res.ok and v.ok and dt < 120
        parts.append(f"n={n}: residue {'0' if v.ok else 'nonzero'}, bound {res.data['implied_bound']}, max {res.data['brute_force_max']}, {dt:.1f}s")
        if n == 5:
            ok = ok and abs(res.data["implied_bound"] - 6.4039) <= 1e-3 and res.data["brute_force_max"] == 6
    criterion("criterion 3 (C4 at n=5,6,7)", ok, "; ".join(parts))


# ---------------------------------------------------------------- 4


def test_criterion_4_flags(criterion):
    t0 = time.perf_counter()
    nflags = len(enumerate_flags(CHERRY, 4))
    P = flag_poset(CHERRY, 4)
    F6 = Flag(CHERRY, 4, ((1, 2), (1, 3), (2, 4), (3, 4)))
    mc = mobius_coefficients(F6, P)
    top = tuple(sorted(F6.edges + ((1, 4), (2, 3))))
    want = {
        F6.edges: 1,
        tuple(sorted(F6.edges + ((1, 4),))): -1,
        tuple(sorted(F6.edges + ((2, 3),))): -1,
        top: 1,
    }
    dt = time.perf_counter() - t0
    criterion(
        "criterion 4 (flag enumeration)",
        nflags == 8 and len(P) == 16 and mc == want and dt < 1,
        f"|F| = {nflags}, poset {len(P)}, Mobius terms {len(mc)}, {dt:.3f}s",
    )


# ---------------------------------------------------------------- 5


def _shifted_theta(n, t):
    return ThetaLabeling(tuple(range(n, n - t, -1)), n)


def test_criterion_5_identity_lemmas(criterion):
    t0 = time.perf_counter()
    counts = dict.fromkeys(("hook", "extra", "orth", "symexp", "mobius"), 0)
    ok = True
    # hook scaling, n <= 6, f <= 4
    for n in range(2, 7):
        # the hook shape (n - t, 1^t) needs n > t
        for t in range(0, min(n - 1, 4) + 1):
            for th in {identity_theta(n, t), _shifted_theta(n, t)}:
                for T in all_types(t):
                    for f in range(max(t, 1), min(n, 4) + 1):
                        for F in enumerate_flags(T, f):
                            ok &= check_g_equals_scaled_hook_sym(F, th, n)
                            counts["hook"] += 1
    # isolated vertices: F padded to every size up to min(n, 4)
    for n in range(3, 7):
        for t in range(0, 3):
            th = identity_theta(n, t)
            for T in all_types(t):
                for f in range(max(t, 1), 4):
                    for F in enumerate_flags(T, f):
                        for f2 in range(f, min(n, 4) + 1):
                            ok &= check_isolated_vertex_scaling(F, pad_flag(F, f2), th, n)
                            counts["extra"] += 1
    # orthogonality of distinct types, t <= 2, f <= 3, n <= 5
    for n in range(2, 6):
        for t in range(1, min(n, 2) + 1):
            th = identity_theta(n, t)
            types = all_types(t)
            for f in range(t, min(n, 3) + 1):
                polys = {T: [flag_poly(F, th, n, "d") for F in enumerate_flags(T, f)] for T in types}
                for a, b in combinations(types, 2):
                    for p in polys[a]:
                        for q in polys[b]:
                            ok &= (p * q).is_zero()
                            counts["orth"] += 1
    # sym = E_Theta, n <= 5
    for n in range(2, 6):
        for t in range(0, min(n, 2) + 1):
            for T in all_types(t):
                flags = enumerate_flags(T, min(n, 3)) if min(n, 3) >= max(t, 1) else []
                for F, G in combinations(flags, 2):
                    for kind in ("d", "g"):
                        ok &= expectation_product(F, G, n, kind) == explicit_expectation(F, G, n, kind)
                        counts["symexp"] += 1
    # Mobius and product forms of d, f <= 4, n <= 6
    for n in range(2, 7):
        for t in range(0, min(n, 4) + 1):
            th = identity_theta(n, t)
            for T in all_types(t):
                for f in range(max(t, 1), min(n, 4) + 1):
                    for F in enumerate_flags(T, f):
                        ok &= d_poly(F, th, n, "mobius").poly == d_poly(F, th, n, "product").poly
                        counts["mobius"] += 1
    dt = time.perf_counter() - t0
    criterion("criterion 5 (identity lemmas)", bool(ok) and dt < 120, f"{counts}, {dt:.1f}s")


# ---------------------------------------------------------------- 6


def _in_span(W, span):
    masks = sorted({m for p in W + span for m in p.mask_terms})
    vec = lambda p: [p.mask_terms.get(m, Fraction(0)) for m in masks]
    return rank([vec(p) for p in span]) == rank([vec(p) for p in W + span])


def _criterion_6(flag_size_of):
    t0 = time.perf_counter()
    n, d = 6, 1
    rep = isotypic_report(n, d)
    m = {row["lambda"]: row["m_lambda"] for row in rep.rows}
    want = {str(Partition((6,))): 2, str(Partition((5, 1))): 1, str(Partition((4, 2))): 1}
    mults = all(m[k] == v for k, v in want.items())
    below = [row for row in rep.rows if Partition.parse(row["lambda"]).parts <= (4, 1, 1)]
    zeros = all(row["m_lambda"] == 0 for row in below)
    total = rep.total == 16 == 1 + comb(6, 2)
    rng = random.Random(6)
    dims = True
    covered = True
    for key in want:
        lam = Partition.parse(key)
        taus = rng.sample(list(all_tableaux(lam)), 3)
        ds = [len(compute_W(tau, d)) for tau in taus]
        dims &= len(set(ds)) == 1
        for tau in taus:
            t = n - lam.parts[0]
            span = spanning_set_for_W(tau, d, "g", flag_size=flag_size_of(n, t, d))
            covered &= _in_span(compute_W(tau, d), span)
    dt = time.perf_counter() - t0
    return mults and zeros and total and dims and covered and dt < 60, (
        f"m = {[m[k] for k in want]}, zeros below (4,1,1) {zeros}, sum {rep.total}, dims {dims}, W in span {covered}, {dt:.1f}s"
    )


@pytest.mark.xfail(strict=True, reason="flags of size 2d miss W when t >= 1; see the decisions ledger")
def test_criterion_6_representation(criterion):
    ok, detail = _criterion_6(lambda n, t, d: 2 * d)
    criterion("criterion 6 (representation, flags of size 2d)", ok, detail)


def test_criterion_6_representation_covering_size(criterion):
    ok, detail = _criterion_6(covering_flag_size)
    criterion("criterion 6 (representation, flags of size min(n, t+2d))", ok, detail)


# ---------------------------------------------------------------- 7


def test_criterion_7_desk_scale_properties(criterion):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for n in (5, 6, 7):
        res = c4_bound(n, rediscover=False)
        ex = res.data["brute_force_max"]
        reiman = n / 4 * (1 + sqrt(4 * n - 3))
        ok &= res.ok and ex <= res.data["implied_bound"] and ex <= reiman
        parts.append(f"n={n}: ex {ex} <= {res.data['implied_bound']} (1/2 n^1.5 = {0.5 * n ** 1.5:.2f})")
    statuses = {}
    for n in (3, 4, 5):
        r = grigoriev_family(n)
        ok &= r.ok
        statuses[n] = r.data["flag_sos_status"]
    dt = time.perf_counter() - t0
    criterion("criterion 7 (desk-scale substitutes)", bool(ok), "; ".join(parts) + f"; f_n d=1 statuses {statuses}; {dt:.1f}s")


# ---------------------------------------------------------------- 8


def _family(seed=2024, count=20, n=4):
    s = edge_sum(n)
    P2 = symmetrize_full(parse_poly("x{1,2}*x{1,3}", n))
    M2 = symmetrize_full(parse_poly("x{1,2}*x{3,4}", n))
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        c = [rng.randint(-3, 3) for _ in range(4)]
        out.append(const(n, c[0]) + s.scale(c[1]) + P2.scale(c[2]) + M2.scale(c[3]))
    return out


def _criterion_8(run):
    t0 = time.perf_counter()
    agree = verified = feasible = 0
    for t in _family():
        oracle = brute_force_symmetric_sos(t, 1, hypercube(4)).status
        r = run(t)
        status = flag_status_class(r.status)
        agree += status == oracle
        if oracle == "feasible":
            feasible += 1
            if r.status == "certified":
                cert = FlagSosCertificate.from_json(r.certificate.to_json())
                verified += verify_certificate(cert, t, hypercube(4)).ok
    dt = time.perf_counter() - t0
    ok = agree == 20 and verified == feasible and dt < 300
    return ok, f"agree {agree}/20, verified {verified}/{feasible} feasible, {dt:.1f}s"


@pytest.mark.xfail(strict=True, reason="size-2d flags miss M2-negative 1-sos targets; see the decisions ledger")
def test_criterion_8_solver_loop(criterion):
    ok, detail = _criterion_8(lambda t: certify(t, 1, hypercube(4)))
    criterion("criterion 8 (solver loop, flags of size 2d)", ok, detail)


def test_criterion_8_solver_loop_degree_matched(criterion):
    fs = covering_flag_size(4, 2, 1)
    ok, detail = _criterion_8(lambda t: certify(t, 1, hypercube(4), "g", flag_size=fs, max_edges=1))
    criterion("criterion 8 (solver loop, g-flags of size min(n, t+2d) with <= d edges)", ok, detail)


# ---------------------------------------------------------------- 9


def test_criterion_9_serialization(criterion, tmp_path):
    certs = [ramsey_d_certificate(), ramsey_g_certificate(), c4_g_certificate(5)]
    s = edge_sum(4)
    r = certify(symmetrize_full((s - const(4, 3)) * (s - const(4, 3))), 1, hypercube(4))
    certs.append(r.certificate)
    json_ok = True
    for k, c in enumerate(certs):
        text = c.to_json()
        path = tmp_path / f"c{k}.json"
        c.save(str(path))
        back = FlagSosCertificate.load(str(path))
        json_ok &= back == c and back.to_json() == text
    problem = assemble(r.problem.target, 1, hypercube(4))
    sp = sdpa_problem(problem)
    text = format_sdpa(sp)
    back = parse_sdpa(text)
    sdpa_ok = format_sdpa(back) == text and back.F == sp.F and back.c == sp.c
    # identical diagnostics for a passing and a failing verification after reload
    cases = [(certs[0], const(6, -1), ramsey33(6)), (certs[0], const(6, -1), hypercube(6)), (certs[2], c4_target(5) + const(5, 1), c4free(5))]
    diag_ok = True
    for c, t, I in cases:
        a = verify_certificate(c, t, I)
        b = verify_certificate(FlagSosCertificate.from_json(c.to_json()), t, I)
        diag_ok &= a.ok == b.ok and a.diagnostics == b.diagnostics
    criterion("criterion 9 (serialization)", json_ok and sdpa_ok and diag_ok, f"json {json_ok}, sdpa {sdpa_ok}, diagnostics {diag_ok}")
