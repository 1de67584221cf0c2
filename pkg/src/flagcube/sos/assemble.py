"""Assembly of the flag-SOS linear system  sum_T tr(R_T Z_T) = target."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Sequence

from flagcube.flagpoly import flag_poly
from flagcube.flags import Flag, IntersectionType, all_types, enumerate_flags, type_canonical
from flagcube.qpoly import (
    SquareFreePolynomial,
    adjacent_transpositions,
    bits_of,
    edge_index,
    mask_of,
    mask_orbit,
    symmetrize_full,
)
from flagcube.shapes import ThetaLabeling, identity_theta
from flagcube.sos.ideal import IdealSpec, class_values, variety

MATRIX_SIZE_CAP = 200


@dataclass(frozen=True)
class Block:
    """One psd block: a type (d-variant) or a type size t (g-variant)."""

    t: int
    type: IntersectionType | None
    flags: tuple[Flag, ...]

    @property
    def size(self) -> int:
        return len(self.flags)

    def key(self) -> dict:
        if self.type is None:
            return {"t": self.t}
        return {"t": self.t, "edges": [list(p) for p in self.type.edges]}


class OrbitBasis:
    """Coordinates of S_n-invariant polynomials: one coefficient per monomial orbit."""

    def __init__(self, n: int):
        self.n = n
        self._rep: dict[int, int] = {}
        self._size: dict[int, int] = {}
        self._gens = adjacent_transpositions(n)

    def rep(self, mask: int) -> int:
        r = self._rep.get(mask)
        if r is None:
            orb = mask_orbit(mask, self._gens)
            r = min(orb)
            for m in orb:
                self._rep[m] = r
            self._size[r] = len(orb)
        return r

    def orbit_size(self, rep: int) -> int:
        self.rep(rep)
        return self._size[rep]

    def coordinates(self, p: SquareFreePolynomial) -> dict[int, Fraction]:
        """Orbit representative -> coefficient; raises if p is not invariant."""
        out: dict[int, Fraction] = {}
        seen: dict[int, int] = {}
        for m, c in p.mask_terms.items():
            r = self.rep(m)
            if out.setdefault(r, c) != c:
                raise ValueError("polynomial is not S_n-invariant")
            seen[r] = seen.get(r, 0) + 1
        if any(seen[r] != self._size[r] for r in seen):
            raise ValueError("polynomial is not S_n-invariant")
        return out


@dataclass
class FlagSosProblem:
    target: SquareFreePolynomial
    d: int
    ideal: IdealSpec
    variant: str
    flag_size: int
    blocks: list[Block]
    coordinate_kind: str  # "orbit" or "classes"
    labels: list[int]  # orbit reps or variety class indices
    A: list[list[list[list[Fraction]]]]  # A[c][k] is the block-k matrix of coordinate c
    b: list[Fraction]
    log: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.target.n

    @property
    def block_sizes(self) -> list[int]:
        return [blk.size for blk in self.blocks]

    def residual(self, R: Sequence[Sequence[Sequence[Fraction]]]) -> list[Fraction]:
        """b - A(R) exactly."""
        out = []
        for c, mats in enumerate(self.A):
            s = Fraction(0)
            for k, M in enumerate(mats):
                Rk = R[k]
                for i, row in enumerate(M):
                    for j, v in enumerate(row):
                        if v:
                            s += v * Rk[i][j]
            out.append(self.b[c] - s)
        return out


# ---------------------------------------------------------------- blocks


def make_blocks(
    d: int, variant: str, flag_size: int | None = None, merge: bool = True, max_edges: int | None = None
) -> list[Block]:
    """One block per type (d) or per type size (g).

    ``max_edges`` keeps only g-flags with at most that many edges, so the
    squares stay within degree 2 * max_edges.
    """
    f = 2 * d if flag_size is None else flag_size
    if max_edges is not None and variant != "g":
        raise ValueError("max_edges applies to the g variant only")
    blocks = []
    for t in range(0, min(2 * d, f) + 1):
        types = all_types(t)
        if variant == "d":
            if merge:
                seen = []
                for T in types:
                    c = type_canonical(T)
                    if c not in seen:
                        seen.append(c)
                types = seen
            for T in types:
                blocks.append(Block(t, T, tuple(enumerate_flags(T, f))))
        elif variant == "g":
            flags = tuple(
                F for T in types for F in enumerate_flags(T, f) if max_edges is None or len(F.edges) <= max_edges
            )
            blocks.append(Block(t, None, flags))
        else:
            raise ValueError(f"variant must be 'd' or 'g', got {variant!r}")
    return blocks


def _relabel_flag(F: Flag, sigma: Sequence[int]) -> Flag:
    """Relabel labeled vertex i as sigma[i-1]."""
    mp = {i + 1: s for i, s in enumerate(sigma)}
    es = []
    for i, j in F.edges:
        a, b = mp.get(i, i), mp.get(j, j)
        es.append((a, b) if a < b else (b, a))
    T = IntersectionType(F.t, tuple(p for p in es if p[1] <= F.t))
    return Flag(T, F.f, tuple(es))


def merge_audit(block: Block, n: int) -> int:
    """Check that every S_t-relabeling of a merged type gives the same flag polynomials.

    Returns the number of relabelings checked; raises on a mismatch.
    """
    if block.type is None:
        return 0
    t = block.t
    th0 = identity_theta(n, t)
    checked = 0
    seen = {block.type}
    for sigma in permutations(range(1, t + 1)):
        T2 = IntersectionType(t, tuple(tuple(sorted((sigma[i - 1], sigma[j - 1]))) for i, j in block.type.edges))
        if T2 in seen:
            continue
        seen.add(T2)
        inv = [0] * t
        for i, s in enumerate(sigma):
            inv[s - 1] = i + 1
        th2 = ThetaLabeling(tuple(th0.images[inv[k] - 1] for k in range(t)), n)
        for F in block.flags:
            G = _relabel_flag(F, sigma)
            if flag_poly(G, th2, n, "d") != flag_poly(F, th0, n, "d"):
                raise AssertionError(f"merge audit failed for {block.type} -> {T2}")
        checked += 1
    return checked


# ---------------------------------------------------------------- symbolic route


def block_polys(block: Block, n: int, kind: str) -> list[SquareFreePolynomial]:
    th = identity_theta(n, block.t)
    return [flag_poly(F, th, n, kind) for F in block.flags]


def _theta_support(p: SquareFreePolynomial, theta_mask: int) -> frozenset[int]:
    """Assignments of the theta edges under which p does not vanish identically."""
    sub = [0]
    for b in bits_of(theta_mask):
        sub += [a | (1 << b) for a in sub]
    out = set()
    for a in sub:
        rest: dict[int, Fraction] = {}
        for m, c in p.mask_terms.items():
            if m & theta_mask & ~a == 0:
                k = m & ~theta_mask
                rest[k] = rest.get(k, Fraction(0)) + c
        if any(rest.values()):
            out.add(a)
    return frozenset(out)


def assert_orthogonal(blocks: Sequence[Block], n: int) -> int:
    """Distinct types of equal size: every cross product of d-polynomials is zero.

    Disjoint supports over the theta edges settle a pair at once; any other
    pair is multiplied out.
    """
    count = 0
    polys = {id(b): block_polys(b, n, "d") for b in blocks if b.type is not None}
    typed = [b for b in blocks if b.type is not None]
    supports: dict[tuple[int, int], frozenset[int]] = {}
    for b in typed:
        tm = mask_of(n, combinations(identity_theta(n, b.t).images, 2)) if b.t >= 2 else 0
        for i, p in enumerate(polys[id(b)]):
            supports[id(b), i] = _theta_support(p, tm)
    for a, b in combinations(typed, 2):
        if a.t != b.t:
            continue
        for i, p in enumerate(polys[id(a)]):
            for j, q in enumerate(polys[id(b)]):
                if supports[id(a), i] & supports[id(b), j] and not (p * q).is_zero():
                    raise AssertionError(f"types {a.type} and {b.type} are not orthogonal")
                count += 1
    return count


def _symbolic_entries(block: Block, n: int, kind: str, basis: OrbitBasis) -> list[list[dict[int, Fraction]]]:
    polys = block_polys(block, n, kind)
    k = len(polys)
    out = [[{} for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            z = basis.coordinates(symmetrize_full(polys[i] * polys[j]))
            out[i][j] = out[j][i] = z
    return out


# ---------------------------------------------------------------- counting route


def _pair_slots(f: int) -> list[tuple[int, int, int]]:
    return [(i, j, k) for k, (i, j) in enumerate(combinations(range(f), 2))]


def _flag_mask(F: Flag) -> int:
    slots = {(i + 1, j + 1): k for i, j, k in _pair_slots(F.f)}
    m = 0
    for e in F.edges:
        m |= 1 << slots[e]
    return m


class FlagCounter:
    """Values of d_F^Theta or g_F^Theta at a point, for all flags of a block, by counting injections."""

    def __init__(self, block: Block, n: int, kind: str):
        self.block, self.n, self.kind = block, n, kind
        f = block.flags[0].f if block.flags else 0
        self.f, self.t = f, block.t
        self.slots = _pair_slots(f)
        masks = [_flag_mask(F) for F in block.flags]
        if kind == "d":
            self.lookup = {m: [i] for i, m in enumerate(masks)}
        else:
            self.lookup = {}
            for M in range(1 << len(self.slots)):
                hits = [i for i, m in enumerate(masks) if m & M == m]
                if hits:
                    self.lookup[M] = hits
        self.idx = edge_index(n)
        tslots = [(i, j, k) for i, j, k in self.slots if j < self.t]
        self.type_mask = 0
        if block.type is not None:
            for i, j, k in tslots:
                if (i + 1, j + 1) in block.type.edges:
                    self.type_mask |= 1 << k
        self.tslots = tslots

    def thetas(self):
        return permutations(range(1, self.n + 1), self.t)

    def vector(self, point: int, theta: Sequence[int]) -> list[int]:
        n, idx = self.n, self.idx
        v = [0] * len(self.block.flags)
        if not self.block.flags:
            return v

        def bit(a: int, b: int) -> int:
            return point >> idx[(a, b) if a < b else (b, a)] & 1

        if self.kind == "d" and self.block.type is not None:
            tm = 0
            for i, j, k in self.tslots:
                if bit(theta[i], theta[j]):
                    tm |= 1 << k
            if tm != self.type_mask:
                return v
        free = [u for u in range(1, n + 1) if u not in theta]
        for tail in permutations(free, self.f - self.t):
            h = tuple(theta) + tail
            M = 0
            for i, j, k in self.slots:
                if bit(h[i], h[j]):
                    M |= 1 << k
            for fi in self.lookup.get(M, ()):
                v[fi] += 1
        return v

    def moment(self, point: int) -> list[list[Fraction]]:
        """E_Theta[p p^T] at the point."""
        k = len(self.block.flags)
        acc = [[0] * k for _ in range(k)]
        count = 0
        for th in self.thetas():
            count += 1
            v = self.vector(point, th)
            nz = [i for i in range(k) if v[i]]
            for i in nz:
                for j in nz:
                    acc[i][j] += v[i] * v[j]
        return [[Fraction(x, count) for x in row] for row in acc]


# ---------------------------------------------------------------- assemble


def check_invariant(p: SquareFreePolynomial) -> None:
    if symmetrize_full(p) != p:
        raise ValueError("target polynomial is not S_n-invariant")


def assemble(
    target: SquareFreePolynomial,
    d: int,
    ideal: IdealSpec,
    variant: str = "d",
    flag_size: int | None = None,
    merge: bool = True,
    audit: bool = True,
    coordinates: str = "auto",
    size_cap: int = MATRIX_SIZE_CAP,
    max_edges: int | None = None,
) -> FlagSosProblem:
    n = target.n
    if ideal.n != n:
        raise ValueError("target and ideal live on different ground sets")
    if d < 0:
        raise ValueError("degree must be non-negative")
    check_invariant(target)
    f = 2 * d if flag_size is None else flag_size
    if f > n:
        raise ValueError(f"flag size {f} exceeds n={n}")
    blocks = make_blocks(d, variant, f, merge, max_edges)
    total = sum(b.size for b in blocks)
    if total > size_cap:
        raise ValueError(f"total matrix size {total} exceeds cap {size_cap}")
    log = [f"blocks={len(blocks)} sizes={[b.size for b in blocks]}"]
    if variant == "d":
        if merge and audit:
            log.append(f"merge audit: {sum(merge_audit(b, n) for b in blocks)} relabelings checked")
        log.append(f"orthogonality: {assert_orthogonal(blocks, n)} cross products vanish")
    if coordinates == "auto":
        coordinates = "orbit" if ideal.kind == "hypercube" else "classes"
    if coordinates == "orbit":
        if ideal.kind != "hypercube":
            raise ValueError("orbit coordinates need the plain hypercube ideal")
        basis = OrbitBasis(n)
        entries = [_symbolic_entries(blk, n, variant, basis) for blk in blocks]
        tc = basis.coordinates(target)
        labels = set(tc)
        for E in entries:
            for row in E:
                for z in row:
                    labels.update(z)
        labels = sorted(labels, key=lambda m: (bin(m).count("1"), m))
        A = []
        for c in labels:
            A.append([[[z.get(c, Fraction(0)) for z in row] for row in E] for E in entries])
        b = [tc.get(c, Fraction(0)) for c in labels]
    elif coordinates == "classes":
        V = variety(ideal)
        reps = V.reps
        labels = list(range(len(reps)))
        counters = [FlagCounter(blk, n, variant) for blk in blocks]
        A = [[cnt.moment(r) for cnt in counters] for r in reps]
        b = list(class_values(target, ideal))
        log.append(f"variety: {len(V)} points in {len(reps)} classes")
    else:
        raise ValueError(f"unknown coordinates {coordinates!r}")
    keep = [c for c in range(len(labels)) if b[c] or any(any(any(row) for row in M) for M in A[c])]
    A = [A[c] for c in keep]
    b = [b[c] for c in keep]
    labels = [labels[c] for c in keep]
    return FlagSosProblem(target, d, ideal, variant, f, blocks, coordinates, labels, A, b, log)


def combination(problem: FlagSosProblem, R: Sequence[Sequence[Sequence[Fraction]]]) -> list[Fraction]:
    """Coordinates of sum_T tr(R_T Z_T)."""
    return [bc - r for bc, r in zip(problem.b, problem.residual(R))]


def n_injections(n: int, t: int) -> int:
    return factorial(n) // factorial(n - t)
