"""Square-free polynomials in the edge variables x_ij with exact rational coefficients.

Monomials are stored internally as bit masks over the edges of K_n listed in
lexicographic order, so multiplication modulo x^2 - x is a bitwise OR.
"""

from __future__ import annotations

import re
from collections import deque
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence, Union

Edge = tuple[int, int]
Monomial = tuple[Edge, ...]
Permutation = tuple[int, ...]
Scalar = Union[int, Fraction]

DEFAULT_ORBIT_CAP = 10**6


@lru_cache(maxsize=None)
def edge_list(n: int) -> tuple[Edge, ...]:
    """All edges of K_n in lexicographic order; position = bit index."""
    return tuple(combinations(range(1, n + 1), 2))


@lru_cache(maxsize=None)
def edge_index(n: int) -> dict[Edge, int]:
    return {e: k for k, e in enumerate(edge_list(n))}


def canonical_edge(i: int, j: int) -> Edge:
    if i == j:
        raise ValueError(f"loop x{{{i},{j}}} is not an edge variable")
    return (i, j) if i < j else (j, i)


def mask_of(n: int, edges: Iterable[Sequence[int]]) -> int:
    idx = edge_index(n)
    m = 0
    for e in edges:
        ce = canonical_edge(int(e[0]), int(e[1]))
        try:
            m |= 1 << idx[ce]
        except KeyError:
            raise ValueError(f"edge {ce} outside [{n}]") from None
    return m


def bits_of(mask: int) -> list[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def edges_of(n: int, mask: int) -> Monomial:
    el = edge_list(n)
    return tuple(el[k] for k in bits_of(mask))


def monomial_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: degree first, then lexicographic on the edge list."""
    b = bits_of(mask)
    return (len(b), tuple(b))


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


class SquareFreePolynomial:
    """Immutable element of R[x_ij] / (x_ij^2 - x_ij) with rational coefficients."""

    __slots__ = ("n", "_t", "_hash")

    def __init__(self, n: int, mask_terms: Mapping[int, Scalar] | None = None):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        t: dict[int, Fraction] = {}
        if mask_terms:
            full = (1 << len(edge_list(n))) - 1
            for m, c in mask_terms.items():
                if m & ~full:
                    raise ValueError("monomial uses an edge outside [n]")
                c = _as_fraction(c)
                if c:
                    t[m] = c
        self._t = t
        self._hash = None

    # construction

    @classmethod
    def _raw(cls, n: int, t: dict[int, Fraction]) -> "SquareFreePolynomial":
        p = cls.__new__(cls)
        p.n = n
        p._t = t
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "SquareFreePolynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "SquareFreePolynomial":
        c = _as_fraction(c)
        return cls._raw(n, {0: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int, j: int) -> "SquareFreePolynomial":
        return cls._raw(n, {mask_of(n, [(i, j)]): Fraction(1)})

    @classmethod
    def monomial(cls, n: int, edges: Iterable[Sequence[int]], coeff: Scalar = 1) -> "SquareFreePolynomial":
        return cls(n, {mask_of(n, edges): coeff})

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Monomial, Scalar]) -> "SquareFreePolynomial":
        acc: dict[int, Fraction] = {}
        for mono, c in terms.items():
            m = mask_of(n, mono)
            acc[m] = acc.get(m, Fraction(0)) + _as_fraction(c)
        return cls(n, acc)

    # accessors

    @property
    def mask_terms(self) -> Mapping[int, Fraction]:
        return self._t

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        """Term map in canonical monomial order."""
        return {edges_of(self.n, m): self._t[m] for m in sorted(self._t, key=monomial_key)}

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self._t), default=-1)

    def is_zero(self) -> bool:
        return not self._t

    def constant_term(self) -> Fraction:
        return self._t.get(0, Fraction(0))

    def coefficient(self, edges: Iterable[Sequence[int]]) -> Fraction:
        return self._t.get(mask_of(self.n, edges), Fraction(0))

    def __len__(self) -> int:
        return len(self._t)

    # comparison

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SquareFreePolynomial):
            return self.n == other.n and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._t.items())))
        return self._hash

    # arithmetic

    def _coerce(self, other) -> "SquareFreePolynomial":
        if isinstance(other, SquareFreePolynomial):
            if other.n != self.n:
                raise ValueError(f"mismatched ground sets: n={self.n} vs n={other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return SquareFreePolynomial.constant(self.n, other)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            q = self._coerce(other)
        except TypeError:
            return NotImplemented
        t = dict(self._t)
        for m, c in q._t.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return SquareFreePolynomial._raw(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return SquareFreePolynomial._raw(self.n, {m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        try:
            q = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "SquareFreePolynomial":
        c = _as_fraction(c)
        if not c:
            return SquareFreePolynomial.zero(self.n)
        return SquareFreePolynomial._raw(self.n, {m: c * v for m, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SquareFreePolynomial):
            return NotImplemented
        q = self._coerce(other)
        t: dict[int, Fraction] = {}
        for m1, c1 in self._t.items():
            for m2, c2 in q._t.items():
                m = m1 | m2
                t[m] = t.get(m, 0) + c1 * c2
        return SquareFreePolynomial._raw(self.n, {m: c for m, c in t.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = SquareFreePolynomial.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    # text form

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"SquareFreePolynomial(n={self.n}, {format_poly(self)!r})"


# ---------------------------------------------------------------- operations


def add(p: SquareFreePolynomial, q: SquareFreePolynomial) -> SquareFreePolynomial:
    if p.n != q.n:
        raise ValueError(f"mismatched ground sets: n={p.n} vs n={q.n}")
    return p + q


def mul_mod_hypercube(p: SquareFreePolynomial, q: SquareFreePolynomial) -> SquareFreePolynomial:
    if p.n != q.n:
        raise ValueError(f"mismatched ground sets: n={p.n} vs n={q.n}")
    return p * q


def check_permutation(n: int, sigma: Sequence[int]) -> Permutation:
    s = tuple(int(v) for v in sigma)
    if len(s) != n or sorted(s) != list(range(1, n + 1)):
        raise ValueError(f"{s} is not a permutation of [{n}]")
    return s


@lru_cache(maxsize=4096)
def _edge_table(sigma: Permutation) -> tuple[int, ...]:
    n = len(sigma)
    idx = edge_index(n)
    return tuple(idx[canonical_edge(sigma[i - 1], sigma[j - 1])] for i, j in edge_list(n))


@lru_cache(maxsize=4096)
def _byte_tables(sigma: Permutation) -> tuple[tuple[int, ...], ...]:
    table = _edge_table(sigma)
    out = []
    for base in range(0, len(table), 8):
        chunk = table[base : base + 8]
        row = []
        for byte in range(256):
            v = 0
            for k, dst in enumerate(chunk):
                if byte >> k & 1:
                    v |= 1 << dst
            row.append(v)
        out.append(tuple(row))
    return tuple(out)


def permute_mask(sigma: Permutation, mask: int) -> int:
    out = 0
    for row in _byte_tables(sigma):
        if not mask:
            break
        out |= row[mask & 255]
        mask >>= 8
    return out


def apply_permutation(sigma: Sequence[int], p: SquareFreePolynomial) -> SquareFreePolynomial:
    """sigma . p with sigma . x_ij = x_{sigma(i) sigma(j)}; sigma[i-1] is the image of i."""
    s = check_permutation(p.n, sigma)
    return SquareFreePolynomial._raw(p.n, {permute_mask(s, m): c for m, c in p._t.items()})


def adjacent_transpositions(n: int, blocks: Iterable[Sequence[int]] | None = None) -> list[Permutation]:
    """Generators (a b) for consecutive entries a, b of each block (default: one block [n])."""
    if blocks is None:
        blocks = [list(range(1, n + 1))]
    gens = []
    for blk in blocks:
        for a, b in zip(blk, blk[1:]):
            s = list(range(1, n + 1))
            s[a - 1], s[b - 1] = b, a
            gens.append(tuple(s))
    return gens


def mask_orbit(mask: int, generators: Sequence[Permutation], cap: int = DEFAULT_ORBIT_CAP) -> set[int]:
    seen = {mask}
    queue = deque([mask])
    while queue:
        m = queue.popleft()
        for g in generators:
            m2 = permute_mask(g, m)
            if m2 not in seen:
                seen.add(m2)
                if len(seen) > cap:
                    raise ValueError(f"orbit exceeds cap {cap}")
                queue.append(m2)
    return seen


def _orbit_average(p: SquareFreePolynomial, gens: Sequence[Permutation], group_size: int | None, cap: int):
    out: dict[int, Fraction] = {}
    done: set[int] = set()
    for m in sorted(p._t, key=monomial_key):
        if m in done:
            continue
        orb = mask_orbit(m, gens, cap)
        if group_size is not None and group_size % len(orb):
            raise ValueError(f"orbit of size {len(orb)} does not divide stated group size {group_size}")
        done |= orb
        total = sum((p._t[o] for o in orb if o in p._t), Fraction(0))
        if not total:
            continue
        c = total / len(orb)
        for o in orb:
            out[o] = out.get(o, 0) + c
    return SquareFreePolynomial._raw(p.n, {m: c for m, c in out.items() if c})


def symmetrize_full(p: SquareFreePolynomial, cap: int = DEFAULT_ORBIT_CAP) -> SquareFreePolynomial:
    """Average of sigma . p over S_n via monomial orbits."""
    return _orbit_average(p, adjacent_transpositions(p.n), None, cap)


def symmetrize_subgroup(
    p: SquareFreePolynomial,
    generators: Sequence[Sequence[int]],
    group_size: int,
    cap: int = DEFAULT_ORBIT_CAP,
) -> SquareFreePolynomial:
    """Average over the subgroup generated by ``generators``.

    Orbit-stabilizer makes this the orbit average of each monomial. An orbit
    larger than ``cap`` or not dividing ``group_size`` signals misuse.
    """
    gens = [check_permutation(p.n, g) for g in generators]
    if group_size < 1:
        raise ValueError("group size must be positive")
    return _orbit_average(p, gens, group_size, cap)


# ---------------------------------------------------------------- evaluation


class CubePoint:
    """Characteristic vector 1_G of a graph G on [n]."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        self.n = n
        self.mask = mask_of(n, edges)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "CubePoint":
        x = cls(n)
        x.mask = mask
        return x

    @classmethod
    def from_bits(cls, n: int, bits: Mapping[Edge, int]) -> "CubePoint":
        if set(bits) != set(edge_list(n)):
            raise ValueError("a cube point must assign every edge of K_n")
        return cls(n, [e for e, b in bits.items() if b])

    @property
    def edges(self) -> Monomial:
        return edges_of(self.n, self.mask)

    def bit(self, i: int, j: int) -> int:
        return (self.mask >> edge_index(self.n)[canonical_edge(i, j)]) & 1

    def __eq__(self, other):
        return isinstance(other, CubePoint) and (self.n, self.mask) == (other.n, other.mask)

    def __hash__(self):
        return hash((self.n, self.mask))

    def __repr__(self):
        return f"CubePoint(n={self.n}, edges={list(self.edges)})"


def all_points(n: int) -> Iterator[CubePoint]:
    for m in range(1 << len(edge_list(n))):
        yield CubePoint.from_mask(n, m)


def evaluate(p: SquareFreePolynomial, x: CubePoint) -> Fraction:
    if p.n != x.n:
        raise ValueError(f"mismatched ground sets: n={p.n} vs n={x.n}")
    g = x.mask
    return sum((c for m, c in p._t.items() if m & g == m), Fraction(0))


# ---------------------------------------------------------------- text form


def _fmt_var(e: Edge) -> str:
    return f"x{{{e[0]},{e[1]}}}"


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: SquareFreePolynomial) -> str:
    """Canonical text: highest degree first, lexicographic within a degree."""
    if not p._t:
        return "0"
    order = sorted(p._t, key=lambda m: (-m.bit_count(), monomial_key(m)[1]))
    parts = []
    for k, m in enumerate(order):
        c = p._t[m]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        vars_ = [_fmt_var(e) for e in edges_of(p.n, m)]
        if not vars_:
            body = _fmt_coeff(a)
        elif a == 1:
            body = "*".join(vars_)
        else:
            body = "*".join([_fmt_coeff(a)] + vars_)
        if k == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(x\{\s*(\d+)\s*,\s*(\d+)\s*\})|(\d+)(?:\s*/\s*(\d+))?|([+\-*]))")


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected input at offset {pos}: {text[pos:pos + 12]!r}")
        if m.group(1):
            yield ("var", (int(m.group(2)), int(m.group(3))))
        elif m.group(4):
            den = int(m.group(5)) if m.group(5) else 1
            if den == 0:
                raise ValueError("zero denominator")
            yield ("num", Fraction(int(m.group(4)), den))
        else:
            yield ("op", m.group(6))
        pos = m.end()


def parse_poly(text: str, n: int | None = None) -> SquareFreePolynomial:
    """Parse the textual grammar; ``n`` defaults to the largest vertex mentioned."""
    toks = list(_tokens(text))
    if not toks:
        raise ValueError("empty polynomial")
    terms: list[tuple[Fraction, list[Edge]]] = []
    k = 0
    sign = 1
    if toks[0] == ("op", "-"):
        sign, k = -1, 1
    elif toks[0] == ("op", "+"):
        raise ValueError("leading '+' is not allowed")
    while True:
        if k >= len(toks):
            raise ValueError("dangling operator")
        kind, val = toks[k]
        coeff = Fraction(1)
        vs: list[Edge] = []
        if kind == "num":
            coeff = val
        elif kind == "var":
            vs.append(canonical_edge(*val))
        else:
            raise ValueError(f"term expected, found {val!r}")
        k += 1
        while k < len(toks) and toks[k] == ("op", "*"):
            if k + 1 >= len(toks) or toks[k + 1][0] != "var":
                raise ValueError("variable expected after '*'")
            vs.append(canonical_edge(*toks[k + 1][1]))
            k += 2
        terms.append((sign * coeff, vs))
        if k == len(toks):
            break
        kind, val = toks[k]
        if kind != "op" or val not in "+-":
            raise ValueError(f"'+' or '-' expected, found {val!r}")
        sign = 1 if val == "+" else -1
        k += 1
    top = max((max(e) for _, vs in terms for e in vs), default=1)
    if n is None:
        n = top
    elif top > n:
        raise ValueError(f"vertex {top} outside [{n}]")
    acc: dict[int, Fraction] = {}
    for c, vs in terms:
        m = mask_of(n, vs)
        acc[m] = acc.get(m, 0) + c
    return SquareFreePolynomial(n, acc)


def var(n: int, i: int, j: int) -> SquareFreePolynomial:
    return SquareFreePolynomial.var(n, i, j)


def const(n: int, c: Scalar) -> SquareFreePolynomial:
    return SquareFreePolynomial.constant(n, c)


def edge_sum(n: int) -> SquareFreePolynomial:
    """s = sum of all edge variables."""
    return SquareFreePolynomial(n, {1 << k: 1 for k in range(len(edge_list(n)))})
