"""Intersection types, partially labeled flags, and the flag poset."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

Pair = tuple[int, int]


def _edges(pairs: Iterable[Sequence[int]], order: int) -> tuple[Pair, ...]:
    out = set()
    for p in pairs:
        i, j = int(p[0]), int(p[1])
        if i == j:
            raise ValueError("loops are not allowed")
        if i > j:
            i, j = j, i
        if i < 1 or j > order:
            raise ValueError(f"edge {(i, j)} outside [{order}]")
        out.add((i, j))
    return tuple(sorted(out))


@dataclass(frozen=True)
class IntersectionType:
    t: int
    edges: tuple[Pair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", _edges(self.edges, self.t))

    def __str__(self) -> str:
        return f"{self.t}:" + ",".join(f"{i}-{j}" for i, j in self.edges)

    @classmethod
    def parse(cls, text: str) -> "IntersectionType":
        """Parse ``t:1-2,1-3`` (edges optional)."""
        head, _, body = text.strip().partition(":")
        pairs = [tuple(int(v) for v in tok.split("-")) for tok in body.split(",") if tok.strip()]
        if any(len(p) != 2 for p in pairs):
            raise ValueError(f"bad edge list in {text!r}")
        return cls(int(head), tuple(pairs))


@dataclass(frozen=True)
class Flag:
    """A graph on [f] whose vertices 1..t are labeled and induce the type."""

    type: IntersectionType
    f: int
    edges: tuple[Pair, ...]

    def __post_init__(self):
        if self.f < self.type.t:
            raise ValueError(f"flag size {self.f} below type size {self.type.t}")
        e = _edges(self.edges, self.f)
        object.__setattr__(self, "edges", e)
        t = self.type.t
        if tuple(p for p in e if p[1] <= t) != self.type.edges:
            raise ValueError("labeled vertices do not induce the type")

    @property
    def t(self) -> int:
        return self.type.t

    @property
    def non_edges(self) -> tuple[Pair, ...]:
        es = set(self.edges)
        return tuple(p for p in combinations(range(1, self.f + 1), 2) if p not in es)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "f": self.f,
            "type_edges": [list(p) for p in self.type.edges],
            "edges": [list(p) for p in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Flag":
        T = IntersectionType(int(data["t"]), tuple(tuple(p) for p in data["type_edges"]))
        return cls(T, int(data["f"]), tuple(tuple(p) for p in data["edges"]))

    @classmethod
    def from_json(cls, text: str) -> "Flag":
        return cls.from_dict(json.loads(text))

    def __str__(self) -> str:
        return f"Flag({self.type}; f={self.f}; " + ",".join(f"{i}-{j}" for i, j in self.edges) + ")"


def _relabel(edges: Iterable[Pair], mapping: dict[int, int]) -> tuple[Pair, ...]:
    out = []
    for i, j in edges:
        a, b = mapping.get(i, i), mapping.get(j, j)
        out.append((a, b) if a < b else (b, a))
    return tuple(sorted(out))


def canonical_form(F: Flag) -> Flag:
    """Lexicographically smallest edge list over relabelings of the unlabeled vertices."""
    free = list(range(F.t + 1, F.f + 1))
    best = F.edges
    for perm in permutations(free):
        cand = _relabel(F.edges, dict(zip(free, perm)))
        if cand < best:
            best = cand
    return Flag(F.type, F.f, best)


def is_isomorphic(F: Flag, G: Flag) -> bool:
    return F.type == G.type and F.f == G.f and canonical_form(F).edges == canonical_form(G).edges


def flag_order_key(F: Flag) -> tuple:
    return (len(F.edges), F.edges)


def enumerate_flags(T: IntersectionType, f: int) -> list[Flag]:
    """All T-flags of size f up to isomorphism, ordered by edge count then edge list."""
    if f < T.t:
        raise ValueError(f"flag size {f} below type size {T.t}")
    free_pairs = [p for p in combinations(range(1, f + 1), 2) if p[1] > T.t]
    seen = set()
    for k in range(len(free_pairs) + 1):
        for extra in combinations(free_pairs, k):
            F = canonical_form(Flag(T, f, T.edges + extra))
            seen.add(F)
    return sorted(seen, key=flag_order_key)


def pad_flag(F: Flag, f: int) -> Flag:
    """Add isolated unlabeled vertices up to size f."""
    if f < F.f:
        raise ValueError("cannot shrink a flag")
    return Flag(F.type, f, F.edges)


@dataclass(frozen=True)
class FlagPoset:
    """Every edge set on [f] containing E(T), ordered by containment.

    Isomorphic duplicates are kept on purpose; elements are plain graphs on
    [f] stored as sorted edge tuples.
    """

    type: IntersectionType
    f: int
    elements: tuple[tuple[Pair, ...], ...]

    def rank(self, element: Sequence[Pair]) -> int:
        return len(element)

    def __len__(self) -> int:
        return len(self.elements)

    def above(self, edges: Sequence[Pair]) -> list[tuple[Pair, ...]]:
        base = set(edges)
        return [e for e in self.elements if base <= set(e)]


def flag_poset(T: IntersectionType, f: int) -> FlagPoset:
    if f < T.t:
        raise ValueError(f"flag size {f} below type size {T.t}")
    free = [p for p in combinations(range(1, f + 1), 2) if p not in set(T.edges)]
    elems = []
    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            elems.append(tuple(sorted(T.edges + extra)))
    elems.sort(key=lambda e: (len(e), e))
    return FlagPoset(T, f, tuple(elems))


def mobius_coefficients(F: Flag | Sequence[Pair], P: FlagPoset) -> dict[tuple[Pair, ...], int]:
    """(-1)^{|E(F')| - |E(F)|} for every F' above F in P."""
    edges = tuple(sorted(F.edges if isinstance(F, Flag) else _edges(F, P.f)))
    if isinstance(F, Flag) and F.f != P.f:
        raise ValueError("flag size differs from the poset")
    if edges not in set(P.elements):
        raise ValueError("flag is not an element of the poset")
    return {e: (-1) ** (len(e) - len(edges)) for e in P.above(edges)}


def all_types(t: int) -> list[IntersectionType]:
    """Every labeled graph on [t] (no isomorphism reduction)."""
    pairs = list(combinations(range(1, t + 1), 2))
    out = []
    for k in range(len(pairs) + 1):
        for es in combinations(pairs, k):
            out.append(IntersectionType(t, es))
    return out


def type_canonical(T: IntersectionType) -> IntersectionType:
    """Representative of T under relabeling by S_t."""
    best = T.edges
    for perm in permutations(range(1, T.t + 1)):
        cand = _relabel(T.edges, dict(zip(range(1, T.t + 1), perm)))
        if (len(cand), cand) < (len(best), best):
            best = cand
    return IntersectionType(T.t, best)
