"""Partitions, Young tableaux, row groups, hook tableaux and Theta labelings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product
from math import factorial, prod
from typing import Iterator

from flagcube.qpoly import Permutation, adjacent_transpositions

ROW_GROUP_MATERIALIZE_CAP = 10**4


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(v) for v in self.parts)
        if any(v <= 0 for v in p) or any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"{p} is not a partition")
        object.__setattr__(self, "parts", p)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, k: int) -> int:
        return self.parts[k]

    def __str__(self) -> str:
        return f"{self.n}=" + "+".join(map(str, self.parts)) if self.parts else "0="

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``6=4+1+1``; the ``n=`` prefix is optional."""
        text = text.strip()
        total = None
        if "=" in text:
            head, text = text.split("=", 1)
            total = int(head)
        parts = tuple(int(v) for v in text.split("+")) if text.strip() else ()
        lam = cls(tuple(sorted(parts, reverse=True)))
        if lam.parts != parts:
            raise ValueError("parts must be weakly decreasing")
        if total is not None and total != lam.n:
            raise ValueError(f"parts sum to {lam.n}, not {total}")
        return lam


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n in descending lexicographic order."""

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for p in rec(n, n if max_part is None else max_part):
        yield Partition(p)


def enumerate_lambda(n: int, d: int) -> list[Partition]:
    """Partitions of n that are lexicographically at least (n-2d, 1^{2d})."""
    if d < 0 or n < 2 * d:
        raise ValueError(f"need n >= 2d >= 0, got n={n}, d={d}")
    floor = (n - 2 * d,) + (1,) * (2 * d) if n > 2 * d else (1,) * n
    return [lam for lam in partitions(n) if lam.parts >= floor]


def hook_length_dimension(lam: Partition) -> int:
    n = lam.n
    conj = [sum(1 for r in lam.parts if r > c) for c in range(lam.parts[0])] if lam.parts else []
    hooks = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return factorial(n) // hooks


@dataclass(frozen=True)
class Tableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        Partition(tuple(len(r) for r in rows))
        labels = sorted(v for r in rows for v in r)
        if labels != list(range(1, len(labels) + 1)):
            raise ValueError(f"labels {labels} do not fill [n] bijectively")

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.rows], separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Tableau":
        return cls(tuple(tuple(r) for r in json.loads(text)))


def is_standard(tau: Tableau) -> bool:
    rows = tau.rows
    for r in rows:
        if any(a >= b for a, b in zip(r, r[1:])):
            return False
    for upper, lower in zip(rows, rows[1:]):
        if any(upper[j] >= lower[j] for j in range(len(lower))):
            return False
    return True


def standard_tableaux(lam: Partition) -> Iterator[Tableau]:
    """Standard tableaux of shape lam, by placing n, n-1, ... at removable corners."""
    parts = list(lam.parts)

    def rec(shape: list[int], filling: dict[tuple[int, int], int], label: int):
        if label == 0:
            yield Tableau(tuple(tuple(filling[(i, j)] for j in range(parts[i])) for i in range(len(parts))))
            return
        for i, row in enumerate(shape):
            if row and (i + 1 == len(shape) or shape[i + 1] < row):
                shape[i] -= 1
                filling[(i, row - 1)] = label
                yield from rec(shape, filling, label - 1)
                del filling[(i, row - 1)]
                shape[i] += 1

    yield from sorted(rec(parts[:], {}, lam.n), key=lambda t: t.rows)


def all_tableaux(lam: Partition) -> Iterator[Tableau]:
    """Every filling of lam with [n] (n! of them); intended for small oracles."""
    for perm in permutations(range(1, lam.n + 1)):
        rows, k = [], 0
        for r in lam.parts:
            rows.append(perm[k : k + r])
            k += r
        yield Tableau(tuple(rows))


def hook_of(tau: Tableau) -> Tableau:
    first = tau.rows[0] if tau.rows else ()
    rest = sorted(v for r in tau.rows[1:] for v in r)
    return Tableau((first,) + tuple((v,) for v in rest))


@dataclass(frozen=True)
class ThetaLabeling:
    """Injection Theta: [t] -> [n]; images[i-1] = Theta(i)."""

    images: tuple[int, ...]
    n: int

    def __post_init__(self):
        imgs = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", imgs)
        if len(set(imgs)) != len(imgs):
            raise ValueError("Theta must be injective")
        if any(not 1 <= v <= self.n for v in imgs):
            raise ValueError(f"Theta images must lie in [{self.n}]")

    @property
    def t(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]


def theta_of(tau: Tableau) -> ThetaLabeling:
    first = set(tau.rows[0]) if tau.rows else set()
    return ThetaLabeling(tuple(v for v in range(1, tau.n + 1) if v not in first), tau.n)


def identity_theta(n: int, t: int) -> ThetaLabeling:
    return ThetaLabeling(tuple(range(1, t + 1)), n)


def row_group(tau: Tableau) -> tuple[list[Permutation], int]:
    """Generators (adjacent transpositions inside each row) and the exact order."""
    gens = adjacent_transpositions(tau.n, tau.rows)
    return gens, prod(factorial(len(r)) for r in tau.rows)


def materialize_row_group(tau: Tableau, cap: int = ROW_GROUP_MATERIALIZE_CAP) -> list[Permutation]:
    size = prod(factorial(len(r)) for r in tau.rows)
    if size > cap:
        raise ValueError(f"row group of order {size} exceeds cap {cap}")
    n = tau.n
    out = []
    for choice in product(*(permutations(r) for r in tau.rows)):
        s = list(range(1, n + 1))
        for row, img in zip(tau.rows, choice):
            for a, b in zip(row, img):
                s[a - 1] = b
        out.append(tuple(s))
    return out


def hook_tableau(n: int, theta: ThetaLabeling) -> Tableau:
    """hook^Theta: Theta([t]) sorted in the tail, the rest sorted in row 1."""
    tail = sorted(theta.images)
    first = tuple(v for v in range(1, n + 1) if v not in set(tail))
    return Tableau((first,) + tuple((v,) for v in tail))
