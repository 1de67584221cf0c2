"""SDPA sparse format (.dat-s) export, parse-back, and .result reading.

The flag-SOS feasibility problem  <A_c, R> = b_c, R psd  is written in the
SDPA dual form  F_c . Y = c_c, Y psd  with F_c = A_c, c_c = b_c and F0 = 0.
A constant objective makes every feasible Y optimal, so an interior-point
solver returns a point near the analytic center, which rounds well.

Each constraint row is multiplied by a positive integer so that all entries
are integers; the multipliers are recorded in a comment line, which lets
``read_sdpa`` recover the rational rows exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from flagcube.exact import Matrix, independent_rows
from flagcube.sos.assemble import FlagSosProblem
from flagcube.sos.solve import _vec


@dataclass
class SdpaProblem:
    """Block sizes, constraint matrices F[c][k] (rational), right-hand side c."""

    block_sizes: list[int]
    F: list[list[Matrix]]
    c: list[Fraction]
    rows: list[int]  # indices of the assembled coordinates kept
    scales: list[int]  # integer multiplier applied to each row in the file

    @property
    def m(self) -> int:
        return len(self.c)


def _lcm(values) -> int:
    out = 1
    for v in values:
        q = Fraction(v).denominator
        out = out * q // gcd(out, q)
    return out


def sdpa_problem(problem: FlagSosProblem) -> SdpaProblem:
    """Blocks as assembled (one per type, empty blocks dropped) and an independent set of rows."""
    keep_blocks = [k for k, s in enumerate(problem.block_sizes) if s]
    rows = independent_rows([_vec(m) for m in problem.A])
    F = [[problem.A[c][k] for k in keep_blocks] for c in rows]
    b = [problem.b[c] for c in rows]
    scales = []
    for mats, bc in zip(F, b):
        vals = [v for M in mats for row in M for v in row if v] + ([bc] if bc else [])
        scales.append(_lcm(vals))
    return SdpaProblem([problem.block_sizes[k] for k in keep_blocks], F, b, rows, scales)


def _fmt(q: Fraction) -> str:
    if q.denominator != 1:
        raise ValueError("non-integer entry after row scaling")
    return str(q.numerator)


def format_sdpa(sp: SdpaProblem, title: str = "flagcube") -> str:
    lines = [f'"{title}"', f"* scales {' '.join(str(s) for s in sp.scales)}"]
    lines.append(str(sp.m))
    lines.append(str(len(sp.block_sizes)))
    lines.append(" ".join(str(s) for s in sp.block_sizes))
    lines.append(" ".join(_fmt(b * s) for b, s in zip(sp.c, sp.scales)) if sp.m else "")
    for c, (mats, s) in enumerate(zip(sp.F, sp.scales), start=1):
        for k, M in enumerate(mats, start=1):
            for i in range(len(M)):
                for j in range(i, len(M)):
                    if M[i][j]:
                        lines.append(f"{c} {k} {i + 1} {j + 1} {_fmt(M[i][j] * s)}")
    return "\n".join(lines) + "\n"


def export_sdpa(problem: FlagSosProblem, path: str, title: str = "flagcube") -> SdpaProblem:
    sp = sdpa_problem(problem)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_sdpa(sp, title))
    return sp


def _num(tok: str) -> Fraction:
    return Fraction(tok)


def parse_sdpa(text: str) -> SdpaProblem:
    """Inverse of ``format_sdpa``; without a scales comment the rows are taken as written."""
    scales: list[int] | None = None
    body = []
    for ln in text.splitlines():
        s = ln.strip()
        if s.startswith("* scales"):
            scales = [int(v) for v in s.split()[2:]]
            continue
        if not s or s[0] in "\"*":
            continue
        body.append(s)
    toks = " ".join(re.sub(r"[{}(),]", " ", b) for b in body).split()
    m, nb = int(toks[0]), int(toks[1])
    sizes = [abs(int(v)) for v in toks[2:2 + nb]]
    pos = 2 + nb
    c = [_num(v) for v in toks[pos:pos + m]]
    pos += m
    F = [[[[Fraction(0)] * s for _ in range(s)] for s in sizes] for _ in range(m)]
    F0 = [[[Fraction(0)] * s for _ in range(s)] for s in sizes]
    rest = toks[pos:]
    if len(rest) % 5:
        raise ValueError("truncated entry line")
    for q in range(0, len(rest), 5):
        mat, blk, i, j = (int(v) for v in rest[q:q + 4])
        v = _num(rest[q + 4])
        M = F0[blk - 1] if mat == 0 else F[mat - 1][blk - 1]
        M[i - 1][j - 1] = M[j - 1][i - 1] = v
    if any(v for M in F0 for row in M for v in row):
        raise ValueError("nonzero F0 is not a flag-SOS feasibility problem")
    if scales is None:
        scales = [1] * m
    if len(scales) != m:
        raise ValueError("scales comment does not match the constraint count")
    F = [[[[v / s for v in row] for row in M] for M in mats] for mats, s in zip(F, scales)]
    c = [v / s for v, s in zip(c, scales)]
    return SdpaProblem(sizes, F, c, list(range(m)), scales)


def read_sdpa(path: str) -> SdpaProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_sdpa(fh.read())


# ---------------------------------------------------------------- .result files


def _braces(text: str, start: int):
    """Parse one nested-brace list beginning at ``text[start] == '{'``; returns (value, end)."""
    assert text[start] == "{"
    out: list = []
    k = start + 1
    num = re.compile(r"\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)")
    while True:
        while k < len(text) and text[k] in " \t\r\n,":
            k += 1
        if k >= len(text):
            raise ValueError("unbalanced braces")
        ch = text[k]
        if ch == "}":
            return out, k + 1
        if ch == "{":
            val, k = _braces(text, k)
            out.append(val)
            continue
        m = num.match(text, k)
        if not m:
            raise ValueError(f"unexpected text near {text[k:k + 20]!r}")
        out.append(float(m.group(1)))
        k = m.end()


def parse_sdpa_result(text: str, which: str = "yMat") -> list[np.ndarray]:
    """Blocks of ``yMat`` (our R) or ``xMat`` from an SDPA .result file."""
    m = re.search(rf"^\s*{which}\s*=", text, re.M)
    if not m:
        raise ValueError(f"no {which} section")
    k = text.index("{", m.end())
    val, _ = _braces(text, k)
    out = []
    for blk in val:
        if blk and isinstance(blk[0], list):
            out.append(np.array(blk, dtype=float))
        else:
            out.append(np.diag(np.array(blk, dtype=float)))
    return out


def read_sdpa_result(path: str, which: str = "yMat") -> list[np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        return parse_sdpa_result(fh.read(), which)


def format_sdpa_result(blocks: Sequence[np.ndarray]) -> str:
    """Minimal .result text holding ``yMat`` (used to feed numeric blocks back in)."""

    def mat(B):
        return "{ " + ", ".join("{" + ",".join(repr(float(v)) for v in row) + "}" for row in np.atleast_2d(B)) + " }"

    body = "\n".join(mat(B) for B in blocks)
    return f"objValPrimal = 0\nobjValDual = 0\nyMat = \n{{\n{body}\n}}\n"


def scatter_blocks(problem: FlagSosProblem, blocks: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Reinsert the empty blocks dropped on export."""
    it = iter(blocks)
    out = []
    for s in problem.block_sizes:
        out.append(np.asarray(next(it), dtype=float) if s else np.zeros((0, 0)))
    if next(it, None) is not None:
        raise ValueError("more result blocks than problem blocks")
    return out
