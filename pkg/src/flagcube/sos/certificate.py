"""Flag-SOS certificates: JSON form and exact verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from flagcube.exact import LDL, NotPSD, ldl_psd
from flagcube.flagpoly import flag_poly
from flagcube.flags import Flag, IntersectionType
from flagcube.qpoly import SquareFreePolynomial, symmetrize_full
from flagcube.shapes import identity_theta
from flagcube.sos.ideal import IdealSpec, class_values, variety

PSD_FAIL = "psd witness failed"
IDENTITY_FAIL = "identity residue nonzero"
SIZE_FAIL = "flag size bound violated"


def _q(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def _unq(p: Sequence[int]) -> Fraction:
    return Fraction(int(p[0]), int(p[1]))


@dataclass(frozen=True)
class CertBlock:
    t: int
    type: IntersectionType | None  # None for a g-variant block holding every type of size t
    flags: tuple[Flag, ...]
    R: tuple[tuple[Fraction, ...], ...]
    ldl: LDL | None = None

    def to_dict(self) -> dict:
        ty = {"t": self.t} if self.type is None else {"t": self.t, "edges": [list(p) for p in self.type.edges]}
        out = {"type": ty, "flags": [F.to_dict() for F in self.flags], "R": [[_q(v) for v in row] for row in self.R]}
        if self.ldl is not None:
            out["ldl"] = {
                "perm": list(self.ldl.perm),
                "L": [[_q(v) for v in row] for row in self.ldl.L],
                "D": [_q(v) for v in self.ldl.D],
            }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CertBlock":
        ty = data["type"]
        t = int(ty["t"])
        T = IntersectionType(t, tuple(tuple(p) for p in ty["edges"])) if "edges" in ty else None
        flags = tuple(Flag.from_dict(F) for F in data["flags"])
        R = tuple(tuple(_unq(v) for v in row) for row in data["R"])
        ldl = None
        if "ldl" in data:
            w = data["ldl"]
            ldl = LDL(
                tuple(int(p) for p in w["perm"]),
                tuple(tuple(_unq(v) for v in row) for row in w["L"]),
                tuple(_unq(v) for v in w["D"]),
            )
        return cls(t, T, flags, R, ldl)


@dataclass(frozen=True)
class FlagSosCertificate:
    n: int
    d: int
    variant: str
    ideal: IdealSpec
    blocks: tuple[CertBlock, ...]
    flag_size: int | None = None  # f_max when it differs from 2d

    @property
    def f_max(self) -> int:
        return 2 * self.d if self.flag_size is None else self.flag_size

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "variant": self.variant,
            "ideal": self.ideal.to_dict(),
            "blocks": [b.to_dict() for b in self.blocks],
        }
        if self.flag_size is not None:
            out["flag_size"] = self.flag_size
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "FlagSosCertificate":
        return cls(
            int(data["n"]),
            int(data["d"]),
            str(data["variant"]),
            IdealSpec.from_dict(data["ideal"]),
            tuple(CertBlock.from_dict(b) for b in data["blocks"]),
            int(data["flag_size"]) if "flag_size" in data else None,
        )

    @classmethod
    def from_json(cls, text: str) -> "FlagSosCertificate":
        return cls.from_dict(json.loads(text))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "FlagSosCertificate":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def make_block(t: int, T: IntersectionType | None, flags: Sequence[Flag], R: Sequence[Sequence]) -> CertBlock:
    """Block with its LDL^T witness attached (raises if R is not psd)."""
    Rq = tuple(tuple(Fraction(v) for v in row) for row in R)
    w = ldl_psd(Rq)
    if isinstance(w, NotPSD):
        raise ValueError(f"matrix is not psd: v^T R v = {w.value}")
    return CertBlock(t, T, tuple(flags), Rq, w)


# ---------------------------------------------------------------- verification


@dataclass
class VerifyResult:
    ok: bool
    psd_ok: bool
    identity_ok: bool
    size_ok: bool
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "certificate verified"
        return "; ".join(self.diagnostics)


def psd_check_exact(M: Sequence[Sequence]) -> LDL | NotPSD:
    return ldl_psd(M)


def _check_witness(blk: CertBlock) -> str | None:
    k = len(blk.R)
    if any(len(row) != k for row in blk.R):
        return "R is not square"
    w = ldl_psd(blk.R)
    if isinstance(w, NotPSD):
        return f"v^T R v = {w.value} < 0 for v = {[str(x) for x in w.vector]}"
    if blk.ldl is not None:
        L, D, perm = blk.ldl.L, blk.ldl.D, blk.ldl.perm
        if sorted(perm) != list(range(k)) or len(D) != k or len(L) != k:
            return "stored LDL^T has the wrong shape"
        for i in range(k):
            if L[i][i] != 1 or any(L[i][j] for j in range(i + 1, k)):
                return "stored L is not unit lower triangular"
        if any(x < 0 for x in D):
            return "stored D has a negative entry"
        # the factorization is unique for our pivot rule; anything else is multiplied out
        if blk.ldl != w and blk.ldl.reconstruct() != [list(r) for r in blk.R]:
            return "stored LDL^T does not reproduce R"
    return None


def _block_quadratic(blk: CertBlock, n: int, kind: str) -> SquareFreePolynomial:
    """sum_ij R_ij p_i p_j at the identity labeling."""
    th = identity_theta(n, blk.t)
    polys = [flag_poly(F, th, n, kind) for F in blk.flags]
    out = SquareFreePolynomial.zero(n)
    for i, p in enumerate(polys):
        row = SquareFreePolynomial.zero(n)
        for j, q in enumerate(polys):
            if blk.R[i][j]:
                row = row + q.scale(blk.R[i][j])
        if not row.is_zero():
            out = out + p * row
    return out


def certificate_polynomial(cert: FlagSosCertificate) -> SquareFreePolynomial:
    """sum_T tr(R_T E_Theta[p p^T]) as a square-free polynomial."""
    total = SquareFreePolynomial.zero(cert.n)
    for blk in cert.blocks:
        total = total + _block_quadratic(blk, cert.n, cert.variant)
    return symmetrize_full(total)


def _poly_values(p: SquareFreePolynomial, points: np.ndarray) -> np.ndarray:
    """Exact integer values of an integer-coefficient polynomial at point masks."""
    out = np.zeros(len(points), dtype=np.int64)
    for m, c in p.mask_terms.items():
        if c.denominator != 1:
            raise ValueError("flag polynomial with non-integer coefficient")
        out += int(c) * ((points & m) == m)
    return out


def certificate_class_values(cert: FlagSosCertificate, ideal: IdealSpec) -> list[Fraction]:
    """Class values of sum_T tr(R_T E_Theta[p p^T]) on the variety, from symbolic flag polynomials."""
    V = variety(ideal)
    if not len(V):
        return []
    order = sorted(V.points, key=lambda g: (V.class_of[g], g))
    pts = np.array(order, dtype=np.int64)
    cls = np.array([V.class_of[g] for g in order])
    starts = np.flatnonzero(np.r_[True, cls[1:] != cls[:-1]])
    sizes = np.diff(np.r_[starts, len(order)])
    vals = [Fraction(0)] * len(V.reps)
    for blk in cert.blocks:
        th = identity_theta(cert.n, blk.t)
        P = [_poly_values(flag_poly(F, th, cert.n, cert.variant), pts) for F in blk.flags]
        k = len(P)
        for i in range(k):
            for j in range(k):
                r = blk.R[i][j]
                if not r:
                    continue
                sums = np.add.reduceat(P[i] * P[j], starts)
                for c in range(len(starts)):
                    if sums[c]:
                        vals[c] += r * Fraction(int(sums[c]), int(sizes[c]))
    return vals


def identity_residue(cert: FlagSosCertificate, target: SquareFreePolynomial, ideal: IdealSpec) -> list[str]:
    """Descriptions of where sum_T tr(R_T Z_T) - target fails to vanish modulo the ideal."""
    if ideal.kind == "hypercube":
        res = certificate_polynomial(cert) - target
        if res.is_zero():
            return []
        return [f"residue polynomial has {len(res)} terms, e.g. {next(iter(res.terms.items()))}"]
    got = certificate_class_values(cert, ideal)
    want = class_values(target, ideal)
    bad = [(c, g - w) for c, (g, w) in enumerate(zip(got, want)) if g != w]
    return [f"variety class {c}: residue {r}" for c, r in bad[:5]] + ([f"... {len(bad)} classes in total"] if len(bad) > 5 else [])


def verify_certificate(cert: FlagSosCertificate, target: SquareFreePolynomial, ideal: IdealSpec) -> VerifyResult:
    diags: list[str] = []
    size_ok = psd_ok = identity_ok = True
    if not (cert.n == target.n == ideal.n):
        return VerifyResult(False, False, False, False, ["ground sets of certificate, target and ideal differ"])
    fmax = cert.f_max
    for k, blk in enumerate(cert.blocks):
        for F in blk.flags:
            if F.f > fmax or F.f > cert.n:
                size_ok = False
                diags.append(f"{SIZE_FAIL}: block {k} has a flag of size {F.f} > {fmax}")
                break
            if F.t != blk.t or (blk.type is not None and F.type != blk.type):
                size_ok = False
                diags.append(f"{SIZE_FAIL}: block {k} holds a flag of a different type")
                break
        if len(blk.R) != len(blk.flags):
            psd_ok = False
            diags.append(f"{PSD_FAIL}: block {k} matrix size differs from its flag count")
            continue
        msg = _check_witness(blk)
        if msg is not None:
            psd_ok = False
            diags.append(f"{PSD_FAIL}: block {k}: {msg}")
    if cert.variant not in ("d", "g"):
        return VerifyResult(False, psd_ok, False, size_ok, diags + [f"unknown variant {cert.variant!r}"])
    evaluable = all(len(b.R) == len(b.flags) and all(F.f <= cert.n and F.t == b.t for F in b.flags) for b in cert.blocks)
    if evaluable:
        res = identity_residue(cert, target, ideal)
        if res:
            identity_ok = False
            diags.append(f"{IDENTITY_FAIL}: " + "; ".join(res))
    else:
        identity_ok = False
        diags.append(f"{IDENTITY_FAIL}: not evaluated (malformed blocks)")
    return VerifyResult(psd_ok and identity_ok and size_ok, psd_ok, identity_ok, size_ok, diags)
