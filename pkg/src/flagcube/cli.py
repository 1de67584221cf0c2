"""Command-line front end: ``flagcube <subcommand> ...``.

Exit codes: 0 success (certified, verified, all claims pass), 1 negative
outcome, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from math import comb

from flagcube.flags import IntersectionType, enumerate_flags
from flagcube.qpoly import SquareFreePolynomial, parse_poly
from flagcube.repn import MAX_D, MAX_N, isotypic_report
from flagcube.shapes import enumerate_lambda
from flagcube.sos.assemble import MATRIX_SIZE_CAP, assemble
from flagcube.sos.certificate import FlagSosCertificate, verify_certificate
from flagcube.sos.ideal import VARIETY_BITS_CAP, IdealSpec, parse_ideal
from flagcube.sos.rationalize import DENOMINATOR_BOUND

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2
SHIPPED = {"ramsey33-d": "ramsey33_d.json", "ramsey33-g": "ramsey33_g.json"}


class UsageError(Exception):
    pass


@dataclass
class Config:
    variety_bits: int = VARIETY_BITS_CAP
    matrix_size: int = MATRIX_SIZE_CAP
    repn_n: int = MAX_N
    repn_d: int = MAX_D
    tol: float = 1e-8
    threads: int = 1

    def __post_init__(self):
        for name in ("variety_bits", "matrix_size", "repn_n", "repn_d", "threads"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name} must be positive")
        if not 0 < self.tol <= 1e-2:
            raise UsageError("tolerance must lie in (0, 1e-2]")

    @classmethod
    def from_args(cls, args) -> "Config":
        env = os.environ.get("FLAGCUBE_THREADS", "1")
        try:
            threads = int(env)
        except ValueError:
            raise UsageError(f"FLAGCUBE_THREADS={env!r} is not an integer") from None
        return cls(args.max_variety_bits, args.max_matrix, MAX_N, MAX_D, args.tol, threads)


def _read_target(args) -> SquareFreePolynomial:
    if (args.poly is None) == (args.target is None):
        raise UsageError("give exactly one of --poly FILE or --target EXPR")
    if args.poly is not None:
        with open(args.poly, encoding="utf-8") as fh:
            text = " ".join(ln.split("#", 1)[0] for ln in fh).strip()
    else:
        text = args.target
    return parse_poly(text, args.n)


def _ideal(spec: str, n: int, cfg: Config) -> IdealSpec:
    ideal = parse_ideal(spec, n)
    if ideal.kind != "hypercube" and comb(n, 2) > cfg.variety_bits:
        raise UsageError(f"variety enumeration needs C({n},2) = {comb(n, 2)} <= {cfg.variety_bits} bits")
    return ideal


def _load_cert(path: str) -> FlagSosCertificate:
    if path.startswith("shipped:"):
        name = path[8:]
        if name not in SHIPPED:
            raise UsageError(f"unknown shipped certificate {name!r}; have {', '.join(SHIPPED)}")
        return FlagSosCertificate.from_json(resources.files("flagcube.data").joinpath(SHIPPED[name]).read_text("utf-8"))
    return FlagSosCertificate.load(path)


# ---------------------------------------------------------------- commands


def cmd_flags(args, cfg: Config) -> int:
    T = IntersectionType.parse(args.type)
    flags = enumerate_flags(T, args.size)
    for F in flags:
        print(json.dumps(F.to_dict(), separators=(",", ":")))
    print(f"{len(flags)} flags of type {T} and size {args.size}")
    return EXIT_OK


def cmd_lambda(args, cfg: Config) -> int:
    lams = enumerate_lambda(args.n, args.d)
    for lam in lams:
        print(lam)
    print(f"{len(lams)} partitions")
    return EXIT_OK


def cmd_isotypic(args, cfg: Config) -> int:
    if args.n > cfg.repn_n or args.d > cfg.repn_d:
        raise UsageError(f"isotypic report is capped at n <= {cfg.repn_n}, d <= {cfg.repn_d}")
    rep = isotypic_report(args.n, args.d, all_partitions=not args.only_lambda)
    if args.json:
        sys.stdout.write(rep.to_json())
    else:
        for r in rep.rows:
            print(f"{r['lambda']:>16}  n_lambda={r['n_lambda']:<4} m_lambda={r['m_lambda']}")
        print(f"sum m_lambda n_lambda = {rep.total}")
    return EXIT_OK


def cmd_certify(args, cfg: Config) -> int:
    from flagcube.sos.pipeline import CertifyResult, certify_numeric, finish
    from flagcube.sos.sdpa import export_sdpa, read_sdpa_result, scatter_blocks
    from flagcube.sos.solve import solve_internal

    target = _read_target(args)
    ideal = _ideal(args.ideal, target.n, cfg)
    problem = assemble(
        target, args.d, ideal, args.variant, flag_size=args.flag_size, size_cap=cfg.matrix_size, max_edges=args.max_edges
    )
    if args.sdpa_out:
        export_sdpa(problem, args.sdpa_out)
        print(f"wrote {args.sdpa_out}")
    if args.sdpa_in:
        blocks = scatter_blocks(problem, read_sdpa_result(args.sdpa_in))
        result = certify_numeric(problem, blocks)
    else:
        red, numeric, report = solve_internal(problem, tol=cfg.tol)
        report.log = problem.log + report.log
        if report.status == "numerically_feasible_only":
            result = finish(problem, numeric, red, report, args.denominator_bound)
        else:
            result = CertifyResult(problem, None, report)
    if args.verbose:
        for line in result.report.log:
            print(f"  {line}")
    print(f"status: {result.status}")
    if result.certificate is None:
        return EXIT_NO
    if args.out:
        result.certificate.save(args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    cert = _load_cert(args.cert)
    args.n = args.n or cert.n
    target = _read_target(args)
    ideal = _ideal(args.ideal, target.n, cfg) if args.ideal else cert.ideal
    res = verify_certificate(cert, target, ideal)
    print(res.summary())
    return EXIT_OK if res.ok else EXIT_NO


def cmd_repro(args, cfg: Config) -> int:
    from flagcube.repro import REPRO_NAMES, run_repro

    if args.name not in REPRO_NAMES:
        raise UsageError(f"unknown reproduction {args.name!r}; choose from {', '.join(REPRO_NAMES)}")
    res = run_repro(args.name)
    print(res.text())
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(res.to_json() + "\n")
    return EXIT_OK if res.ok else EXIT_NO


def cmd_export_sdpa(args, cfg: Config) -> int:
    from flagcube.sos.sdpa import export_sdpa

    target = _read_target(args)
    ideal = _ideal(args.ideal, target.n, cfg)
    problem = assemble(
        target, args.d, ideal, args.variant, flag_size=args.flag_size, size_cap=cfg.matrix_size, max_edges=args.max_edges
    )
    sp = export_sdpa(problem, args.out)
    print(f"wrote {args.out}: {sp.m} constraints, blocks {sp.block_sizes}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _target_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--poly", help="file holding the target polynomial ('#' starts a comment)")
    p.add_argument("--target", help="target polynomial inline, e.g. --target='1 - x{1,2}'")
    p.add_argument("--n", type=int, help="number of vertices (default: largest one mentioned)")


def _problem_opts(p: argparse.ArgumentParser) -> None:
    _target_opts(p)
    p.add_argument("--d", type=int, required=True, help="degree")
    p.add_argument("--ideal", default="hypercube", help="hypercube | c4free | ramsey33 | file:<path>")
    p.add_argument("--variant", choices=("d", "g"), default="d")
    p.add_argument("--flag-size", type=int, help="flag size (default 2d; min(n, t+2d) covers every isotypic piece)")
    p.add_argument("--max-edges", type=int, help="g variant only: keep flags with at most this many edges")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flagcube", description="Flag sum-of-squares certificates on the edge hypercube.")
    ap.add_argument("--max-variety-bits", type=int, default=VARIETY_BITS_CAP)
    ap.add_argument("--max-matrix", type=int, default=MATRIX_SIZE_CAP)
    ap.add_argument("--tol", type=float, default=1e-8, help="interior-point tolerance")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("flags", help="list T-flags of a given size")
    p.add_argument("--type", required=True, help='intersection type, e.g. "3:1-2,1-3"')
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(func=cmd_flags)

    p = sub.add_parser("lambda", help="partitions that can carry multiplicity at degree d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("isotypic-report", help="multiplicities m_lambda and W bases")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--only-lambda", action="store_true", help="restrict to the partitions of 'lambda'")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_isotypic)

    p = sub.add_parser("certify", help="search for a flag-SOS certificate")
    _problem_opts(p)
    p.add_argument("--out", help="write the certificate JSON here")
    p.add_argument("--sdpa-out", help="also write the SDP in SDPA sparse format")
    p.add_argument("--sdpa-in", help="use the yMat of an SDPA .result file instead of the internal solver")
    p.add_argument("--denominator-bound", type=int, default=DENOMINATOR_BOUND)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="exact check of a certificate JSON")
    p.add_argument("cert", help="certificate file, or shipped:ramsey33-d / shipped:ramsey33-g")
    _target_opts(p)
    p.add_argument("--ideal", help="hypercube | c4free | ramsey33 | file:<path> (default: the ideal stored in the certificate)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repro", help="run a reproduction and print its claims")
    p.add_argument("name", help="ramsey33 | c4:5 | c4:6 | c4:7 | grigoriev:4")
    p.add_argument("--json", help="write the machine-readable result here")
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("export-sdpa", help="write the SDP in SDPA sparse format")
    _problem_opts(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_sdpa)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = Config.from_args(args)
        return args.func(args, cfg)
    except (UsageError, ValueError, OSError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
