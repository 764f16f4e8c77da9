"""Command-line interface.

Exit codes: 0 on success, 1 on domain errors (bad input, unsupported
prime, unreadable corpus), 2 when an internal invariant is violated.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from sympy import isprime, primerange

from . import abelian, corpus as corpus_mod, tau as tau_mod
from .errors import DomainError, InvariantAlarm, Tau3Error

log = logging.getLogger("tau3p")

DEFAULT_TABLE_RANGE = "5..443"


def parse_primes(text: str) -> list[int]:
    """``"5..443"``, ``"5-443"`` or a comma list such as ``"59,101,167"``."""
    text = text.strip()
    if not text:
        return []
    for sep in ("..", "-"):
        if sep in text:
            lo, hi = (int(x) for x in text.split(sep, 1))
            primes = list(primerange(lo, hi + 1))
            break
    else:
        primes = [int(x) for x in text.split(",") if x.strip()]
        bad = [q for q in primes if not isprime(q)]
        if bad:
            raise DomainError(f"not prime: {bad}")
    small = [q for q in primes if q < 5]
    if small:
        raise DomainError(f"primes below 5 are not supported: {small}")
    return primes


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _corpus(args) -> corpus_mod.Corpus:
    return corpus_mod.load_or_build_corpus(args.corpus, workers=args.workers)


def cmd_enumerate(args) -> int:
    c = corpus_mod.build_corpus(args.length_max, args.measure_max, args.workers)
    out = args.out or corpus_mod.default_corpus_path(args.length_max, args.measure_max)
    corpus_mod.save_corpus(c, out)
    if args.text:
        corpus_mod.export_corpus_text(c, args.text)
    print(f"{len(c)} polynomials -> {out}")
    return 0


def cmd_tau(args) -> int:
    if args.prime is not None:
        primes = parse_primes(str(args.prime))
    else:
        primes = parse_primes(args.prime_range)
    c = _corpus(args)
    _write(tau_mod.emit_table(primes, c, args.format, args.precision), None)
    return 0


def cmd_table(args) -> int:
    c = _corpus(args)
    _write(tau_mod.emit_table(parse_primes(args.range), c, args.format, args.precision), args.out)
    return 0


def cmd_abelian(args) -> int:
    records = abelian.build_abelian_table(_corpus(args))
    text = abelian.abelian_csv(records) if args.format == "csv" else abelian.abelian_text(records)
    _write(text, args.out)
    return 0


def cmd_verify_bound(args) -> int:
    records = abelian.build_abelian_table(_corpus(args))
    cert = abelian.verify_global_bound(records)
    print(f"modulus {cert.modulus}: all {len(cert.assignments)} unit classes covered")
    for r, (poly, h) in sorted(cert.assignments.items()):
        print(f"  {r:>3}  {tau_mod.format_height(h)}  {poly}")
    for q, (poly, h) in sorted(cert.special_primes.items()):
        print(f"  p={q}  {tau_mod.format_height(h)}  {poly}")
    print(f"bound {tau_mod.format_height(cert.bound)} ({cert.bound!r})")
    return 0


def cmd_cross_validate(args) -> int:
    c = _corpus(args)
    report = tau_mod.cross_validate(
        c, args.prime_bound, args.abelian_prime_bound, include_ramified=args.include_ramified
    )
    print(report.summary())
    for m in report.mismatches:
        print(f"  MISMATCH {m.source}: {m.poly} at p={m.p}: cardano={m.cardano} reference={m.reference}")
    return 0 if report.ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tau3p", description="Smallest heights of totally p-adic cubics.")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--workers", type=int, default=1, help="processes for corpus enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_corpus(p):
        p.add_argument("--corpus", help="corpus file (default: cached corpus, built on first use)")
        return p

    p = sub.add_parser("enumerate", help="build and save the candidate corpus")
    p.add_argument("--length-max", type=int, default=corpus_mod.DEFAULT_LENGTH_MAX)
    p.add_argument("--measure-max", type=float, default=corpus_mod.DEFAULT_MEASURE_MAX)
    p.add_argument("--out")
    p.add_argument("--text", help="also write a decimal CSV export here")
    p.set_defaults(func=cmd_enumerate)

    p = with_corpus(sub.add_parser("tau", help="tau_{3,p} for one prime or a range"))
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--prime", type=int)
    group.add_argument("--prime-range")
    p.add_argument("--format", choices=["csv", "json", "markdown"], default="csv")
    p.add_argument("--precision", type=int, default=5, help="significant figures (0 = full)")
    p.set_defaults(func=cmd_tau)

    p = with_corpus(sub.add_parser("table", help="results table over a prime range"))
    p.add_argument("--range", default=DEFAULT_TABLE_RANGE)
    p.add_argument("--format", choices=["csv", "json", "markdown"], default="markdown")
    p.add_argument("--precision", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = with_corpus(sub.add_parser("abelian", help="abelian cubics with conductors and classes"))
    p.add_argument("--format", choices=["csv", "text"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_abelian)

    p = with_corpus(sub.add_parser("verify-bound", help="certify the global abelian height bound"))
    p.set_defaults(func=cmd_verify_bound)

    p = with_corpus(sub.add_parser("cross-validate", help="compare the splitting test with its oracles"))
    p.add_argument("--prime-bound", type=int, default=199)
    p.add_argument("--abelian-prime-bound", type=int, default=1000)
    p.add_argument("--include-ramified", action="store_true", help="also check primes dividing a*disc")
    p.set_defaults(func=cmd_cross_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "precision", None) == 0:
        args.precision = None
    try:
        return args.func(args)
    except InvariantAlarm as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (DomainError, Tau3Error, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
