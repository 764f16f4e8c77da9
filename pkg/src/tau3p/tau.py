"""The tau_{3,p} search, result tables and the cross-validation sweeps."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from sympy import primerange

from .corpus import Corpus, CorpusEntry
from .cubic import CubicPoly, discriminant
from .errors import ExhaustedCorpusError, InconclusiveOracleError, InvariantAlarm
from .padic import check_prime
from .splitting import oracle_splits, splits_completely

logger = logging.getLogger(__name__)

# every prime has an abelian witness at or below this height
GLOBAL_HEIGHT_BOUND = 0.70376
_BOUND_SLACK = 5e-6

TABLE_COLUMNS = ("p", "tau", "polynomial")


@dataclass(frozen=True)
class TauResult:
    p: int
    tau: float
    witness: CubicPoly
    index: int


def tau3(p: int, corpus: Sequence[CorpusEntry]) -> TauResult:
    """Smallest height of a totally p-adic cubic: the first corpus entry that
    splits completely over Q_p."""
    check_prime(p)
    for i, entry in enumerate(corpus):
        if splits_completely(entry.depressed, p):
            if (
                isinstance(corpus, Corpus)
                and corpus.is_canonical
                and entry.height > GLOBAL_HEIGHT_BOUND + _BOUND_SLACK
            ):
                raise InvariantAlarm(f"tau_3,{p} = {entry.height} exceeds the global bound")
            return TauResult(p, entry.height, entry.poly, i)
    raise ExhaustedCorpusError(f"no corpus entry splits completely over Q_{p}")


def format_height(value: float, precision: int | None = 5) -> str:
    """Significant-figure formatting that keeps trailing zeros (0.36620)."""
    if precision is None:
        return repr(value)
    return f"{value:#.{precision}g}"


def table_rows(primes: Iterable[int], corpus: Sequence[CorpusEntry], precision: int | None = 5) -> list[dict]:
    rows = []
    for p in primes:
        r = tau3(p, corpus)
        rows.append({"p": p, "tau": format_height(r.tau, precision), "polynomial": str(r.witness)})
    return rows


def emit_table(
    primes: Iterable[int],
    corpus: Sequence[CorpusEntry],
    fmt: str = "csv",
    precision: int | None = 5,
) -> str:
    rows = table_rows(primes, corpus, precision)
    return render_rows(rows, TABLE_COLUMNS, fmt)


def render_rows(rows: list[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt == "markdown":
        lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        for row in rows:
            lines.append("| " + " | ".join(str(row[c]) for c in columns) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


# -- cross-validation ------------------------------------------------------------


@dataclass
class Mismatch:
    poly: CubicPoly
    p: int
    cardano: bool
    reference: bool
    source: str


@dataclass
class CrossValidationReport:
    checked: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    skipped: list[tuple[CubicPoly, int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return (
            f"checked {self.checked} (polynomial, prime) pairs: "
            f"{len(self.mismatches)} mismatches, {len(self.skipped)} skipped"
        )


def _batch_root_counts(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Number of roots mod p of every row ``(a, b, c, d)`` at once."""
    x = np.arange(p, dtype=np.int64)
    powers = np.stack([x**3 % p, x**2 % p, x, np.ones_like(x)])
    values = (coeffs % p) @ powers % p
    return (values == 0).sum(axis=1)


def oracle_sweep(
    entries: Sequence[CorpusEntry],
    prime_bound: int,
    report: CrossValidationReport | None = None,
    include_ramified: bool = False,
) -> CrossValidationReport:
    """Compare the Cardano criterion with the root-counting oracle.

    For p not dividing ``a * disc`` the oracle reduces to counting distinct
    roots mod p, done here for the whole corpus in one array operation.
    """
    report = report or CrossValidationReport()
    if not entries:
        return report
    polys = [e.poly for e in entries]
    coeffs = np.array([f.coeffs for f in polys], dtype=np.int64)
    bad = np.array([f.a * discriminant(f) for f in polys], dtype=object)
    for p in primerange(5, prime_bound + 1):
        counts = _batch_root_counts(coeffs, p)
        for i, entry in enumerate(entries):
            f = entry.poly
            if bad[i] % p == 0:
                if not include_ramified:
                    continue
                try:
                    ref = oracle_splits(f, p)
                except InconclusiveOracleError as exc:
                    report.skipped.append((f, p, str(exc)))
                    continue
            else:
                ref = bool(counts[i] == 3)
            got = splits_completely(entry.depressed, p).splits
            report.checked += 1
            if got != ref:
                report.mismatches.append(Mismatch(f, p, got, ref, "oracle"))
    return report


def frobenius_sweep(records, prime_bound: int, report: CrossValidationReport | None = None) -> CrossValidationReport:
    """Compare the Cardano criterion with residue-class membership mod the conductor."""
    report = report or CrossValidationReport()
    for rec in records:
        for p in primerange(5, prime_bound + 1):
            if rec.conductor % p == 0:
                continue
            got = splits_completely(rec.poly, p).splits
            ref = (p % rec.conductor) in rec.classes
            report.checked += 1
            if got != ref:
                report.mismatches.append(Mismatch(rec.poly, p, got, ref, "frobenius"))
    return report


def cross_validate(
    corpus: Sequence[CorpusEntry],
    prime_bound: int = 199,
    abelian_prime_bound: int | None = 1000,
    records=None,
    include_ramified: bool = False,
) -> CrossValidationReport:
    """Run the oracle sweep, then the Frobenius sweep over the abelian records.

    ``records`` defaults to the abelian table of ``corpus``; pass
    ``abelian_prime_bound=None`` to skip the second sweep. With
    ``include_ramified`` the oracle sweep also covers primes dividing
    ``a * disc`` through the Hensel search.
    """
    report = oracle_sweep(corpus, prime_bound, include_ramified=include_ramified)
    if abelian_prime_bound is not None and len(corpus):
        if records is None:
            from .abelian import build_abelian_table

            records = build_abelian_table(corpus)
        frobenius_sweep(records, abelian_prime_bound, report)
    logger.info(report.summary())
    return report
