"""Cyclic cubics: conductors, splitting residue classes and the global bound.

A cubic with square discriminant generates a cyclic field of conductor
``m = (1 or 9) * q_1 ... q_n`` with distinct primes ``q_i = 1 mod 3``, and
``m^2`` divides the polynomial discriminant. A prime ``p`` not dividing
``m`` splits completely exactly when ``p mod m`` falls in an index-3
subgroup of ``(Z/mZ)^x``.

The conductor is certified behaviourally rather than from a maximal order:
every admissible candidate divides ``M``, the product of all admissible
prime-power factors, so probing one prime in each class of ``(Z/MZ)^x``
determines the splitting pattern exactly. The conductor is then the
smallest candidate through which that pattern factors as an index-3
subgroup.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sympy import factorint, nextprime, totient

from .corpus import CorpusEntry
from .cubic import CubicPoly, discriminant, format_poly, height_of_root
from .errors import (
    CardinalityMismatchError,
    CoverageGapError,
    NoAdmissibleConductorError,
    PreconditionError,
)
from .splitting import splits_completely

GLOBAL_BOUND_MODULUS = 63


@dataclass(frozen=True)
class AbelianRecord:
    poly: CubicPoly
    poly_disc: int
    conductor: int
    classes: frozenset[int]
    height: float

    def splits_at(self, p: int) -> bool:
        """Frobenius prediction, valid for primes not dividing the conductor."""
        return p % self.conductor in self.classes


@dataclass
class CoverageCertificate:
    modulus: int
    assignments: dict[int, tuple[CubicPoly, float]]
    special_primes: dict[int, tuple[CubicPoly, float]] = field(default_factory=dict)
    bound: float = 0.0


def is_abelian(f: CubicPoly) -> bool:
    disc = discriminant(f)
    return disc > 0 and math.isqrt(disc) ** 2 == disc


def units(m: int) -> list[int]:
    return [r for r in range(1, m) if math.gcd(r, m) == 1] if m > 1 else [0]


def is_index3_subgroup(classes: Iterable[int], m: int) -> bool:
    s = set(classes)
    if 1 % m not in s or 3 * len(s) != totient(m):
        return False
    return all((x * y) % m in s for x in s for y in s)


def has_unique_index3_subgroup(m: int) -> bool:
    """True when (Z/mZ)^x has 3-rank one, i.e. exactly three cube roots of 1."""
    return sum(1 for x in units(m) if pow(x, 3, m) == 1 % m) == 3


def admissible_factors(poly_disc: int) -> list[int]:
    """Prime-power factors a conductor ``m`` with ``m^2 | poly_disc`` may use."""
    fac = factorint(poly_disc)
    out = [q for q, e in fac.items() if q % 3 == 1 and e >= 2]
    if fac.get(3, 0) >= 4:
        out.append(9)
    return sorted(out)


def conductor_candidates(poly_disc: int) -> list[int]:
    factors = admissible_factors(poly_disc)
    cands = set()
    for k in range(1, len(factors) + 1):
        for combo in itertools.combinations(factors, k):
            cands.add(math.prod(combo))
    return sorted(cands)


def _class_primes(modulus: int, start: int = 5) -> dict[int, int]:
    """The smallest prime ``p >= start``, ``p`` prime to ``modulus``, in each unit class."""
    wanted = set(units(modulus))
    found: dict[int, int] = {}
    p = nextprime(start - 1)
    while len(found) < len(wanted):
        if modulus % p:
            found.setdefault(p % modulus, p)
        p = nextprime(p)
    return found


def _splitting_pattern(f: CubicPoly, modulus: int) -> dict[int, bool]:
    return {r: splits_completely(f, p).splits for r, p in _class_primes(modulus).items()}


def _factors_through(pattern: dict[int, bool], modulus: int, m: int) -> set[int] | None:
    """Split classes mod ``m`` if the pattern mod ``modulus`` is constant on fibres."""
    verdict: dict[int, bool] = {}
    for r, s in pattern.items():
        if verdict.setdefault(r % m, s) != s:
            return None
    return {r for r, s in verdict.items() if s}


def conductor(f: CubicPoly) -> int:
    if not is_abelian(f):
        raise PreconditionError(f"{f} is not an abelian cubic")
    disc = discriminant(f)
    cands = conductor_candidates(disc)
    if not cands:
        raise NoAdmissibleConductorError(f"no admissible conductor divides disc({f}) = {disc}")
    modulus = math.lcm(*cands)
    pattern = _splitting_pattern(f, modulus)
    for m in cands:
        split = _factors_through(pattern, modulus, m)
        if split is not None and is_index3_subgroup(split, m):
            return m
    raise NoAdmissibleConductorError(f"splitting of {f} matches no candidate among {cands}")


def splitting_classes(f: CubicPoly, m: int) -> frozenset[int]:
    """Residues mod the conductor ``m`` of the primes at which ``f`` splits."""
    if has_unique_index3_subgroup(m):
        return frozenset(pow(x, 3, m) for x in units(m))
    target = totient(m) // 3
    all_units = set(units(m))
    split: set[int] = set()
    seen: set[int] = set()
    p = 4
    while len(split) < target and seen != all_units:
        p = nextprime(p)
        if m % p == 0:
            continue
        seen.add(p % m)
        if splits_completely(f, p).splits:
            split.add(p % m)
    if not is_index3_subgroup(split, m):
        raise CardinalityMismatchError(
            f"split classes of {f} mod {m} are not an index-3 subgroup: {sorted(split)}"
        )
    return frozenset(split)


def make_record(f: CubicPoly, height: float | None = None) -> AbelianRecord:
    m = conductor(f)
    return AbelianRecord(
        poly=f,
        poly_disc=discriminant(f),
        conductor=m,
        classes=splitting_classes(f, m),
        height=height_of_root(f) if height is None else height,
    )


def build_abelian_table(corpus: Sequence[CorpusEntry]) -> list[AbelianRecord]:
    """One record per abelian cubic of the corpus, in corpus (height) order."""
    return [make_record(e.poly, e.height) for e in corpus if is_abelian(e.poly)]


def verify_global_bound(
    records: Sequence[AbelianRecord], modulus: int = GLOBAL_BOUND_MODULUS
) -> CoverageCertificate:
    """Assign to every unit class mod ``modulus`` the lowest abelian witness.

    Only records whose conductor divides ``modulus`` can decide a whole class.
    Primes p >= 5 dividing ``modulus`` get a direct witness checked with the
    splitting criterion.
    """
    if not records:
        raise PreconditionError("no abelian records")
    ordered = sorted(records, key=lambda r: (r.height, r.poly.coeffs))
    usable = [r for r in ordered if modulus % r.conductor == 0]
    assignments: dict[int, tuple[CubicPoly, float]] = {}
    for r in units(modulus):
        for rec in usable:
            if r % rec.conductor in rec.classes:
                assignments[r] = (rec.poly, rec.height)
                break
    special: dict[int, tuple[CubicPoly, float]] = {}
    missing_primes = []
    for q in factorint(modulus):
        if q < 5:
            continue
        rec = next((rec for rec in ordered if splits_completely(rec.poly, q).splits), None)
        if rec is None:
            missing_primes.append(q)
        else:
            special[q] = (rec.poly, rec.height)
    uncovered = [r for r in units(modulus) if r not in assignments]
    if uncovered or missing_primes:
        raise CoverageGapError(
            f"uncovered residues mod {modulus}: {uncovered}; primes without witness: {missing_primes}",
            uncovered,
        )
    bound = max(h for _, h in itertools.chain(assignments.values(), special.values()))
    return CoverageCertificate(modulus, assignments, special, bound)


# -- output ----------------------------------------------------------------------

ABELIAN_COLUMNS = ("polynomial", "height", "modulus", "classes")


def abelian_rows(records: Sequence[AbelianRecord], precision: int = 5) -> list[dict]:
    return [
        {
            "polynomial": format_poly(r.poly.coeffs),
            "height": f"{r.height:#.{precision}g}",
            "modulus": r.conductor,
            "classes": " ".join(map(str, sorted(r.classes))),
        }
        for r in records
    ]


def abelian_csv(records: Sequence[AbelianRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(ABELIAN_COLUMNS), lineterminator="\n")
    writer.writeheader()
    writer.writerows(abelian_rows(records))
    return buf.getvalue()


def abelian_text(records: Sequence[AbelianRecord]) -> str:
    """Aligned plain-text table: polynomial, height, conductor, split classes."""
    rows = abelian_rows(records)
    header = {"polynomial": "f", "height": "h", "modulus": "mod", "classes": "p splits iff p mod m in"}
    widths = {c: max(len(str(row[c])) for row in [header, *rows]) for c in ABELIAN_COLUMNS[:3]}
    lines = []
    for row in [header, *rows]:
        lines.append(
            f"{row['polynomial']:<{widths['polynomial']}}  {row['height']:>{widths['height']}}  "
            f"{row['modulus']!s:>{widths['modulus']}}  {row['classes']}"
        )
    return "\n".join(lines) + "\n"
