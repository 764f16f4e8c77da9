"""Enumeration of the candidate cubics and the on-disk corpus cache.

The corpus holds every irreducible integer cubic ``a x^3 + b x^2 + c x + d``
with ``a >= 1``, length at most ``length_max`` and Mahler measure at most
``measure_max``, sorted by measure with coefficient tie-breaks.

Enumeration only visits coefficient boxes that can meet the measure bound:
``|a_i| <= binom(3, i) * M(f)`` holds for every cubic, so ``|a|, |d| <= M``
and ``|b|, |c| <= 3M``. A vectorised floating-point root pass then screens
out candidates far above the bound before the certified measure is taken.

File layout (little endian)::

    header  8s  magic b"TAU3CORP"
            H   format version
            I   length_max
            d   measure_max
            I   entry count
            32s sha256 of the payload
    payload count x (i a, i b, i c, i d, d measure, d error_bound)
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .cubic import (
    CubicPoly,
    DepressedForm,
    MeasureValue,
    depress,
    is_irreducible_cubic,
    mahler_measure,
)
from .errors import (
    CorpusChecksumError,
    CorpusFormatError,
    CorpusTruncatedError,
    CorpusVersionError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

DEFAULT_LENGTH_MAX = 68
DEFAULT_MEASURE_MAX = 8.5

MAGIC = b"TAU3CORP"
FORMAT_VERSION = 1
HEADER = struct.Struct("<8sHIdI32s")
RECORD = struct.Struct("<iiiidd")

CACHE_ENV = "TAU3P_CACHE_DIR"

# relative slack for the floating-point screen; the certified pass decides
_SCREEN_SLACK = 1e-6


@dataclass(frozen=True)
class CorpusEntry:
    measure: MeasureValue
    poly: CubicPoly
    depressed: DepressedForm
    height: float

    @classmethod
    def from_measure(cls, poly: CubicPoly, measure: MeasureValue) -> CorpusEntry:
        return cls(measure, poly, depress(poly), measure.height)


@dataclass(frozen=True)
class Corpus(Sequence):
    entries: tuple[CorpusEntry, ...]
    length_max: int
    measure_max: float

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self) -> Iterator[CorpusEntry]:
        return iter(self.entries)

    @property
    def is_canonical(self) -> bool:
        return self.length_max == DEFAULT_LENGTH_MAX and self.measure_max == DEFAULT_MEASURE_MAX

    def index_of(self, poly: CubicPoly) -> int:
        for i, e in enumerate(self.entries):
            if e.poly == poly:
                return i
        raise KeyError(str(poly))


def _candidates(a: int, length_max: int, measure_max: float) -> np.ndarray:
    outer = min(length_max, math.floor(measure_max))
    inner = min(length_max, math.floor(3 * measure_max))
    rows = []
    for b in range(-inner, inner + 1):
        for c in range(-inner, inner + 1):
            rest = length_max - a - abs(b) - abs(c)
            if rest < 1:
                continue
            span = min(rest, outer)
            for d in range(-span, span + 1):
                if d:
                    rows.append((a, b, c, d))
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


def _screen(coeffs: np.ndarray, measure_max: float) -> np.ndarray:
    """Floating-point Mahler measures via companion-matrix eigenvalues."""
    n = len(coeffs)
    if n == 0:
        return coeffs
    P = coeffs.astype(float)
    comp = np.zeros((n, 3, 3))
    comp[:, 0, :] = -P[:, 1:] / P[:, :1]
    comp[:, 1, 0] = 1.0
    comp[:, 2, 1] = 1.0
    roots = np.linalg.eigvals(comp)
    approx = P[:, 0] * np.prod(np.maximum(1.0, np.abs(roots)), axis=1)
    return coeffs[approx <= measure_max * (1 + _SCREEN_SLACK) + _SCREEN_SLACK]


def _enumerate_leading(args: tuple[int, int, float]) -> list[tuple[tuple[int, int, int, int], MeasureValue]]:
    a, length_max, measure_max = args
    found = []
    for row in _screen(_candidates(a, length_max, measure_max), measure_max):
        poly = CubicPoly(*(int(k) for k in row))
        if not is_irreducible_cubic(poly):
            continue
        m = mahler_measure(poly)
        # inclusive on ambiguity
        if m.lower <= measure_max:
            found.append((poly.coeffs, m))
    return found


def sort_entries(entries: Sequence[CorpusEntry]) -> list[CorpusEntry]:
    """Order by certified measure, ties broken on ``(a, b, c, d)``.

    Measures whose certified intervals chain-overlap form one tie group, so
    the order is total and deterministic even though overlap itself is not
    transitive.
    """
    by_value = sorted(entries, key=lambda e: (e.measure.value, e.poly.coeffs))
    keyed = []
    group, reach = -1, -math.inf
    for e in by_value:
        if e.measure.lower > reach:
            group += 1
            reach = e.measure.upper
        else:
            reach = max(reach, e.measure.upper)
        keyed.append(((group, e.poly.coeffs), e))
    keyed.sort(key=lambda t: t[0])
    return [e for _, e in keyed]


def build_corpus(
    length_max: int = DEFAULT_LENGTH_MAX,
    measure_max: float = DEFAULT_MEASURE_MAX,
    workers: int = 1,
) -> Corpus:
    if length_max < 1:
        raise PreconditionError("length_max must be >= 1")
    top = min(length_max, math.floor(measure_max))
    jobs = [(a, length_max, measure_max) for a in range(1, top + 1)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_enumerate_leading, jobs))
    else:
        parts = [_enumerate_leading(job) for job in jobs]
    entries = [
        CorpusEntry.from_measure(CubicPoly(*coeffs), m) for part in parts for coeffs, m in part
    ]
    logger.info("enumerated %d cubics (L <= %d, M <= %g)", len(entries), length_max, measure_max)
    return Corpus(tuple(sort_entries(entries)), length_max, measure_max)


# -- persistence ---------------------------------------------------------------


def _payload(corpus: Corpus) -> bytes:
    return b"".join(RECORD.pack(*e.poly.coeffs, *e.measure) for e in corpus)


def corpus_bytes(corpus: Corpus) -> bytes:
    payload = _payload(corpus)
    header = HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        corpus.length_max,
        corpus.measure_max,
        len(corpus),
        hashlib.sha256(payload).digest(),
    )
    return header + payload


def save_corpus(corpus: Corpus, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(corpus_bytes(corpus))
    os.replace(tmp, path)
    return path


def parse_corpus(data: bytes) -> Corpus:
    if len(data) < HEADER.size:
        raise CorpusTruncatedError(f"header needs {HEADER.size} bytes, file has {len(data)}")
    magic, version, length_max, measure_max, count, digest = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorpusFormatError("not a corpus file (bad magic)")
    if version != FORMAT_VERSION:
        raise CorpusVersionError(f"corpus format version {version}, reader expects {FORMAT_VERSION}")
    payload = data[HEADER.size :]
    expected = count * RECORD.size
    if len(payload) < expected:
        raise CorpusTruncatedError(f"payload has {len(payload)} bytes, header promises {expected}")
    if len(payload) > expected:
        raise CorpusFormatError(f"{len(payload) - expected} trailing bytes after payload")
    if hashlib.sha256(payload).digest() != digest:
        raise CorpusChecksumError("payload checksum mismatch")
    entries = []
    for a, b, c, d, value, err in RECORD.iter_unpack(payload):
        entries.append(CorpusEntry.from_measure(CubicPoly(a, b, c, d), MeasureValue(value, err)))
    return Corpus(tuple(entries), length_max, measure_max)


def load_corpus(path) -> Corpus:
    return parse_corpus(Path(path).read_bytes())


def export_corpus_text(corpus: Corpus, path) -> Path:
    """Decimal CSV export (a, b, c, d, measure, error_bound, height)."""
    path = Path(path)
    lines = ["a,b,c,d,measure,error_bound,height"]
    for e in corpus:
        lines.append(
            ",".join(map(str, e.poly.coeffs))
            + f",{e.measure.value!r},{e.measure.error_bound!r},{e.height!r}"
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "tau3p"


def default_corpus_path(length_max: int = DEFAULT_LENGTH_MAX, measure_max: float = DEFAULT_MEASURE_MAX) -> Path:
    return default_cache_dir() / f"corpus_L{length_max}_M{measure_max:g}.bin"


def load_or_build_corpus(
    path=None,
    length_max: int = DEFAULT_LENGTH_MAX,
    measure_max: float = DEFAULT_MEASURE_MAX,
    workers: int = 1,
) -> Corpus:
    """Load the cached corpus, building and caching it on first use."""
    if path is not None and Path(path).exists():
        return load_corpus(path)
    path = Path(path) if path else default_corpus_path(length_max, measure_max)
    if path.exists():
        corpus = load_corpus(path)
        if corpus.length_max == length_max and corpus.measure_max == measure_max:
            return corpus
        logger.warning("cache %s holds L=%d M=%g; rebuilding", path, corpus.length_max, corpus.measure_max)
    corpus = build_corpus(length_max, measure_max, workers)
    save_corpus(corpus, path)
    return corpus
