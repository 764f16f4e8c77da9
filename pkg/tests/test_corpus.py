import struct

import pytest

from tau3p import corpus as corpus_mod
from tau3p.corpus import (
    HEADER,
    Corpus,
    build_corpus,
    corpus_bytes,
    default_corpus_path,
    export_corpus_text,
    load_corpus,
    load_or_build_corpus,
    parse_corpus,
    save_corpus,
    sort_entries,
)
from tau3p.cubic import CubicPoly, MeasureValue, length
from tau3p.errors import (
    CorpusChecksumError,
    CorpusFormatError,
    CorpusTruncatedError,
    CorpusVersionError,
    PreconditionError,
)

from .conftest import poly


@pytest.fixture(scope="module")
def small():
    return build_corpus(8, 3.0)


def test_tiny_corpus():
    c = build_corpus(3, 2.0)
    assert len(c) == 12
    got = {e.poly for e in c}
    for f in ["x^3 - x - 1", "x^3 - x + 1", "x^3 + x^2 - 1", "x^3 - x^2 + 1"]:
        assert poly(f) in got
    assert c[0].poly == poly("x^3 - x^2 + 1")


def test_small_corpus_contents(small):
    assert all(e.measure.lower <= 3.0 for e in small)
    assert all(length(e.poly) <= 8 and e.poly.a >= 1 for e in small)
    for x, y in zip(small, small[1:]):
        assert x.measure.value <= y.measure.value or x.measure.overlaps(y.measure)
    assert len({e.poly for e in small}) == len(small)


def test_minimal_measure_ties_sorted_lexicographically(small):
    plastic = [e.poly.coeffs for e in small[:4]]
    assert plastic == sorted(plastic)
    assert all(abs(e.measure.value - 1.324717957244746) < 1e-12 for e in small[:4])


def test_sort_is_total_and_stable():
    entries = [
        corpus_mod.CorpusEntry.from_measure(CubicPoly(1, 2, 0, 1), MeasureValue(2.0, 1e-12)),
        corpus_mod.CorpusEntry.from_measure(CubicPoly(1, 0, 0, 1), MeasureValue(2.0 + 5e-13, 1e-12)),
        corpus_mod.CorpusEntry.from_measure(CubicPoly(1, 1, 0, 1), MeasureValue(1.5, 1e-12)),
    ]
    out = [e.poly.coeffs for e in sort_entries(entries)]
    assert out == [(1, 1, 0, 1), (1, 0, 0, 1), (1, 2, 0, 1)]
    assert sort_entries(list(reversed(entries))) == sort_entries(entries)


def test_bad_length():
    with pytest.raises(PreconditionError):
        build_corpus(0, 2.0)


def test_round_trip(small, tmp_path):
    path = save_corpus(small, tmp_path / "c.bin")
    back = load_corpus(path)
    assert back == small
    assert corpus_bytes(back) == path.read_bytes()


def test_parallel_build_is_byte_identical(small):
    assert corpus_bytes(build_corpus(8, 3.0, workers=2)) == corpus_bytes(small)
    assert corpus_bytes(build_corpus(8, 3.0)) == corpus_bytes(small)


def test_checksum_error(small):
    data = bytearray(corpus_bytes(small))
    data[-1] ^= 0xFF
    with pytest.raises(CorpusChecksumError):
        parse_corpus(bytes(data))


def test_version_error(small):
    data = bytearray(corpus_bytes(small))
    struct.pack_into("<H", data, 8, 0)
    with pytest.raises(CorpusVersionError):
        parse_corpus(bytes(data))


def test_truncation_errors(small):
    data = corpus_bytes(small)
    with pytest.raises(CorpusTruncatedError):
        parse_corpus(data[:-5])
    with pytest.raises(CorpusTruncatedError):
        parse_corpus(data[: HEADER.size - 1])


def test_trailing_bytes_and_magic(small):
    data = corpus_bytes(small)
    with pytest.raises(CorpusFormatError):
        parse_corpus(data + b"\0")
    with pytest.raises(CorpusFormatError):
        parse_corpus(b"NOTCORPS" + data[8:])


def test_format_errors_are_value_errors(small):
    with pytest.raises(ValueError):
        parse_corpus(b"")


def test_text_export(small, tmp_path):
    path = export_corpus_text(small, tmp_path / "c.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "a,b,c,d,measure,error_bound,height"
    assert len(lines) == len(small) + 1
    a, b, c, d, m, err, h = lines[1].split(",")
    assert CubicPoly(int(a), int(b), int(c), int(d)) == small[0].poly
    assert float(m) == small[0].measure.value


def test_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv(corpus_mod.CACHE_ENV, str(tmp_path))
    assert default_corpus_path(3, 2.0).parent == tmp_path
    c = load_or_build_corpus(length_max=3, measure_max=2.0)
    assert default_corpus_path(3, 2.0).exists()
    assert load_or_build_corpus(length_max=3, measure_max=2.0) == c


def test_explicit_path_is_loaded_as_is(small, tmp_path):
    path = save_corpus(small, tmp_path / "x.bin")
    assert load_or_build_corpus(path, length_max=3, measure_max=2.0) == small


def test_canonical_flag(small, corpus):
    assert not small.is_canonical
    assert corpus.is_canonical
    assert isinstance(corpus, Corpus)


def test_length_bounded_by_measure(corpus):
    # |a_i| <= binom(3, i) M(f), summed: L(f) <= 8 M(f)
    for e in corpus:
        assert length(e.poly) <= 8 * e.measure.upper


def test_index_of(small):
    assert small.index_of(small[5].poly) == 5
    with pytest.raises(KeyError):
        small.index_of(CubicPoly(9, 9, 9, 9))
