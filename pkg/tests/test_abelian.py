import math
import random

import pytest
from sympy import factorint, primerange, totient

from tau3p.abelian import (
    AbelianRecord,
    abelian_csv,
    abelian_text,
    conductor,
    conductor_candidates,
    has_unique_index3_subgroup,
    is_abelian,
    is_index3_subgroup,
    make_record,
    splitting_classes,
    units,
    verify_global_bound,
)
from tau3p.cubic import discriminant
from tau3p.errors import CoverageGapError, PreconditionError
from tau3p.splitting import splits_completely

from .conftest import CONGRUENCE_ROWS, poly


@pytest.mark.parametrize(
    "f, expected",
    [("x^3 - x^2 - 2x + 1", True), ("x^3 - 2", False), ("x^3 - 3x^2 + 1", True), ("x^3 - x - 1", False)],
)
def test_is_abelian(f, expected):
    assert is_abelian(poly(f)) is expected


@pytest.mark.parametrize("f, m", [("x^3 - x^2 - 2x + 1", 7), ("x^3 - 3x^2 + 1", 9), ("2x^3 - 9x^2 + 3x + 2", 63)])
def test_conductor_examples(f, m):
    assert conductor(poly(f)) == m


def test_conductor_rejects_non_abelian():
    with pytest.raises(PreconditionError):
        conductor(poly("x^3 - 2"))


@pytest.mark.parametrize("f, h, m, classes", CONGRUENCE_ROWS)
def test_congruence_rows(f, h, m, classes):
    rec = make_record(poly(f))
    assert rec.conductor == m
    assert rec.classes == classes
    assert abs(rec.height - h) < 1e-5


def test_index3_subgroup_helpers():
    assert is_index3_subgroup({1, 6}, 7)
    assert not is_index3_subgroup({1, 2}, 7)
    assert not is_index3_subgroup({1, 2, 4, 6}, 7)
    assert has_unique_index3_subgroup(7) and has_unique_index3_subgroup(9)
    assert not has_unique_index3_subgroup(63)
    assert units(9) == [1, 2, 4, 5, 7, 8]


def test_conductor_candidates_shape():
    # 3^4 * 7^2 * 13^2 admits 9, 7, 13 and their products
    assert conductor_candidates(81 * 49 * 169) == [7, 9, 13, 63, 91, 117, 819]
    assert conductor_candidates(3**3 * 7) == []


def test_splitting_classes_shortcut_matches_probing():
    # for conductor 7 the cube subgroup must equal the probed classes
    f = poly("x^3 - x^2 - 2x + 1")
    probed = {p % 7 for p in primerange(5, 400) if p != 7 and splits_completely(f, p)}
    assert splitting_classes(f, 7) == probed


def test_subgroup_law(abelian_records):
    for rec in abelian_records:
        m, s = rec.conductor, rec.classes
        assert 1 % m in s
        assert len(s) == totient(m) // 3
        assert all(x * y % m in s for x in s for y in s)


def test_frobenius_consistency(abelian_records):
    rng = random.Random(1)
    primes = list(primerange(5, 20000))
    for rec in abelian_records:
        sample = [p for p in rng.sample(primes, 230) if rec.conductor % p][:200]
        for p in sample:
            assert splits_completely(rec.poly, p).splits == rec.splits_at(p)


def test_conductor_minimality(abelian_records):
    # no proper admissible divisor reproduces the splitting pattern
    for rec in abelian_records:
        m = rec.conductor
        if m > 100:
            continue
        probe = [p for p in primerange(5, 3000) if m % p]
        for d in conductor_candidates(rec.poly_disc):
            if d < m and m % d == 0:
                pattern = {}
                consistent = True
                for p in probe:
                    s = splits_completely(rec.poly, p).splits
                    if pattern.setdefault(p % d, s) != s:
                        consistent = False
                        break
                assert not consistent, (rec.poly, d)


def test_discriminant_shape(abelian_records):
    for rec in abelian_records:
        m = rec.conductor
        assert rec.poly_disc % (m * m) == 0
        fac = factorint(m)
        assert fac.pop(3, 2) == 2
        assert all(q % 3 == 1 and e == 1 for q, e in fac.items())


def test_global_bound(abelian_records):
    cert = verify_global_bound(abelian_records)
    assert cert.modulus == 63
    assert set(cert.assignments) == set(units(63))
    assert set(cert.special_primes) == {7}
    assert f"{cert.bound:.5g}" == "0.70376"
    assert cert.special_primes[7][0] == poly("x^3 - 5x^2 + 2x + 1")


@pytest.fixture(scope="module")
def table_witnesses():
    return [make_record(poly(f)) for f, *_ in CONGRUENCE_ROWS]


def test_global_bound_from_table_witnesses(table_witnesses):
    cert = verify_global_bound(table_witnesses)
    assert f"{cert.bound:.5g}" == "0.70376"


def test_global_bound_gap_without_last_rows(table_witnesses):
    with pytest.raises(CoverageGapError) as exc:
        verify_global_bound(table_witnesses[:-2])
    assert {2, 4, 5} <= set(exc.value.uncovered)


def test_global_bound_gap_without_conductor_63(abelian_records):
    with pytest.raises(CoverageGapError):
        verify_global_bound([r for r in abelian_records if r.conductor != 63])


def test_global_bound_gap_single_record():
    with pytest.raises(CoverageGapError) as exc:
        verify_global_bound([make_record(poly("x^3 - x^2 - 2x + 1"))])
    assert len(exc.value.uncovered) == 36 - 12


def test_global_bound_bounds_tau(abelian_records, corpus):
    from tau3p.tau import tau3

    bound = verify_global_bound(abelian_records).bound
    for p in primerange(5, 200):
        assert tau3(p, corpus).tau <= bound


def test_outputs():
    recs = [make_record(poly(f)) for f, *_ in CONGRUENCE_ROWS[:2]]
    csv_text = abelian_csv(recs)
    assert csv_text.splitlines()[0] == "polynomial,height,modulus,classes"
    assert csv_text.splitlines()[1] == "x^3 - x^2 - 2x + 1,0.26986,7,1 6"
    text = abelian_text(recs)
    assert "0.35253" in text and text.count("\n") == 3


def test_record_is_frozen():
    rec = make_record(poly("x^3 - 3x^2 + 1"))
    assert isinstance(rec, AbelianRecord)
    assert rec.poly_disc == discriminant(rec.poly) == 81
    with pytest.raises(AttributeError):
        rec.conductor = 3
