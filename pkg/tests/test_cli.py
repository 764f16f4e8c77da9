import json

import pytest

from tau3p.cli import main, parse_primes
from tau3p.corpus import build_corpus, corpus_bytes, default_corpus_path, save_corpus
from tau3p.errors import DomainError


@pytest.fixture(scope="module")
def corpus_file(tmp_path_factory, corpus):
    return str(save_corpus(corpus, tmp_path_factory.mktemp("c") / "corpus.bin"))


def test_parse_primes():
    assert parse_primes("5..13") == [5, 7, 11, 13]
    assert parse_primes("5-13") == [5, 7, 11, 13]
    assert parse_primes("59,101,167") == [59, 101, 167]
    assert parse_primes("") == []
    assert len(parse_primes("5..443")) == 84
    with pytest.raises(DomainError):
        parse_primes("9")
    with pytest.raises(DomainError):
        parse_primes("2..7")


def test_tau_prime_range(corpus_file, capsys):
    assert main(["tau", "--corpus", corpus_file, "--prime-range", "59,101,167", "--format", "markdown"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[2:] == [f"| {p} | 0.093733 | x^3 - x^2 + 1 |" for p in (59, 101, 167)]


def test_tau_full_precision(corpus_file, capsys):
    assert main(["tau", "--corpus", corpus_file, "--prime", "59", "--format", "json", "--precision", "0"]) == 0
    row = json.loads(capsys.readouterr().out)[0]
    assert row["tau"].startswith("0.09373")
    assert len(row["tau"]) > 10


@pytest.mark.parametrize("prime", ["3", "2", "15"])
def test_bad_prime_exit_code(corpus_file, prime, capsys):
    assert main(["tau", "--corpus", corpus_file, "--prime", prime]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_corpus_file_is_domain_error(tmp_path, capsys):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"garbage")
    assert main(["tau", "--corpus", str(bad), "--prime", "5"]) == 1


def test_table_to_file(corpus_file, tmp_path):
    out = tmp_path / "t.csv"
    assert main(["table", "--corpus", corpus_file, "--range", "5..30", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,tau,polynomial" and len(lines) == 9


def test_abelian_and_verify(corpus_file, capsys, tmp_path):
    out = tmp_path / "ab.csv"
    assert main(["abelian", "--corpus", corpus_file, "--format", "csv", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 157
    assert main(["verify-bound", "--corpus", corpus_file]) == 0
    assert "bound 0.70376" in capsys.readouterr().out


def test_enumerate(tmp_path, capsys):
    out = tmp_path / "small.bin"
    text = tmp_path / "small.csv"
    assert main(["enumerate", "--length-max", "3", "--measure-max", "2", "--out", str(out), "--text", str(text)]) == 0
    assert out.read_bytes() == corpus_bytes(build_corpus(3, 2.0))
    assert "12 polynomials" in capsys.readouterr().out
    assert len(text.read_text().splitlines()) == 13


def test_enumerate_default_path(tmp_path, monkeypatch):
    monkeypatch.setenv("TAU3P_CACHE_DIR", str(tmp_path))
    assert main(["enumerate", "--length-max", "3", "--measure-max", "2"]) == 0
    assert default_corpus_path(3, 2.0).exists()


def test_cross_validate_small(tmp_path, capsys):
    path = save_corpus(build_corpus(6, 2.5), tmp_path / "s.bin")
    assert main(["cross-validate", "--corpus", str(path), "--prime-bound", "50", "--abelian-prime-bound", "200", "--include-ramified"]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_invariant_alarm_exit_code(corpus_file, monkeypatch, capsys):
    from tau3p import tau as tau_mod
    from tau3p.errors import InvariantAlarm

    def boom(*args, **kwargs):
        raise InvariantAlarm("forced")

    monkeypatch.setattr(tau_mod, "emit_table", boom)
    assert main(["tau", "--corpus", corpus_file, "--prime", "5"]) == 2
    assert "invariant" in capsys.readouterr().err


def test_module_entry_point():
    import subprocess
    import sys

    done = subprocess.run([sys.executable, "-m", "tau3p", "--help"], capture_output=True, text=True)
    assert done.returncode == 0 and "verify-bound" in done.stdout
