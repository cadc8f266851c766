"""Command-line interface: output formats, caching, exit codes."""

import json
import subprocess
import sys

from qhomfly import QScalar


def run_cli(*args, cache=None, expect=0):
    env = None
    if cache is not None:
        import os

        env = dict(os.environ, QH_CACHE=str(cache))
    out = subprocess.run(
        [sys.executable, "-m", "qhomfly.cli", *args],
        capture_output=True,
        text=True,
        env=env,
    )
    assert out.returncode == expect, (args, out.returncode, out.stderr)
    return out


def test_eval_text():
    out = run_cli("eval", "--cf", "3", "--color", "1")
    assert out.stdout.strip() == "1 + q^4 - a^2 q^2"


def test_eval_fraction_input_and_color_zero():
    out = run_cli("eval", "--fraction", "7/2", "--color", "0")
    assert out.stdout.strip() == "1"


def test_eval_json_record():
    out = run_cli("eval", "--cf", "2,2", "--color", "2", "--format", "json")
    rec = json.loads(out.stdout)
    assert rec["cf"] == [2, 2]
    assert rec["fraction"] == [5, 2]
    assert rec["components"] == 1
    assert rec["color"] == 2
    assert rec["normalize"] == "canonical"
    assert rec["engine_version"] == "1"
    value = QScalar.from_json_obj(rec["value"])
    assert value == value.canonicalize()


def test_eval_specialize_monomials():
    out = run_cli(
        "eval", "--cf", "3", "--color", "1",
        "--specialize", "a=q^2", "--specialize", "s=1",
    )
    # a = q^2 turns the trefoil value into its Jones specialization
    assert "a^" not in out.stdout


def test_eval_specialize_two_component_color():
    out = run_cli(
        "eval", "--cf", "2", "--color", "1", "--specialize", "i=2",
        "--format", "json",
    )
    rec = json.loads(out.stdout)
    assert rec["specialize"] == ["i=2"]
    value = QScalar.from_json_obj(rec["value"])
    assert not value.num.involves(2)


def test_eval_input_errors():
    run_cli("eval", "--cf", "0,2", "--color", "1", expect=2)
    run_cli("eval", "--cf", "x", "--color", "1", expect=2)
    run_cli("eval", "--fraction", "4/2", "--color", "1", expect=2)
    run_cli("eval", "--cf", "3", "--color", "-1", expect=2)
    # i= needs a two-component link, i >= color, and no s= alongside
    run_cli("eval", "--cf", "3", "--color", "1", "--specialize", "i=2", expect=2)
    run_cli("eval", "--cf", "2", "--color", "2", "--specialize", "i=1", expect=2)
    run_cli(
        "eval", "--cf", "2", "--color", "1",
        "--specialize", "i=2", "--specialize", "s=1",
        expect=2,
    )
    run_cli("eval", "--cf", "3", "--color", "1", "--specialize", "a=2q", expect=2)


def test_sequence_and_cache_round_trip(tmp_path):
    seq = tmp_path / "seq.json"
    out1 = run_cli(
        "sequence", "--cf", "1", "--max-color", "9", "--out", str(seq),
        cache=tmp_path / "cache",
    )
    assert "wrote 10 records" in out1.stdout
    first = seq.read_bytes()
    records = json.loads(first)
    assert [r["color"] for r in records] == list(range(10))
    assert all(QScalar.from_json_obj(r["value"]) == QScalar.from_int(1) for r in records)
    run_cli(
        "sequence", "--cf", "1", "--max-color", "9", "--out", str(seq),
        cache=tmp_path / "cache",
    )
    assert seq.read_bytes() == first


def test_recurrence_from_sequence(tmp_path):
    seq = tmp_path / "seq.json"
    run_cli(
        "sequence", "--cf", "1", "--max-color", "11", "--out", str(seq),
        cache=tmp_path / "cache",
    )
    out = run_cli(
        "recurrence", "--in", str(seq), "--max-order", "2", "--max-mdeg", "1",
        "--validate", "3",
    )
    assert "1*L + -1" in out.stdout
    assert "validation: pass" in out.stdout


def test_recurrence_none_found_json(tmp_path):
    seq = tmp_path / "seq.json"
    run_cli(
        "sequence", "--cf", "3", "--max-color", "12", "--out", str(seq),
        cache=tmp_path / "cache",
    )
    out = run_cli(
        "recurrence", "--in", str(seq), "--max-order", "1", "--max-mdeg", "1",
        "--format", "json",
    )
    assert json.loads(out.stdout) == {"operator": None}


def test_recurrence_window_too_short(tmp_path):
    seq = tmp_path / "seq.json"
    run_cli(
        "sequence", "--cf", "1", "--max-color", "4", "--out", str(seq),
        cache=tmp_path / "cache",
    )
    out = run_cli(
        "recurrence", "--in", str(seq), "--max-order", "4", "--max-mdeg", "8",
        "--validate", "2",
        expect=5,
    )
    assert "values" in out.stderr


def test_corpus_nested_sum(tmp_path):
    out = run_cli(
        "corpus", "--max-crossings", "3", "--checks", "nested-sum",
        "--max-color", "2", cache=tmp_path / "cache",
    )
    summary = json.loads(out.stdout)
    assert summary["passed"] is True
    assert summary["cases"] == 7
    assert summary["failures"] == []


def test_corpus_usage_errors():
    run_cli("corpus", "--max-crossings", "0", expect=2)
    run_cli("corpus", "--max-crossings", "3", "--checks", "sorcery", expect=2)
