"""Command line behavior: exit codes, JSON stability, cache, artifacts."""

import json
import os

import pytest

from tensoria.cli import main

V4_TEXT = "< a, b | a^2, b^2, [a, b] >"


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("TENSORIA_CACHE_DIR", str(tmp_path / "cache"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tensor_json(capsys):
    code, out, _ = run(capsys, "tensor", V4_TEXT, "--power", "2", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["group"]["order"] == 4
    assert report["levels"]["2"]["order"] == 16
    assert report["levels"]["2"]["abelian_invariants"] == "Z2 x Z2 x Z2 x Z2"
    assert report["delta"] == 8


def test_tensor_text_output(capsys):
    code, out, _ = run(capsys, "tensor", V4_TEXT)
    assert code == 0
    assert "order 16" in out
    assert "delta subgroup: order 8" in out


def test_tensor_corpus_name(capsys):
    code, out, _ = run(capsys, "tensor", "S3", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["group"]["name"] == "S3"
    assert report["levels"]["2"]["order"] == 6


def test_tensor_higher_power(capsys):
    code, out, _ = run(capsys, "tensor", "V4", "--power", "3", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["levels"]["3"]["order"] == 256


def test_tensor_exterior_and_h2(capsys):
    code, out, _ = run(capsys, "tensor", "S3", "--exterior", "--h2",
                       "--json")
    assert code == 0
    report = json.loads(out)
    assert report["exterior"]["order"] == 3
    assert report["h2"]["agree"] is True


def test_tensor_parse_error_exit_1(capsys):
    code, out, err = run(capsys, "tensor", "< a | a^$ >")
    assert code == 1
    assert "offset 8" in err
    assert not out


def test_tensor_unbalanced_exit_1(capsys):
    code, _, err = run(capsys, "tensor", "< a | a^2")
    assert code == 1
    assert "input error" in err


def test_tensor_limit_exit_2(capsys):
    code, _, err = run(capsys, "tensor", "Z2^3", "--power", "3",
                       "--max-cosets", "500")
    assert code == 2
    assert "limit exceeded" in err


def test_tensor_power_below_2_rejected(capsys):
    code, _, err = run(capsys, "tensor", "V4", "--power", "1")
    assert code == 1
    assert "--power" in err


def test_tensor_json_deterministic(capsys):
    _, first, _ = run(capsys, "tensor", "D4", "--json")
    _, second, _ = run(capsys, "tensor", "D4", "--json")
    assert first == second


def test_cache_round_trip(tmp_path, capsys):
    cache = tmp_path / "cache"
    _, first, _ = run(capsys, "tensor", "Q8", "--json")
    files = list(cache.glob("*.json"))
    assert len(files) == 1
    # second run must replay the cached report byte for byte
    _, second, _ = run(capsys, "tensor", "Q8", "--json")
    assert first == second
    assert len(list(cache.glob("*.json"))) == 1


def test_no_cache_matches_cached(tmp_path, capsys):
    cache = tmp_path / "cache"
    _, cached, _ = run(capsys, "tensor", "C6", "--json")
    _, fresh, _ = run(capsys, "tensor", "C6", "--json", "--no-cache")
    assert cached == fresh
    assert len(list(cache.glob("*.json"))) == 1


def test_cache_key_separates_settings(tmp_path, capsys):
    cache = tmp_path / "cache"
    run(capsys, "tensor", "C4", "--json")
    run(capsys, "tensor", "C4", "--power", "3", "--json")
    assert len(list(cache.glob("*.json"))) == 2


def write_corpus(tmp_path, entries):
    path = tmp_path / "corpus.json"
    path.write_text(json.dumps(entries))
    return str(path)


def test_verify_small_corpus(tmp_path, capsys):
    corpus = write_corpus(tmp_path, [
        {"id": "C2", "presentation": "< a | a^2 >", "order": 2},
        {"id": "C3", "presentation": "< a | a^3 >", "order": 3},
    ])
    out = str(tmp_path / "out")
    code, table, _ = run(capsys, "verify", "--corpus", corpus,
                         "--suite", "identity", "--out", out)
    assert code == 0
    assert "0 fail" in table
    for name in ["results.json", "summary.csv", "verdicts.png",
                 "orders.png", "timings.png"]:
        assert os.path.exists(os.path.join(out, name)), name
    rows = json.loads(open(os.path.join(out, "results.json")).read())
    assert all(r["verdict"] in ("pass", "skipped") for r in rows)
    groups = {r["group"] for r in rows}
    assert {"C2", "C3"} <= groups


def test_verify_corpus_failure_exits_1(tmp_path, capsys):
    corpus = write_corpus(tmp_path, [
        {"id": "WRONG", "presentation": "< a | a^2 >", "order": 7},
    ])
    out = str(tmp_path / "out")
    code, table, _ = run(capsys, "verify", "--corpus", corpus,
                         "--suite", "identity", "--out", out)
    assert code == 1
    assert "fail" in table
    rows = json.loads(open(os.path.join(out, "results.json")).read())
    assert any(r["verdict"] == "fail" for r in rows)


def test_verify_missing_corpus_file(tmp_path, capsys):
    code, _, err = run(capsys, "verify", "--corpus",
                       str(tmp_path / "nope.json"))
    assert code == 1
    assert "corpus error" in err


def test_verify_schur_baer_writes_json(tmp_path, capsys):
    out = str(tmp_path / "sb")
    code, _, _ = run(capsys, "verify", "--suite", "schur-baer",
                     "--out", out)
    assert code == 0
    rows = json.loads(open(os.path.join(out, "results.json")).read())
    assert all(r["check"] == "schur-baer" for r in rows)
    assert all(r["verdict"] == "pass" for r in rows)


def test_verify_json_byte_stable(tmp_path, capsys):
    corpus = write_corpus(tmp_path, [
        {"id": "C4", "presentation": "< a | a^4 >", "order": 4},
        {"id": "V4", "presentation": V4_TEXT, "order": 4},
    ])
    blobs = []
    for tag in ("a", "b"):
        out = str(tmp_path / tag)
        code, _, _ = run(capsys, "verify", "--corpus", corpus,
                         "--suite", "identity", "--out", out)
        assert code == 0
        blobs.append(open(os.path.join(out, "results.json"), "rb").read())
    assert blobs[0] == blobs[1]


def test_verify_jobs_flag_stable(tmp_path, capsys):
    corpus = write_corpus(tmp_path, [
        {"id": "C2", "presentation": "< a | a^2 >", "order": 2},
        {"id": "C3", "presentation": "< a | a^3 >", "order": 3},
        {"id": "C4", "presentation": "< a | a^4 >", "order": 4},
    ])
    blobs = []
    for tag, jobs in (("j1", "1"), ("j4", "4")):
        out = str(tmp_path / tag)
        run(capsys, "verify", "--corpus", corpus, "--suite", "identity",
            "--out", out, "--jobs", jobs)
        blobs.append(open(os.path.join(out, "results.json"), "rb").read())
    assert blobs[0] == blobs[1]


def test_verify_max_cosets_skips(tmp_path, capsys):
    corpus = write_corpus(tmp_path, [
        {"id": "Z2^3",
         "presentation": "< a, b, c | a^2, b^2, c^2, [a, b], [a, c], [b, c] >",
         "order": 8},
    ])
    out = str(tmp_path / "out")
    code, table, _ = run(capsys, "verify", "--corpus", corpus,
                         "--suite", "identity", "--out", out,
                         "--max-cosets", "100")
    assert code == 0
    assert "skipped" in table
    rows = json.loads(open(os.path.join(out, "results.json")).read())
    assert not any(r["verdict"] == "fail" for r in rows)
    assert any(r["verdict"] == "skipped" for r in rows)


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
