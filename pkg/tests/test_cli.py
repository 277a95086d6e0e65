import json

import pytest

from k1hecke import cli
from k1hecke.cli import RunConfig, main, run


def test_run_radon_passes(tmp_path, capsys):
    out = tmp_path / "r"
    assert main(["run", "--n", "2", "--q", "3", "--suite", "radon", "--out", str(out),
                 "--cache-dir", str(tmp_path / "c")]) == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["summary"]["all_pass"] and rep["summary"]["fail"] == 0
    assert all(r["suite"] == "radon" for r in rep["records"])
    assert "| radon |" in (tmp_path / "r.md").read_text()


def test_reports_are_byte_identical(tmp_path):
    args = ["run", "--q", "2", "--kind", "PGL", "--suite", "loc-glob,cusp", "--cache-dir", str(tmp_path / "c")]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.md").read_bytes() == (tmp_path / "b.md").read_bytes()


def test_loc_glob_window(tmp_path):
    rep = run(RunConfig(N=2, q=2, window=[[1, 0]], suites=["loc-glob"], cache_dir=str(tmp_path)))
    assert rep["summary"]["all_pass"]
    assert any("invertible" in r["check"] for r in rep["records"])


def test_empty_suite_list(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"N": 2, "q": 2, "suites": []}))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "e")]) == 0
    rep = json.loads((tmp_path / "e.json").read_text())
    assert rep["records"] == [] and rep["summary"]["all_pass"]


@pytest.mark.parametrize("argv", [
    ["run", "--q", "6"],
    ["run", "--q", "3", "--suite", "nonsense"],
    ["run", "--n", "2", "--window", "0,1"],
    ["run", "--q", "3", "--z", "0"],
    ["character-table", "--n", "3", "--q", "2"],
])
def test_config_errors_exit_3(argv, capsys):
    assert main(argv) == 3
    assert "error" in capsys.readouterr().err


def test_budget_exit_3(tmp_path):
    assert main(["run", "--n", "3", "--q", "5", "--suite", "eta", "--out", str(tmp_path / "b")]) == 3
    rep = json.loads((tmp_path / "b.json").read_text())
    assert rep["records"][0]["status"] == "skipped"
    assert "budget" in rep["records"][0]["witness"]["reason"]


def test_failing_check_exit_2(monkeypatch, tmp_path):
    def broken(G, **_):
        return [{"suite": "radon", "check": "forced", "status": "fail", "witness": {"x": 1}}]
    monkeypatch.setitem(cli.SUITES, "radon", broken)
    assert main(["run", "--q", "2", "--suite", "radon", "--out", str(tmp_path / "f")]) == 2


def test_hard_error_halts(monkeypatch, tmp_path):
    def boom(G, **_):
        raise RuntimeError("boom")
    monkeypatch.setitem(cli.SUITES, "radon", boom)
    rep = run(RunConfig(N=2, q=2, suites=["radon", "cusp"], cache_dir=str(tmp_path)))
    assert rep["records"][0]["status"] == "fail"
    assert rep["records"][1]["status"] == "skipped"
    assert cli.exit_code(rep) == 2


def test_census_gl2_f2(tmp_path):
    assert main(["census", "--q", "2", "--window", "1,0", "--out", str(tmp_path / "c"),
                 "--cache-dir", str(tmp_path / "cache")]) == 0
    doc = json.loads((tmp_path / "c.json").read_text())
    rows = {tuple(r["lambda"]): r for r in doc["rows"]}
    cols = ("A", "V", "expected", "local_oracle", "global_oracle", "raw_transitions")
    assert [rows[(0, 0)][k] for k in cols] == [6] * 6
    assert [rows[(1, 0)][k] for k in cols] == [9] * 6


def test_census_gl1(tmp_path):
    main(["census", "--n", "1", "--q", "3", "--window", "1;2", "--out", str(tmp_path / "c")])
    doc = json.loads((tmp_path / "c.json").read_text())
    assert [r["lambda"] for r in doc["rows"]] == [[0], [1], [2]]
    assert all(r["A"] == r["V"] == 2 for r in doc["rows"])


def test_census_cache_round_trip(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("K1HECKE_CACHE_DIR", str(tmp_path / "envcache"))
    main(["census", "--q", "2", "--window", "1,0"])
    capsys.readouterr()
    assert main(["cache", "list"]) == 0
    listing = json.loads(capsys.readouterr().out)
    assert listing["cache_dir"] == str(tmp_path / "envcache")
    assert len(listing["entries"]) == 2
    # a second run reads the cache and gives the same table
    first = (tmp_path / "envcache")
    main(["census", "--q", "2", "--window", "1,0", "--out", str(tmp_path / "x")])
    main(["census", "--q", "2", "--window", "1,0", "--out", str(tmp_path / "y")])
    assert (tmp_path / "x.json").read_bytes() == (tmp_path / "y.json").read_bytes()
    assert main(["cache", "clear"]) == 0
    assert "removed 2" in capsys.readouterr().out
    assert not list(first.glob("*.json"))


def test_corrupt_cache_entry_is_recomputed(tmp_path):
    from k1hecke import cache
    main(["census", "--q", "2", "--window", "1,0", "--cache-dir", str(tmp_path)])
    for p in tmp_path.glob("census-*.json"):
        doc = json.loads(p.read_text())
        doc["row"]["A"] = 999
        p.write_text(json.dumps(doc))
    assert main(["census", "--q", "2", "--window", "1,0", "--cache-dir", str(tmp_path),
                 "--out", str(tmp_path / "o")]) == 0
    rows = json.loads((tmp_path / "o.json").read_text())["rows"]
    assert all(r["A"] != 999 for r in rows)
    assert cache.entries(tmp_path)


def test_character_table_pgl2_f3(tmp_path):
    assert main(["character-table", "--q", "3", "--kind", "PGL", "--out", str(tmp_path / "t")]) == 0
    doc = json.loads((tmp_path / "t.json").read_text())
    assert len(doc["characters"]) == 1 and doc["characters"][0]["dim"] == 2
    assert all(r["match"] for r in doc["eta"])
    assert all(r["eta"] == "0" for r in doc["eta"] if r["degree"] == 1)
