import json

import pytest

from symbreak.cli import EXIT_FALSIFIED, EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS, main
from symbreak.colouring import parse_colouring
from symbreak.constructor import TheoremFalsified
from symbreak.graph import cycle_graph, parse_graph6, to_graph6
from symbreak.harness import (
    CACHE_ENV,
    ResultCache,
    VerificationRecord,
    analyze_graph,
    record_problems,
    resolve_cache_dir,
)

from conftest import CORPORA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_k2(capsys):
    code, out, _ = run(capsys, "analyze", "A_")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert (rec["d_prime"], rec["d_small"], rec["small_count"]) == ("INFINITE", "INFINITE", 1)


def test_analyze_k3(capsys):
    _, out, _ = run(capsys, "analyze", "Bw")
    assert json.loads(out)["aut_order"] == 6


def test_analyze_star_from_edge_list(tmp_path, capsys):
    path = tmp_path / "star.txt"
    path.write_text("6\n0 1\n0 2\n0 3\n0 4\n0 5\n")
    code, out, _ = run(capsys, "analyze", "--input", str(path), "--format", "edgelist", "--construct")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["d_small"] == 1 and rec["small_count"] == 0
    assert rec["trace"]["verified"] is True


def test_index_command(capsys):
    code, out, _ = run(capsys, "index", "E?~o")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["d_small"]["value"] == 1
    assert {"value", "method"} <= set(data["d_prime"])


def test_construct_star_and_c6(tmp_path, capsys):
    col, trace = tmp_path / "c.txt", tmp_path / "t.json"
    star = "Esa?"
    code, _, _ = run(capsys, "construct", star, "--output", str(col), "--trace", str(trace))
    g = parse_graph6(star)
    assert code == EXIT_OK
    assert len(parse_colouring(g, col.read_text()).colours) == 5
    assert json.loads(trace.read_text())["verified"] is True
    c6 = to_graph6(cycle_graph(6))
    code, out, err = run(capsys, "construct", c6)
    assert code == EXIT_OK
    assert json.loads(err)["case"] == "fallback"
    assert len(out.splitlines()) == 6


def test_construct_rejects_p3(capsys):
    code, _, err = run(capsys, "construct", "Bg")
    assert code == EXIT_USAGE and "6 vertices" in err


def test_construct_falsification_exit(monkeypatch, capsys):
    import symbreak.cli as cli

    def boom(g, seed=None):
        raise TheoremFalsified(to_graph6(g))

    monkeypatch.setattr(cli, "construct", boom)
    code, _, err = run(capsys, "construct", "Esa?")
    assert code == EXIT_FALSIFIED and "FATAL" in err


@pytest.mark.parametrize("argv", [["analyze", "A~"], ["analyze", "--input", "/nonexistent"], ["verify", "--input", "x"]])
def test_usage_errors(argv, capsys):
    code = main(argv) if argv[0] != "verify" else None
    if code is None:
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == EXIT_USAGE
    else:
        assert code == EXIT_USAGE


def test_unknown_claim_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--input", str(CORPORA / "graph4c.g6"), "--claim", "bogus"])
    assert exc.value.code == EXIT_USAGE


def test_too_large_graph_is_usage_error(capsys):
    big = to_graph6(parse_graph6("L" + "?" * 13))
    code, _, err = run(capsys, "analyze", big)
    assert code == EXIT_USAGE and "enumeration limit" in err


def test_verify_reports_violations(tmp_path, capsys):
    # K2 is an isolated edge, so kpw3 skips it
    path = tmp_path / "c.g6"
    path.write_text("A_\nBw\nCF\n")
    code, out, _ = run(capsys, "verify", "--input", str(path), "--claim", "kpw3", "--report", "json")
    summary = json.loads(out)
    assert code == EXIT_OK
    assert summary["claims"]["kpw3"]["skipped"] == 1
    assert summary["attaining_d_small_3"] == ["Bw"]
    # thm1 skipped for everything here (n < 6), so it trivially holds
    code, out, _ = run(capsys, "verify", "--input", str(path), "--claim", "thm1", "--report", "json")
    assert json.loads(out)["claims"]["thm1"]["total"] == 0


def test_verify_exit_one_on_violation(tmp_path, capsys, monkeypatch):
    import symbreak.harness as harness

    monkeypatch.setattr(harness, "claim_holds", lambda claim, rec: rec.graph6 != "CF")
    path = tmp_path / "c.g6"
    path.write_text("CF\nCN\n")
    code, out, _ = run(capsys, "verify", "--input", str(path), "--claim", "monotone")
    assert code == EXIT_VIOLATIONS and "violator: CF" in out


def test_verify_rejects_bad_corpus(tmp_path, capsys):
    path = tmp_path / "c.g6"
    path.write_text("CF\nnot graph6\n")
    code, _, err = run(capsys, "verify", "--input", str(path), "--claim", "monotone")
    assert code == EXIT_USAGE and "line 2" in err


def test_verify_jobs_agree(capsys):
    args = ["verify", "--input", str(CORPORA / "graph6c.g6"), "--claim", "thm1", "--claim", "monotone", "--report", "json"]
    _, one, _ = run(capsys, *args, "--jobs", "1")
    _, many, _ = run(capsys, *args, "--jobs", "3")
    assert one == many


def test_report_formats(capsys):
    base = ["stats", "--input", str(CORPORA / "graph5c.g6")]
    _, text, _ = run(capsys, *base, "--report", "text")
    assert "d_small" in text
    _, csv_out, _ = run(capsys, *base, "--report", "csv")
    assert csv_out.splitlines()[0] == "table,d_prime,d_small,count"
    _, js, _ = run(capsys, *base, "--report", "json")
    assert json.loads(js)["total"] == 21


def test_filters(capsys):
    path = str(CORPORA / "graph7.g6")
    _, out, _ = run(capsys, "stats", "--input", path, "--connected-only", "--regular-only", "--report", "json")
    assert json.loads(out)["total"] == 4
    _, out, _ = run(capsys, "stats", "--input", path, "--max-order", "6", "--report", "json")
    assert json.loads(out)["total"] == 0


def test_cache_round_trip(tmp_path):
    cache = ResultCache(tmp_path, {"max_colours": 4})
    rec, _ = analyze_graph(parse_graph6("Bw"))
    cache.store("Bw", rec)
    assert cache.lookup("Bw") == rec
    assert cache.lookup("CF") is None
    # relabelled K3 minus an edge: same graph, different string, must miss
    cache.store("BW", analyze_graph(parse_graph6("BW"))[0])
    assert cache.lookup("Bg") is None
    reopened = ResultCache(tmp_path, {"max_colours": 4})
    assert reopened.lookup("Bw") == rec
    assert ResultCache(tmp_path, {"max_colours": 3}).lookup("Bw") is None


def test_cache_skips_corrupt_lines(tmp_path, caplog):
    cache = ResultCache(tmp_path, {})
    rec, _ = analyze_graph(parse_graph6("Bw"))
    cache.store("Bw", rec)
    with open(cache.path, "a") as fh:
        fh.write("{not json\n")
        fh.write('{"key": "CF"}\n')
    reopened = ResultCache(tmp_path, {})
    assert reopened.lookup("Bw") == rec
    assert "corrupt" in caplog.text


def test_cache_dir_from_env(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert resolve_cache_dir(None) == str(tmp_path)
    assert resolve_cache_dir("other") == "other"
    args = ["verify", "--input", str(CORPORA / "graph5c.g6"), "--claim", "monotone", "--report", "json"]
    _, first, _ = run(capsys, *args)
    lines = (tmp_path / "records.ndjson").read_text().splitlines()
    assert len(lines) == 21
    _, second, _ = run(capsys, *args)
    assert first == second
    assert len((tmp_path / "records.ndjson").read_text().splitlines()) == 21


def test_record_invariants():
    for g6 in ("A_", "Bw", "CF", "Esa?", "Es\\o"):
        rec, _ = analyze_graph(parse_graph6(g6))
        assert record_problems(rec) == []
    bad = VerificationRecord("X", 1, 0, 1, 0, 1, 2, "x", True, True, 0.0)
    assert record_problems(bad)
