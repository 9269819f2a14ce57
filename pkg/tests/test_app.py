import json

import pytest

from app import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, RunConfig, main, parse_primes
from utils.errors import ConfigError


def _run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(list(argv) + ["--format", "json", "--out", str(out)])
    rows = json.loads(out.read_text()) if out.exists() else None
    return code, rows


def test_classnum(tmp_path):
    code, rows = _run(tmp_path, "classnum", "--dmax", "30")
    assert code == EXIT_OK
    by_D = {r["D"]: r for r in rows}
    assert by_D[3] == {"D": 3, "fundamental": True, "h": 1, "u": 3}
    assert by_D[23]["h"] == 3
    assert by_D[12]["fundamental"] is False
    assert 5 not in by_D


def test_classnum_csv(tmp_path, capsys):
    assert main(["classnum", "--dmax", "8"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "D,fundamental,h,u"
    assert lines[1] == "3,True,1,3"


def test_hseries(tmp_path):
    code, rows = _run(tmp_path, "hseries", "--ramified", "11", "--dmax", "40", "--cache-dir", str(tmp_path / "cache"))
    assert code == EXIT_OK
    assert len(rows) == 41
    assert all(r["equal"] for r in rows)
    assert rows[0]["H_theta"] == "5/12"
    assert rows[3]["H_closed"] == "1/3"
    assert rows[3]["h"] == 1 and rows[3]["u"] == 3


@pytest.mark.parametrize("suite", ["mass", "rowsum", "trace", "hecke", "corollary", "embedding"])
def test_verify_suites(tmp_path, suite):
    code, rows = _run(
        tmp_path, "verify", "--suite", suite, "--ramified", "11",
        "--dmax", "60", "--mmax", "10", "--no-cache",
    )
    assert code == EXIT_OK
    assert rows and all(r["ok"] for r in rows)


def test_verify_congruence(tmp_path):
    code, rows = _run(
        tmp_path, "verify", "--suite", "congruence", "--ramified", "11",
        "--l", "5", "--dmax", "100", "--pmax", "50", "--no-cache",
    )
    assert code == EXIT_OK
    assert {r["suite"] for r in rows} == {"eigenvalue", "coefficient"}


def test_verify_congruence_negative_control(tmp_path):
    code, _ = _run(
        tmp_path, "verify", "--suite", "congruence", "--ramified", "11",
        "--l", "7", "--dmax", "100", "--pmax", "50", "--no-cache",
    )
    assert code == EXIT_FAILED


def test_congruence_needs_l(tmp_path):
    code, _ = _run(tmp_path, "verify", "--suite", "congruence", "--ramified", "11", "--no-cache")
    assert code == EXIT_CONFIG


def test_congruence_l_dividing_w(tmp_path):
    code, _ = _run(
        tmp_path, "verify", "--suite", "congruence", "--ramified", "11", "--l", "3", "--pmax", "50", "--no-cache",
    )
    assert code == EXIT_CONFIG


@pytest.mark.parametrize(
    "argv",
    [
        ["hseries", "--ramified", "2,3"],
        ["hseries", "--ramified", "11", "--M", "11"],
        ["hseries", "--ramified", "2", "--M", "4"],
        ["hseries", "--ramified", "11", "--dmax", "0"],
        ["hseries", "--ramified", "x"],
        ["shatable", "--ramified", "11"],
        ["shatable", "--ramified", "11", "--l", "4"],
        ["classnum", "--dmax", "2"],
    ],
)
def test_invalid_configuration(tmp_path, argv):
    code, _ = _run(tmp_path, *argv)
    assert code == EXIT_CONFIG


def test_shatable(tmp_path):
    code, rows = _run(tmp_path, "shatable", "--ramified", "11", "--l", "5", "--dmax", "100", "--no-cache")
    assert code == EXIT_OK
    assert rows[0]["D"] == 3
    assert {"h_mod_l", "m_mod_l", "agree"} <= set(rows[0])


def test_graph(tmp_path):
    code, rows = _run(tmp_path, "graph", "--ramified", "11", "--no-cache")
    assert code == EXIT_OK
    stats = rows[0]
    assert stats["prime"] == 2
    assert stats["num_nodes"] == 2
    assert stats["adjacency_equals_brandt"] is True


def test_run_config_validation():
    assert RunConfig(ramified=[11]).validate().N == 11
    with pytest.raises(ConfigError):
        RunConfig(ramified=[11], format="xml").validate()
    with pytest.raises(ConfigError):
        RunConfig(ramified=[11], workers=0).validate()
    assert parse_primes("2, 3,11") == [2, 3, 11]


@pytest.mark.parametrize("suite", ["corollary", "embedding"])
def test_mixed_suites_share_one_csv_schema(tmp_path, suite):
    out = tmp_path / "rows.csv"
    code = main([
        "verify", "--suite", suite, "--ramified", "11", "--dmax", "60", "--no-cache", "--out", str(out),
    ])
    assert code == EXIT_OK
    text = out.read_text()
    lines = text.splitlines()
    assert lines[0] == "suite,name,index,expected,actual,ok"
    assert all(line.count(",") == 5 for line in lines)
    assert "nan" not in text


@pytest.mark.parametrize(
    "argv",
    [
        ["hseries", "--ramified", "11", "--dmax", "80"],
        ["verify", "--suite", "corollary", "--ramified", "2,3,11", "--dmax", "80"],
        ["verify", "--suite", "hecke", "--ramified", "11", "--mmax", "12"],
    ],
)
def test_output_is_byte_identical_across_runs(tmp_path, argv):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    assert main(argv + ["--no-cache", "--out", str(first)]) == EXIT_OK
    assert main(argv + ["--no-cache", "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_output_does_not_depend_on_worker_count(tmp_path):
    argv = ["hseries", "--ramified", "2,3,11", "--dmax", "60", "--no-cache"]
    serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
    assert main(argv + ["--workers", "1", "--out", str(serial)]) == EXIT_OK
    assert main(argv + ["--workers", "2", "--out", str(parallel)]) == EXIT_OK
    assert serial.read_bytes() == parallel.read_bytes()
