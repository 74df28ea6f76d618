import json
import re
import subprocess
import sys

import pytest

from conftest import BAD, DATA, within_sigma
from djsim.cli import main
from djsim.noise import readout_rate_for_dominant


def run_cli(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def strip_time(text):
    d = json.loads(text)
    d.pop("wall_time_ms")
    return d


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p
    return _write


def test_run_constant_text(capsys):
    code, out, _ = run_cli(capsys, "run", DATA / "dj_constant.qasm", "--shots", 8000, "--seed", 0)
    assert code == 0
    assert out == "000: 8000 (100.0%)\n"


def test_run_sorted_by_count_then_key(capsys):
    code, out, _ = run_cli(capsys, "run", DATA / "bell.qasm", "--seed", 1)
    lines = out.splitlines()
    counts = [int(line.split()[1]) for line in lines]
    assert code == 0 and counts == sorted(counts, reverse=True)
    assert {line[:2] for line in lines} == {"00", "11"}


def test_run_json_schema(capsys):
    code, out, _ = run_cli(capsys, "run", DATA / "dj_balanced.qasm", "--json")
    d = json.loads(out)
    assert code == 0
    assert d["schema"] == "djsim/1"
    assert d["histogram"] == {"shots": 8000, "seed": 0, "counts": {"100": 8000}}
    assert (d["shots"], d["seed"]) == (8000, 0)
    assert isinstance(d["wall_time_ms"], float)


def test_run_with_noise(capsys, write):
    noise = write("n.json", json.dumps({"readout_flip": 0.024, "depolarizing": 0.0}))
    code, out, _ = run_cli(capsys, "run", DATA / "dj_balanced.qasm", "--noise", noise,
                           "--shots", 8000, "--seed", 0, "--json")
    counts = json.loads(out)["histogram"]["counts"]
    assert code == 0
    assert max(counts, key=counts.get) == "100"
    assert within_sigma(counts["100"], 8000, (1 - 0.024) ** 3)


def test_run_missing_file(capsys):
    code, _, err = run_cli(capsys, "run", "missing.qasm")
    assert code == 2 and "file not found" in err


@pytest.mark.parametrize("path", sorted(BAD.glob("*.qasm")), ids=lambda p: p.name)
def test_bad_corpus_exit_2_with_location(capsys, path):
    code, out, err = run_cli(capsys, "run", path)
    assert code == 2 and out == ""
    m = re.match(re.escape(str(path)) + r":(\d+):(\d+): \S", err)
    assert m and int(m.group(1)) >= 1 and int(m.group(2)) >= 1


def test_bad_noise_config(capsys, write):
    noise = write("n.json", '{"readout_flip": 2}')
    code, _, err = run_cli(capsys, "run", DATA / "bell.qasm", "--noise", noise)
    assert code == 2 and "noise" in err


@pytest.mark.parametrize("argv", [[], ["bogus"], ["run"], ["run", "x.qasm", "--shots", "abc"],
                                  ["run", "x.qasm", "--shots", "0"], ["dj", "t", "--seed", "-1"]])
def test_usage_errors_exit_1(capsys, argv):
    code, _, _ = run_cli(capsys, *argv)
    assert code == 1


def test_dj_table1(capsys):
    code, out, _ = run_cli(capsys, "dj", DATA / "table1.txt", "--json")
    d = json.loads(out)
    assert code == 0
    assert (d["verdict"], d["outcome"], d["oracle_queries"], d["classical_queries"]) == \
        ("Constant", "000", 1, 5)
    assert d["histogram"]["counts"] == {"000": 8000}


def test_dj_table2_text(capsys):
    code, out, _ = run_cli(capsys, "dj", DATA / "table2.txt")
    assert code == 0
    assert "verdict: Balanced" in out and "outcome: 100" in out
    assert "quantum_queries: 1" in out and "100: 8000 (100.0%)" in out


def test_dj_n2_xor(capsys, write):
    t = write("t.txt", "n=2\n00 0\n01 1\n10 1\n11 0\n")
    code, out, _ = run_cli(capsys, "dj", t, "--json")
    assert code == 0 and json.loads(out)["verdict"] == "Balanced"
    assert json.loads(out)["outcome"] == "11"


def test_dj_promise_violation(capsys, write):
    t = write("t.txt", "n=2\n00 1\n01 0\n10 0\n11 0\n")
    code, _, err = run_cli(capsys, "dj", t)
    assert code == 3 and "0.25" in err


def test_dj_bad_table(capsys, write):
    t = write("t.txt", "n=2\n00 1\n0x 0\n")
    code, _, err = run_cli(capsys, "dj", t)
    assert code == 2 and "line 3" in err


def test_dj_with_noise(capsys, write):
    noise = write("n.json", json.dumps({"readout_flip": readout_rate_for_dominant(0.95)}))
    code, out, _ = run_cli(capsys, "dj", DATA / "table1.txt", "--noise", noise, "--json")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "Constant"
    assert within_sigma(d["histogram"]["counts"]["000"], 8000, 0.95)


@pytest.mark.parametrize("table,line", [("table1.txt", "x q[3];"),
                                        ("table2.txt", "cx q[2], q[3];")])
def test_oracle_example_tables(capsys, table, line):
    code, out, _ = run_cli(capsys, "oracle", DATA / table)
    assert code == 0
    assert out.splitlines()[-1] == line


def test_oracle_identity_json(capsys, write):
    t = write("id.txt", "n=1\n0 0\n1 1\n")
    code, out, _ = run_cli(capsys, "oracle", t, "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["gates"] == ["cx q[0], q[1];"]
    assert d["permutation"] == [0, 3, 2, 1]


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "run", DATA / "bell.qasm", "--json", "--out", dest)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["schema"] == "djsim/1"


@pytest.mark.parametrize("argv", [
    ["run", DATA / "bell.qasm", "--json", "--seed", 5],
    ["dj", DATA / "table2.txt", "--json"],
    ["oracle", DATA / "table2.txt", "--json"],
])
def test_json_deterministic(capsys, argv):
    _, a, _ = run_cli(capsys, *argv)
    _, b, _ = run_cli(capsys, *argv)
    assert strip_time(a) == strip_time(b)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "djsim", "run", str(DATA / "dj_constant.qasm")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "000: 8000 (100.0%)\n"
