import csv
import io
import json
import os
import subprocess
import sys

import pytest

from rlsc.cli import CSV_HEADER, bench_row, main


@pytest.fixture
def words_file(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("100\n010\n001\n", encoding="utf-8")
    return str(path)


def test_compile_regex(tmp_path, capsys):
    assert main(["compile", "--regex", "0*10*", "-n", "8", "--backend", "seq", "-o", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["chi"] == 2 and report["ancillae"] == 0
    for key in ("depth", "gates_total", "cnots", "ancillae", "chi", "d_min_dfa", "stage_times_ms"):
        assert key in report
    qasm = (tmp_path / "circuit.qasm").read_text()
    assert qasm.startswith("OPENQASM 3.0;")


def test_compile_complement_strings_verify(tmp_path, words_file, capsys):
    code = main(["compile", "--strings", words_file, "-n", "3", "--complement", "--backend", "seq",
                 "--verify", "-o", str(tmp_path), "--emit", "qasm,json,report,mps"])
    assert code == 0
    out = capsys.readouterr().out
    assert "fidelity=" in out and "words=5" in out
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["fidelity"] >= 1 - 1e-9
    circuit = json.loads((tmp_path / "circuit.json").read_text())
    assert circuit["qubits"] == 3
    assert json.loads((tmp_path / "mps.json").read_text())["bond_dims"][0] == 1


def test_empty_language_exit_code(tmp_path, capsys):
    assert main(["compile", "--regex", "~", "-n", "4", "-o", str(tmp_path)]) == 2
    assert "no word" in capsys.readouterr().err


def test_syntax_error_exit_code(capsys):
    assert main(["compile", "--regex", "0*1(0", "-n", "4"]) == 2
    assert "offset 5" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    assert main(["compile", "--strings", "/nonexistent/words.txt"]) == 2


def test_state_cap_exit_code(capsys):
    code = main(["analyze", "--regex", "(0|1)*1(0|1)(0|1)(0|1)(0|1)(0|1)", "-n", "8", "--state-cap", "10"])
    assert code == 3


def test_verify_limit(capsys):
    assert main(["verify", "--regex", "0*10*", "-n", "13"]) == 2


def test_verify_command(capsys):
    assert main(["verify", "--regex", "0*|1*", "-n", "6", "--backend", "tree"]) == 0
    assert "fidelity=" in capsys.readouterr().out


def test_dfa_input(tmp_path, capsys):
    dfa = {"states": 2, "initial": 0, "accepting": [1],
           "transitions": [[0, "0", 0], [0, "1", 1], [1, "0", 1]]}
    path = tmp_path / "f1.json"
    path.write_text(json.dumps(dfa))
    assert main(["verify", "--dfa", str(path), "-n", "5", "--complement"]) == 0
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--dfa", str(bad), "-n", "5"]) == 2


def test_analyze_dicke3(tmp_path, capsys):
    from rlsc.families import dicke_words

    path = tmp_path / "d3.txt"
    path.write_text("\n".join(dicke_words(20, 3)) + "\n")
    assert main(["analyze", "--strings", str(path), "--emit-dfa", "-o", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    report = json.loads(text[: text.rindex("}") + 1])
    assert report["d_min_dfa"] == 4 and report["chi"] == 4
    assert "gates_total" not in report
    dag = json.loads((tmp_path / "dfa.json").read_text())
    assert dag["n"] == 20 and max(dag["layer_sizes"]) == 4


def test_analyze_full_language(capsys):
    assert main(["analyze", "--regex", "(0|1)*", "-n", "9"]) == 0
    assert json.loads(capsys.readouterr().out)["chi"] == 1


def test_bench_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "dicke", "--n", "6", "8", "--k", "2", "--backend", "seq", "tree", "--csv", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 5
    assert all(r[7] == "3" for r in rows[1:])


def test_bench_error_rows_continue():
    row = bench_row("random", 3, 20, "seq")
    assert row[4].startswith("error")
    assert len(row) == len(CSV_HEADER)


def test_bench_estimates_large_blocks():
    row = bench_row("dicke", 10, 3, "tree", max_block=2)
    assert row[6].startswith("~") and row[4] == "na"


def test_compile_is_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        d = tmp_path / name
        assert main(["compile", "--regex", "0*10*10*", "-n", "9", "--backend", "tree",
                     "--emit", "qasm,json,report", "-o", str(d)]) == 0
        outs.append(d)
    for f in ("circuit.qasm", "circuit.json"):
        assert (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
    r0, r1 = (json.loads((d / "report.json").read_text()) for d in outs)
    r0.pop("stage_times_ms"), r1.pop("stage_times_ms")
    assert r0 == r1


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "rlsc.cli", "compile", "--regex", "~", "-n", "2"],
                          capture_output=True, text=True, env=env, cwd=tmp_path)
    assert proc.returncode == 2
