import csv
import io
import json
import subprocess
import sys

import pytest

from bakersim.cli import SCHEMA_LINE, SWEEP_FIELDS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0] == SCHEMA_LINE
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    trailer = [ln for ln in lines[1:] if ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body)))), trailer


def test_verify_passes(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, text, _ = run(capsys, "verify", "--qubits", "6", "--out", str(out))
    assert code == 0
    assert "FAIL" not in text and text.count("PASS") == 7
    assert json.loads(out.read_text())["passed"] is True


def test_verify_fault_is_named(capsys):
    code, text, err = run(capsys, "verify", "--qubits", "5", "--inject-fault", "momentum-phase")
    assert code == 1
    assert "first failing invariant: closed-form equality" in err


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--no-such-flag"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--qubits", "12"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["fidelity-sweep", "--qubits", "8", "--y", "01x1"])
    assert exc.value.code == 2


def test_dump_map_rows(capsys):
    code, text, _ = run(capsys, "dump-map", "--qubits", "4", "--split", "2")
    assert code == 0
    rows, trailer = parse_csv(text)
    assert len(rows) == 256
    assert list(rows[0]) == ["xi0", "xi1", "re", "im", "re_direct", "im_direct"]
    dev = max(abs(complex(float(r["re"]), float(r["im"])) - complex(float(r["re_direct"]), float(r["im_direct"])))
              for r in rows)
    assert dev < 1e-10
    assert trailer[-1].startswith("# N=4 n=2 max_dev=")


def test_dump_map_smallest_case(capsys):
    code, text, _ = run(capsys, "dump-map", "--qubits", "2", "--split", "0")
    assert code == 0
    rows, _ = parse_csv(text)
    got = {(r["xi0"], r["xi1"]): complex(float(r["re"]), float(r["im"])) for r in rows}
    assert got[("00", "00")] == pytest.approx(0.5 - 0.5j)
    assert got[("10", "00")] == pytest.approx(0.5 + 0.5j)
    assert got[("00", "01")] == pytest.approx(0.5 + 0.5j)
    # the position bit has to shift into place
    assert got[("00", "10")] == 0


def test_dump_map_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["dump-map", "--qubits", "5", "--out", str(a)]) == 0
    assert main(["dump-map", "--qubits", "5", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_sweep_grid(capsys):
    code, text, _ = run(capsys, "fidelity-sweep", "--qubits", "10", "11", "12",
                        "--iterations", "1", "2", "--no-random-y")
    assert code == 0
    rows, _ = parse_csv(text)
    assert len(rows) == 6
    assert list(rows[0]) == SWEEP_FIELDS
    for r in rows:
        assert 0.8 < float(r["fidelity"]) < 1
        assert r["y"] == "0101"


def test_sweep_companion_rows(capsys):
    code, text, _ = run(capsys, "fidelity-sweep", "--qubits", "8", "--seed", "3")
    rows, _ = parse_csv(text)
    assert code == 0 and len(rows) == 2
    assert rows[0]["y"] == "0101"


def test_sweep_jobs_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    grid = ["fidelity-sweep", "--qubits", "8", "9", "--iterations", "1", "2", "--seed", "7"]
    assert main(grid + ["--jobs", "1", "--out", str(a)]) == 0
    assert main(grid + ["--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_json(capsys):
    code, text, _ = run(capsys, "fidelity-sweep", "--qubits", "8", "--format", "json", "--y", "0011",
                        "--kmax", "2", "--no-random-y")
    assert code == 0
    data = json.loads(text)
    assert data["records"][0]["y"] == "0011"
    got, want = data["delta_law"]["matrix"], data["delta_law"]["expected"]
    assert max(abs(a - b) for ra, rb in zip(got, want) for a, b in zip(ra, rb)) < 1e-12
    assert data["census"][0]["states"] == 16


def test_sweep_infeasible_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fidelity-sweep", "--qubits", "6", "--iterations", "2"])
    assert exc.value.code == 2


def test_io_error_exit_3(tmp_path, capsys):
    code = main(["dump-map", "--qubits", "3", "--out", str(tmp_path / "missing" / "x.csv")])
    assert code == 3
    assert "cannot write" in capsys.readouterr().err


def test_atypical(capsys):
    code, text, _ = run(capsys, "atypical", "--gap", "4", "6", "--ignored", "4", "6")
    assert code == 0
    rows, _ = parse_csv(text)
    assert [int(r["n"]) for r in rows] == [8, 12]
    assert float(rows[1]["distance"]) < float(rows[0]["distance"])
    with pytest.raises(SystemExit):
        main(["atypical", "--gap", "4", "--ignored", "4", "6"])


def test_identities_subcommand(capsys, tmp_path):
    out = tmp_path / "ids.json"
    code, text, _ = run(capsys, "identities", "--out", str(out))
    assert code == 0
    assert text.count("PASS") == len(json.loads(out.read_text()))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bakersim", "dump-map", "--qubits", "2", "--split", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith(SCHEMA_LINE)
