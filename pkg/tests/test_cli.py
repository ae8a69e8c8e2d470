"""Tests for the sinai-lab command line."""
import json

from sinai_lab.cli import main, run_config
from sinai_lab.utils import read_from_json


def _write_config(path, **changes):
    document = {
        "schema": 1,
        "suite": "density",
        "law": {"kind": "two-point", "param": 0.3},
        "seed": 1,
        "threads": 1,
        "params": {"from": -1, "to": 1, "step": 0.5},
    }
    document.update(changes)
    path.write_text(json.dumps(document))
    return str(path)


def test_density_table_to_stdout(capsys):
    assert main(["density", "table", "--from", "-1", "--to", "1", "--step", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,phi,error_bound"
    assert len(lines) == 6
    assert lines[3] == "0.0,0.5,0.0"


def test_density_table_to_file(tmp_path):
    target = tmp_path / "phi.csv"
    assert main(["density", "table", "--from", "0", "--to", "1", "--step", "0.25", "--output", str(target)]) == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "x,phi,error_bound"
    assert len(lines) == 6
    assert lines[1] == "0.0,0.5,0.0"


def test_run_and_report(tmp_path, capsys):
    out = tmp_path / "results"
    config = _write_config(tmp_path / "density.json")
    assert main(["run", config, "--out", str(out)]) == 0
    document = read_from_json(str(out / "density.json"))
    assert document["pass"] is True
    assert document["name"] == "density"
    assert document["law"] == {"kind": "two-point", "param": 0.3}
    assert (out / "density.csv").exists()
    assert main(["report", str(out)]) == 0
    assert "## density (PASS)" in capsys.readouterr().out


def test_invalid_config_exits_with_one(tmp_path):
    config = _write_config(tmp_path / "bad.json", sedd=1)
    assert main(["run", config]) == 1
    assert main(["run", str(tmp_path / "missing.json")]) == 1
    assert main(["run", config, "--threads", "0"]) == 1
    assert main(["report", str(tmp_path / "absent")]) == 1


def test_runs_are_byte_identical_across_repeats_and_threads(tmp_path):
    config = _write_config(
        tmp_path / "renewal.json",
        suite="renewal",
        params={"h": 2, "N": 600, "x_grid": [0, 2, -2]},
    )
    outputs = []
    for name, threads in (("first", 1), ("again", 1), ("pooled", 2)):
        out = tmp_path / name
        assert run_config(config, threads=threads, out=str(out)) in (0, 2)
        outputs.append(((out / "renewal.json").read_bytes(), (out / "renewal.csv").read_bytes()))
    assert outputs[0] == outputs[1] == outputs[2]
