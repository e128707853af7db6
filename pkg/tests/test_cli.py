import csv
import io
import json

import pytest

from sepcrit.cli import EXIT_CONSISTENCY, EXIT_INFEASIBLE, EXIT_OK, EXIT_PARAM, main, parse_state
from sepcrit.serialize import dump, load
from sepcrit.states import werner


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_mum_json(capsys):
    code, out, _ = run(capsys, "validate", "--family", "mum", "--d", "3", "--kappa", "0.5")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["pass"] and max(doc["residuals"].values()) <= 1e-10


def test_validate_writes_family(capsys, tmp_path):
    path = tmp_path / "mub.json"
    code, _, _ = run(capsys, "validate", "--family", "mub", "--d", "5", "--out", str(path))
    assert code == EXIT_OK
    assert load(path).m == 6


def test_validate_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "validate", "--family", "gsic", "--d", "2", "--alpha", "0.25")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["axiom", "residual"] and len(rows) > 3


def test_validate_sic_construction(capsys):
    code, out, _ = run(capsys, "validate", "--family", "gsic", "--d", "3", "--construction", "sic")
    assert code == EXIT_OK and json.loads(out)["pass"]


@pytest.mark.parametrize("argv", [
    ("validate", "--family", "mum", "--d", "3", "--kappa", "0.3"),
    ("validate", "--family", "mub", "--d", "4"),
    ("validate", "--family", "gsic", "--d", "3"),
    ("evaluate", "--state", "werner:d=3,g=2", "--criterion", "THM2-S", "--kappa", "0.5"),
    ("evaluate", "--state", "nonsense:x=1", "--criterion", "THM2-S"),
    ("evaluate", "--state", "werner:d=3", "--criterion", "THM2-S"),
    ("threshold", "--family", "mix", "--criterion", "THM2-S"),
])
def test_parameter_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_PARAM
    assert "invalid parameters" in err


def test_infeasible_exit_3(capsys):
    code, _, err = run(capsys, "validate", "--family", "gsic", "--d", "3", "--alpha", "0.06")
    assert code == EXIT_INFEASIBLE
    assert "infeasible" in err


def test_failed_validation_exit_4(capsys):
    # an absurdly tight tolerance makes an otherwise fine family fail its check
    code, out, _ = run(capsys, "validate", "--family", "mum", "--d", "3", "--kappa", "0.5", "--tol", "1e-300")
    assert code == EXIT_CONSISTENCY
    assert json.loads(out)["pass"] is False


def test_evaluate_werner(capsys):
    code, out, _ = run(capsys, "evaluate", "--state", "werner:d=2,g=-0.5", "--criterion", "THM2-S",
                       "--kappa", "1.0", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["verdict"] == "Entangled" and doc["criterion"] == "THM2-S"


def test_evaluate_state_file_csv(capsys, tmp_path):
    path = tmp_path / "w.json"
    dump(werner(3, 0.5), path)
    code, out, _ = run(capsys, "evaluate", "--state", str(path), "--criterion", "MUB-M", "--format", "csv")
    assert code == EXIT_OK
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert row["criterion"] == "MUB-M" and row["verdict"] == "Inconclusive"


def test_parse_state_kinds():
    assert parse_state("maxent:d=3").d == 3
    assert parse_state("horodecki:a=0.5").d == 3
    assert parse_state("random:d=2,kind=pure,seed=4").provenance["seed"] == 4
    assert parse_state("bell-table:d=2,c=0.25;0.25;0.25;0.25").d == 2
    assert parse_state("bell:d=3,s=1,t=2,c=0.9").d == 3


def test_threshold_werner(capsys):
    code, out, _ = run(capsys, "threshold", "--family", "werner", "--d", "2", "--criterion", "THM2-S",
                       "--kappa", "1.0")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert abs(doc["threshold"]) <= 1e-6 and "log" not in doc


def test_threshold_mix_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "threshold", "--family", "mix", "--a", "0.875",
                       "--criterion", "THM3-R", "--pairing", "conjugate", "--alpha", "0.05", "--tol", "1e-5")
    assert code == EXIT_OK
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert abs(float(row["threshold"]) - 0.9966) <= 2e-3


def test_table1_table(capsys):
    code, out, _ = run(capsys, "table1", "--format", "table", "--tol", "1e-4")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 5 and lines[0].split()[1:] == ["MUM-T", "GSIC-J", "THM2-S", "THM3-R"]


def test_sweep_config(capsys, tmp_path):
    cfg = {"family": {"kind": "werner", "d": 2},
           "grid": {"start": -1, "stop": 1, "num": 5},
           "criteria": [{"criterion": "THM2-S", "d": 2, "kappa": 0.8},
                        {"criterion": "MUM-T", "d": 2, "kappa": 0.8}]}
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "sweep", "--config", str(path), "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    assert [r["criterion"] for r in rows[:2]] == ["THM2-S", "MUM-T"]
    assert rows[0]["verdict"] == "Entangled" and rows[-2]["verdict"] == "Inconclusive"
    code, out, _ = run(capsys, "sweep", "--config", str(path))
    assert len(json.loads(out)["rows"]) == 10
