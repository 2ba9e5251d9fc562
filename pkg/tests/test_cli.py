import csv
import hashlib
import json

import pytest

from ebk import cli, sections

EXAMPLE = {"schema": 1, "model": {"polarization": [2, 1]}, "action": {"group": "su2"}}
HALF = {"schema": 1, "model": {"polarization": [1]},
        "action": {"group": "circle", "weights": [1], "shift": "1/2"}}


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_dims_reproduces_example_table(tmp_path):
    cfg = write(tmp_path, {**EXAMPLE, "k_range": [1, 5]})
    assert cli.main(["dims", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "dims.csv")
    assert set(rows[0]) == set(cli.COLUMNS)
    for k in range(1, 6):
        mults = {r["component"]: int(r["value"]) for r in rows if r["k"] == str(k) and r["quantity"] == "mult"}
        assert mults == {f"weight({3 * k - 2 * j})": 1 for j in range(k + 1)}
        full = [r for r in rows if r["k"] == str(k) and r["component"] == "full"]
        assert int(full[0]["value"]) == (2 * k + 1) * (k + 1)


def test_decompose_reports_complete(tmp_path):
    cfg = write(tmp_path, {**EXAMPLE, "k_list": [2, 4]})
    assert cli.main(["decompose", "--config", cfg, "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "decompose.json").read_text())
    assert summary["passed"] and summary["result"]["levels"]["4"]["complete"]
    errs = [float(r["value"]) for r in read_rows(tmp_path / "decompose.csv") if r["quantity"] == "orthonormality_error"]
    assert max(errs) < 1e-12


def test_density_csv_format(tmp_path):
    cfg = write(tmp_path, {**HALF, "weight": 0, "k_list": [2, 4], "points": ["t=1/2", {"id": "q", "name": "north"}]})
    assert cli.main(["density", "--config", cfg, "--out", str(tmp_path)]) == 0
    raw = (tmp_path / "density.csv").read_bytes()
    assert b"\r" not in raw
    rows = read_rows(tmp_path / "density.csv")
    assert [(r["k"], r["point_id"]) for r in rows] == [("2", "t=1/2"), ("2", "q"), ("4", "t=1/2"), ("4", "q")]
    # (k + 1) C(k, k/2) / 2^k at k = 2 is 3/2; 17 significant digits
    assert float(rows[0]["value"]) == pytest.approx(1.5, rel=1e-14)
    assert all(r["value"] == "%.17g" % float(r["value"]) for r in rows)
    assert float(rows[1]["value"]) == 0.0
    assert all(r["component"] == "weight(0)" for r in rows)


def test_scan_and_tolerance_flags(tmp_path):
    base = {**HALF, "weight": 0, "k_range": [16, 256, 16], "points": ["t=1/2", "t=3/10"]}
    ok = write(tmp_path, {**base, "tolerances": {"expected_exponent": 0.5, "exponent_tol": 0.05}}, "ok.json")
    assert cli.main(["scan", "--config", ok, "--out", str(tmp_path)]) == 0
    series = json.loads((tmp_path / "scan.json").read_text())["result"]["series"]
    assert series["t=3/10"]["decay"]["kind"] == "rapid"
    assert series["t=1/2"]["passed"] == {"exponent": True}
    assert series["t=3/10"]["prediction"]["applicable"] is False
    bad = write(tmp_path, {**base, "tolerances": {"expected_exponent": 1.0, "exponent_tol": 0.05}}, "bad.json")
    assert cli.main(["scan", "--config", bad, "--out", str(tmp_path / "b")]) == 1


def test_fit_multiplicity(tmp_path):
    cfg = write(tmp_path, {"schema": 1, "model": {"polarization": [1, 1]},
                           "action": {"group": "circle", "weights": [1, 1], "shift": 1},
                           "weight": 0, "quantity": "multiplicity", "k_range": [100, 1000, 100],
                           "tolerances": {"expected_exponent": 1.0, "exponent_tol": 0.02}})
    assert cli.main(["fit", "--config", cfg, "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "fit.json").read_text())["result"]
    assert summary["prediction"]["exponent"] == 1.0 and summary["passed"]["exponent"]


def test_ladder_task(tmp_path):
    cfg = write(tmp_path, {**EXAMPLE, "ladder": 3, "k_range": [3, 18, 3], "points": ["offdiag-sample"]})
    assert cli.main(["ladder", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "ladder.csv")
    assert rows[0]["component"] == "ladder(3)" and len(rows) == 6
    pred = json.loads((tmp_path / "ladder.json").read_text())["result"]["series"]["offdiag-sample"]["prediction"]
    assert pred["exponent"] == 2.0


def test_outputs_are_deterministic_across_threads(tmp_path):
    cfg = write(tmp_path, {**EXAMPLE, "weight": 3, "k_list": [1, 3, 5, 7, 9, 11],
                           "points": ["offdiag-sample", [[1, [0, 1]], [[0.5, 0], 0.5]]]})
    cli.main(["scan", "--config", cfg, "--out", str(tmp_path / "a"), "--threads", "1"])
    cli.main(["scan", "--config", cfg, "--out", str(tmp_path / "b"), "--threads", "4"])
    for name in ("scan.csv", "scan.json"):
        assert digest(tmp_path / "a" / name) == digest(tmp_path / "b" / name)


@pytest.mark.parametrize("cfg,task", [
    ({**HALF, "k_list": [], "points": ["north"]}, "scan"),
    ({**HALF, "k_list": [1, 2], "points": ["north"]}, "density"),
    ({**HALF, "schema": 2, "k_list": [2]}, "dims"),
    ({**HALF, "k_list": [2, 4]}, "density"),
    ({**EXAMPLE, "k_list": [1, 2]}, "ladder"),
    ({**EXAMPLE, "k_list": [2, 1]}, "dims"),
    ({**EXAMPLE, "action": {"group": "u3"}, "k_list": [1]}, "dims"),
    ({**EXAMPLE, "k_list": [1], "points": ["east"]}, "density"),
    ({"schema": 1, "model": {"polarization": [1]}, "action": {"group": "circle", "weights": [1, 1]},
      "k_list": [1]}, "dims"),
])
def test_invalid_configs_exit_2(tmp_path, cfg, task):
    assert cli.main([task, "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 2


def test_missing_and_unreadable_config(tmp_path):
    assert cli.main(["dims"]) == 2
    assert cli.main(["dims", "--config", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["dims", "--config", str(bad)]) == 2
    assert cli.main(["dims", "--config", str(bad), "--threads", "0"]) == 2


def test_numerical_breakdown_exit_3(tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise sections.NumericalBreakdown("forced")

    monkeypatch.setattr(sections, "isotypic_decompose", boom)
    cfg = write(tmp_path, {**EXAMPLE, "k_list": [1]})
    assert cli.main(["decompose", "--config", cfg, "--out", str(tmp_path)]) == 3


def test_verify_task(tmp_path, capsys):
    assert cli.main(["verify", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 11
    summary = json.loads((tmp_path / "verify.json").read_text())
    assert summary["result"]["all_passed"]


def test_verify_failure_exit_1(tmp_path, monkeypatch):
    from ebk import verification

    failing = verification.CriterionResult(1, "forced", False, "", 0.0, 1.0)
    monkeypatch.setattr(verification, "run_all", lambda: [failing])
    assert cli.main(["verify", "--out", str(tmp_path)]) == 1
