import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from banachlab.cli import run

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "schema" / "report.json").read_text())
VERIFY_EX61 = ["verify", "--inequality", "delta_rho", "--space", "catalog:arc2d(ex61)", "--eps", "0.5,1.0",
               "--tau", "0.1,0.25"]


def call(capsys, argv):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, argv):
    code, out, err = call(capsys, argv)
    assert code in (0, 2, 3), err
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_modulus_example(capsys):
    code, doc = call_json(capsys, ["modulus", "--space", "catalog:lp(2,2)", "--kind", "delta_uacs", "--eps", "1.0",
                                   "--angles", "4096", "--format", "json"])
    assert code == 0
    r = doc["result"]
    assert r["lo"] <= 1 - 0.5 ** 0.5 <= r["hi"]
    assert r["hi"] - r["lo"] < 5e-3


def test_replay_csv_example(capsys):
    code, out, _ = call(capsys, ["replay", "--example", "62", "--n", "8", "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert all(float(r["norm_sum"]) == 2.0 for r in rows)


def test_verify_example(capsys):
    code, doc = call_json(capsys, VERIFY_EX61)
    assert code == 0
    assert doc["status"]["violated"] == 0


def test_strict_inconclusive_exit(capsys):
    code, out, _ = call(capsys, ["verify", "--inequality", "superreflexivity", "--space", "catalog:arc2d(fig5)",
                                 "--tau", "0.1", "--strict"])
    assert code == 3
    code, out, _ = call(capsys, ["verify", "--inequality", "superreflexivity", "--space", "catalog:arc2d(fig5)",
                                 "--tau", "0.1"])
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["modulus", "--space", "catalog:nope(2)", "--kind", "delta_X", "--eps", "1"],
    ["modulus", "--space", "catalog:lp(2,2)", "--kind", "delta_X", "--eps", "3.5"],
    ["modulus", "--space", "catalog:lp(2,2)", "--kind", "delta_X", "--eps", "x"],
    ["modulus", "--space", "catalog:lp(2,2)", "--kind", "delta_X", "--eps", "1", "--angles", "16"],
    ["frobnicate"],
    [],
    ["verify", "--inequality", "no_such_check"],
    ["replay", "--example", "62", "--n", "0"],
    ["modulus", "--space", "catalog:lp(2,2)", "--kind", "delta_X", "--eps", "1", "--output", "/nonexistent/dir/x.json"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = call(capsys, argv)
    assert code == 1
    assert "error" in err


@pytest.mark.parametrize("argv", [
    ["classify", "--space", "catalog:arc2d(ex61)"],
    ["dual", "--space", "catalog:lp(2,1)", "--samples", "10"],
    ["dual", "--space", "catalog:lp(2,1)", "--functional", "1,1"],
    ["quotient", "--space", "catalog:lp(3,1)", "--subspace", "0,0,1"],
    ["sum", "--spec", "sum(E=catalog:lp(2,2); catalog:lp(2,2), catalog:lp(2,inf))", "--eps", "1.0"],
    ["curve", "--space", "catalog:lp(2,1)", "--kind", "rho_X", "--count", "5"],
    ["catalog"],
    ["replay", "--example", "63", "--n", "4"],
])
def test_commands_validate_against_schema(capsys, argv):
    call_json(capsys, argv)


def test_curve_csv_header(capsys):
    code, out, _ = call(capsys, ["curve", "--space", "catalog:lp(2,2)", "--kind", "delta_X", "--count", "5",
                                 "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "kind,arg,lo,hi,certified"
    assert len(lines) == 6


def test_dual_prefix_space(capsys):
    code, doc = call_json(capsys, ["modulus", "--space", "dual:catalog:lp(2,1)", "--kind", "delta_uacs", "--eps", "1"])
    assert doc["result"]["hi"] < 1e-9


def test_byte_identical_repeats(capsys):
    _, a, _ = call(capsys, VERIFY_EX61)
    _, b, _ = call(capsys, VERIFY_EX61)
    assert a == b


def test_jobs_do_not_change_output(capsys):
    argv = ["verify", "--inequality", "delta_rho", "--space", "catalog:lp(2,1)", "--space", "catalog:lp(2,2)",
            "--eps", "0.5", "--tau", "0.1"]
    _, a, _ = call(capsys, argv)
    _, b, _ = call(capsys, argv + ["--jobs", "2"])
    assert a == b


def test_config_file(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"format": "csv", "angles": 128}))
    monkeypatch.setenv("BANACHLAB_CONFIG", str(cfg))
    code, out, _ = call(capsys, ["modulus", "--space", "catalog:lp(2,2)", "--kind", "delta_X", "--eps", "1"])
    assert code == 0 and out.startswith("kind,arg,lo,hi,certified")
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert call(capsys, ["catalog"])[0] == 1


def test_manifest(capsys, tmp_path):
    man = tmp_path / "m.json"
    man.write_text(json.dumps([
        {"space": "catalog:lp(2,2)", "inequality": "delta_rho", "eps": "0.5", "tau": "0.1"},
        {"space": "catalog:lp(2,1)", "inequality": "lipschitz_delta_uacs", "eps": "0.25,0.5"},
    ]))
    out_dir = tmp_path / "out"
    code, out, _ = call(capsys, ["verify", "--manifest", str(man), "--output-dir", str(out_dir)])
    assert code == 0
    assert json.loads(out)["entries"] == 2
    for k in range(2):
        jsonschema.validate(json.loads((out_dir / f"report_{k:03d}.json").read_text()), SCHEMA)
    header = (out_dir / "summary.csv").read_text().splitlines()[0]
    assert header == "entry,inequality,space,args,status,margin"


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = call(capsys, ["catalog", "--output", str(dest)])
    assert code == 0 and out == ""
    jsonschema.validate(json.loads(dest.read_text()), SCHEMA)


def test_packaged_schema_matches_repo_copy():
    from importlib import resources

    packaged = resources.files("banachlab").joinpath("schema/report.json").read_text()
    assert json.loads(packaged) == SCHEMA
