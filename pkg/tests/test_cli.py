"""Command-line behaviour: CSV/JSON layout, exit codes, determinism and
schema validation of the JSON outputs."""

import csv
import io
import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from fracx import cli


def run(args, tmp_path, name="out"):
    path = tmp_path / name
    code = cli.main(args + ["--output", str(path)])
    return code, path.read_text() if path.exists() else ""


def rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def schema(name):
    return json.loads(resources.files("fracx").joinpath("schemas", name).read_text())


def test_eval_examples(tmp_path):
    code, out = run(["eval", "--fn", "le_roy", "--alpha", "0", "--x", "-0.5"], tmp_path)
    assert code == 0
    r = rows(out)[0]
    assert list(r) == ["x", "value", "abs_error_bound", "terms"]
    assert float(r["x"]) == -0.5 and float(r["value"]) == pytest.approx(2 / 3, abs=1e-16)
    assert float(r["abs_error_bound"]) <= 1e-16 and r["terms"] == "1"
    _, out = run(["eval", "--fn", "kilbas_saigo", "--alpha", "0.5", "--m", "1", "--l", "0", "--x", "-1"], tmp_path)
    assert round(float(rows(out)[0]["value"]), 7) == 0.4275836
    _, out = run(["eval", "--fn", "mittag_leffler", "--alpha", "1", "--beta", "1", "--x", "0"], tmp_path)
    assert float(rows(out)[0]["value"]) == 1.0


def test_eval_grid_and_precision(tmp_path):
    code, out = run(["eval", "--fn", "mittag_leffler", "--alpha", "0.5", "--xmin", "0.01", "--xmax", "10",
                     "--count", "5", "--log"], tmp_path)
    r = rows(out)
    assert code == 0 and len(r) == 5
    assert float(r[-1]["x"]) == pytest.approx(10.0)
    # 17 significant digits round-trip the double exactly
    v = float(r[2]["value"])
    assert "%.17g" % v == r[2]["value"]


def test_eval_domain_error_exit_code(tmp_path, capsys):
    code, out = run(["eval", "--fn", "le_roy", "--alpha", "0", "--x", "2"], tmp_path)
    assert code == 2 and out == ""
    code, _ = run(["eval", "--fn", "kilbas_saigo", "--alpha", "0.5", "--x", "1"], tmp_path)
    assert code == 2


def test_eval_nonconvergent_partial_flush(tmp_path, monkeypatch):
    # a precision cap far too small for the large argument forces NonConvergent on the last row
    monkeypatch.setenv("FRACX_PRECISION_BITS", "120")
    code, out = run(["eval", "--fn", "le_roy", "--alpha", "1.5", "--x", "-0.5", "-500"], tmp_path)
    assert code == 3
    assert len(rows(out)) == 1
    assert out.rstrip().splitlines()[-1].startswith("# error: NonConvergent")


def test_dist_table(tmp_path):
    code, out = run(["dist-table", "--kind", "fweibull", "--alpha", "0", "--lambda", "1", "--rho", "2",
                     "--x", "3", "--columns", "sf,quantile"], tmp_path)
    r = rows(out)[0]
    assert code == 0 and float(r["sf"]) == pytest.approx(0.1, abs=1e-15)
    assert float(r["quantile"]) == pytest.approx(3.0, abs=1e-9)
    _, out = run(["dist-table", "--kind", "fgumbel", "--alpha", "1", "--lambda", "1", "--x", "0"], tmp_path)
    assert float(rows(out)[0]["sf"]) == pytest.approx(math.exp(-1), abs=1e-15)


def test_dist_table_quantile_round_trip(tmp_path):
    _, out = run(["dist-table", "--kind", "ffrechet", "--alpha", "0.5", "--rho", "1", "--xmin", "0.2",
                  "--xmax", "20", "--count", "6", "--log", "--columns", "cdf,quantile"], tmp_path)
    for r in rows(out):
        assert float(r["quantile"]) == pytest.approx(float(r["x"]), rel=1e-8)


def test_dist_table_json_schema(tmp_path):
    code, out = run(["dist-table", "--kind", "fgumbel", "--alpha", "0.5", "--x", "-1", "0", "1",
                     "--format", "json"], tmp_path)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("table.schema.json"))
    assert doc["columns"][:2] == ["x", "sf"] and len(doc["rows"]) == 3


def test_sample_summary_and_determinism(tmp_path):
    args = ["sample", "--kind", "exp_int", "--alpha", "0.5", "--n", "100000", "--seed", "7", "--no-compare"]
    code, a = run(args, tmp_path, "a")
    _, b = run(args, tmp_path, "b")
    assert code == 0 and a == b
    summary = {l.split(":")[0][len("# summary "):]: l.split(":", 1)[1].strip()
               for l in a.splitlines() if l.startswith("# summary")}
    assert abs(float(summary["mean"]) - 1.0) <= 3 * float(summary["mean_se"])
    assert float(summary["oracle_second_moment"]) == pytest.approx(math.sqrt(2))
    assert len(rows(a)) == 100000


def test_sample_ks_note(tmp_path):
    code, out = run(["sample", "--kind", "weibull_int", "--alpha", "0.5", "--rho", "1", "--method", "path",
                     "--n", "5000", "--compare-n", "5000", "--summary-only"], tmp_path)
    assert code == 0
    assert "# summary ks_vs_beta_product_pass_1pct: True" in out


def test_verify_json_schema_and_exit(tmp_path):
    code, out = run(["verify", "--suite", "barnes"], tmp_path)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("verify_report.schema.json"))
    assert code == 0 and doc["passed"] and doc["n_failed"] == 0
    assert all(c["anchor"] for c in doc["checks"])
    _, again = run(["verify", "--suite", "barnes"], tmp_path, "again")
    assert again == out


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    from fracx import verify
    from fracx.mc import CheckReport
    monkeypatch.setitem(verify._RUNNERS, "barnes",
                        lambda quick=False: [CheckReport("x", "anchor", 1.0, 0.0, False, {})])
    code, out = run(["verify", "--suite", "barnes"], tmp_path)
    assert code == 1 and json.loads(out)["passed"] is False


def test_asym(tmp_path):
    code, out = run(["asym", "--family", "weibull_ks", "--alpha", "0.5", "--m", "1", "--x", "50"], tmp_path)
    r = rows(out)[0]
    assert code == 0 and 0.9 <= float(r["ratio"]) <= 1.1 and r["method"] == "series"
    _, out = run(["asym", "--family", "leroy", "--alpha", "0.5", "--x", "40"], tmp_path)
    assert 0.7 <= float(rows(out)[0]["ratio"]) <= 1.3


def test_asym_mc_route(tmp_path):
    x = 1.0 / (math.gamma(0.5) * 1e-3)
    code, out = run(["asym", "--family", "fweibull", "--alpha", "0.5", "--rho", "1", "--route", "mc",
                     "--n", "200000", "--x", repr(x)], tmp_path)
    r = rows(out)[0]
    assert code == 0 and r["method"] == "mc" and 0.85 <= float(r["ratio"]) <= 1.15


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "fracx", "eval", "--fn", "le_roy", "--alpha", "1", "--x", "0"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "x,value,abs_error_bound,terms" in p.stdout
