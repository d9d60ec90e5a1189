import csv
import io
import json

import pytest

from triwalk import LatticeSpec, Site, SourceSpec, absorption_map, boundary_sites, solve_exact
from triwalk.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_csv_layout(capsys):
    code, out, _ = run(capsys, "solve", "--m", "3", "--n", "3", "--a", "2", "--b", "2")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["kind", "p", "q", "value"]
    field_rows = [r for r in rows[1:] if r[0] == "field"]
    absorb_rows = [r for r in rows[1:] if r[0] == "absorption"]
    assert len(field_rows) == 9
    assert len(absorb_rows) == 16
    assert len(rows) == 1 + 9 + 16

    # values round-trip to the exact doubles the library computes
    sol = solve_exact(LatticeSpec(3, 3), SourceSpec(2, 2))
    amap = absorption_map(sol)
    for r in field_rows:
        assert float(r[3]) == sol.values[Site(int(r[1]), int(r[2]))]
    for r in absorb_rows:
        assert float(r[3]) == amap.probs[Site(int(r[1]), int(r[2]))]
    # boundary rows come out in canonical boundary order
    got_order = [Site(int(r[1]), int(r[2])) for r in absorb_rows]
    assert got_order == list(boundary_sites(LatticeSpec(3, 3)))


def test_solve_json_schema_and_csv_identity(capsys):
    args = ("--m", "5", "--n", "4", "--a", "2", "--b", "3")
    code, out_json, _ = run(capsys, "solve", *args, "--format", "json")
    assert code == 0
    doc = json.loads(out_json)
    assert doc["spec"] == {"m": 5, "n": 4}
    assert doc["source"] == {"a": 2, "b": 3}
    assert doc["method"] == "exact"
    assert len(doc["field"]) == 20
    assert len(doc["absorption"]) == 22
    assert doc["sum_absorption"] == pytest.approx(1.0, abs=1e-10)

    code, out_csv, _ = run(capsys, "solve", *args, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out_csv)))[1:]
    by_site = {(r[0], int(r[1]), int(r[2])): r[3] for r in rows}
    # identical shortest round-trip serialization in both formats
    for e in doc["field"]:
        assert by_site[("field", e["p"], e["q"])] == repr(e["value"])
    for e in doc["absorption"]:
        assert by_site[("absorption", e["p"], e["q"])] == repr(e["value"])


def test_solve_what_filters(capsys):
    code, out, _ = run(
        capsys, "solve", "--m", "3", "--n", "3", "--a", "1", "--b", "1",
        "--what", "absorption", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert "field" not in doc
    assert "absorption" in doc


def test_mc_subcommand_equals_solve_mc(capsys):
    common = ("--m", "3", "--n", "3", "--a", "2", "--b", "2", "--walks", "2000", "--seed", "4")
    code1, out1, _ = run(capsys, "mc", *common)
    code2, out2, _ = run(capsys, "solve", *common, "--method", "mc")
    assert code1 == code2 == 0
    assert out1 == out2
    header = out1.splitlines()[0]
    assert header == "kind,p,q,value,stderr"


def test_oracle_method_handles_any_width(capsys):
    code, out, _ = run(
        capsys, "solve", "--m", "1", "--n", "1", "--a", "1", "--b", "1", "--method", "oracle"
    )
    assert code == 0
    assert "field,1,1,1.0" in out.splitlines()


def test_exact_method_rejects_even_width(capsys):
    code, _, err = run(capsys, "solve", "--m", "4", "--n", "3", "--a", "2", "--b", "2")
    assert code == 2
    assert "error" in err


def test_usage_error_exit_code(capsys):
    assert run(capsys, "solve", "--m", "3")[0] == 2
    assert run(capsys, "solve", "--m", "3", "--n", "3", "--a", "2", "--b", "2",
               "--method", "nope")[0] == 2


def test_compare_default_passes(capsys):
    code, out, _ = run(capsys, "compare", "--m", "5", "--n", "4", "--a", "2", "--b", "3")
    assert code == 0
    assert "exact vs oracle" in out
    assert out.strip().endswith("result: PASS")


def test_compare_breaches_on_tiny_tolerance(capsys):
    code, out, _ = run(
        capsys, "compare", "--m", "5", "--n", "4", "--a", "2", "--b", "3", "--tol", "1e-20"
    )
    assert code == 3
    assert "BREACH" in out
    assert out.strip().endswith("result: FAIL")


def test_compare_with_mc_reference(capsys):
    code, out, _ = run(
        capsys, "compare", "--m", "3", "--n", "3", "--a", "2", "--b", "2",
        "--method", "exact,mc", "--walks", "50000", "--seed", "6",
    )
    assert code == 0
    assert "max|z|" in out


def test_compare_rejects_bad_method_lists(capsys):
    base = ("--m", "3", "--n", "3", "--a", "2", "--b", "2")
    assert run(capsys, "compare", *base, "--method", "exact")[0] == 2
    assert run(capsys, "compare", *base, "--method", "exact,fft")[0] == 2
    assert run(capsys, "compare", *base, "--method", "mc,mc")[0] == 2


def test_table1_flags_single_anomalous_entry(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 3
    mismatches = [ln for ln in out.splitlines() if "MISMATCH" in ln]
    assert len(mismatches) == 1
    assert mismatches[0].startswith("P(1,0)")
    assert "1 of 16 entries" in out


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "field.csv"
    code, out, _ = run(
        capsys, "solve", "--m", "3", "--n", "3", "--a", "2", "--b", "2", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    rows = target.read_text().splitlines()
    assert rows[0] == "kind,p,q,value"
    assert len(rows) == 26
