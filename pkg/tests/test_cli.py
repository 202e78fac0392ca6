import json
import subprocess
import sys

import pytest

from kh2 import ENGINE_VERSION
from kh2.cli import CONVENTIONS, SCHEMA_VERSION, main
from kh2.diagram import LinkDiagram

TREFOIL = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)"


def run(capsys, *argv):
    try:
        code = main(list(argv) + (["--no-cache"] if argv and argv[0] in ("compute", "pages") else []))
    except SystemExit as e:  # argparse usage errors
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_json_schema(capsys):
    code, out, _ = run(capsys, "compute", "--knot", "trefoil", "--json")
    assert code == 0
    blob = json.loads(out)
    assert blob["schema_version"] == SCHEMA_VERSION and blob["engine_version"] == ENGINE_VERSION
    for key in ("command", "input", "system", "reduced", "tier", "at", "seed", "conventions", "result", "summary"):
        assert key in blob
    assert set(CONVENTIONS) <= set(blob["conventions"])
    assert blob["input"]["crossings"] == 3 and blob["input"]["components"] == 1
    assert blob["tier"] == "field"
    assert sorted({i for i, _, _ in blob["poincare"]}) == [0, 2, 3]


def test_mirror_flag(capsys):
    _, out, _ = run(capsys, "compute", "--knot", "3_1", "--mirror", "--json")
    blob = json.loads(out)
    assert sorted({i for i, _, _ in blob["poincare"]}) == [-3, -2, 0]
    assert blob["conventions"]["mirror"] is True and blob["conventions"]["n_minus"] == 3


def test_output_is_deterministic(capsys):
    args = ["compute", "--pd", TREFOIL, "--system", "f5", "--tier", "groebner", "--json"]
    outs = {run(capsys, *args)[1] for _ in range(3)}
    assert len(outs) == 1


def test_bar_natan_pid(capsys):
    code, out, _ = run(capsys, "compute", "--knot", "trefoil", "--system", "bn-graded")
    assert code == 0 and "tier: pid" in out and "h" in out


def test_specialization(capsys):
    code, out, _ = run(capsys, "compute", "--knot", "trefoil", "--system", "f5", "--at", "z,0", "--json")
    blob = json.loads(out)
    assert code == 0 and blob["tier"] == "field" and blob["at"] == "z,0"


def test_custom_system(capsys):
    code, out, _ = run(capsys, "compute", "--knot", "4_1", "--ring", "F2[T^±1]", "--alpha", "T^2+T^-2",
                       "--beta", "0", "--json")
    blob = json.loads(out)
    assert code == 0 and blob["system"]["id"] == "custom" and blob["tier"] == "pid"


def test_empty_diagram_univ(capsys):
    code, out, _ = run(capsys, "compute", "--pd", "", "--system", "univ", "--json")
    blob = json.loads(out)
    assert code == 0 and blob["tier"] == "cancel"


def test_pages(capsys):
    code, out, _ = run(capsys, "pages", "--knot", "3_1", "--system", "filtered-f4", "--json")
    blob = json.loads(out)
    assert code == 0 and blob["e_infinity_total"] == 2
    assert blob["pages"][-1]["r"] == "inf"
    code, out, _ = run(capsys, "pages", "--knot", "3_1", "--filtration", "cube")
    assert code == 0 and "collapse at E_" in out


@pytest.mark.parametrize("argv", [
    ["compute", "--pd", "X(1,2,3)"],
    ["compute", "--knot", "99_99"],
    ["compute", "--knot", "3_1", "--pd", TREFOIL],
    ["compute"],
    ["compute", "--knot", "3_1", "--system", "nope"],
    ["compute", "--knot", "3_1", "--ring", "F2[h]", "--alpha", "q", "--beta", "0"],
    ["compute", "--knot", "3_1", "--system", "f5", "--at", "1"],
    ["compute", "--knot", "3_1", "--system", "f5", "--reduced"],
    ["compute", "--knot", "3_1", "--system", "f5", "--at", "1,1", "--tier", "pid"],
    ["verify"],
])
def test_input_errors_exit_2(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error:" in err


def test_resource_cap_exits_3(capsys):
    code, _, err = run(capsys, "compute", "--knot", "3_1", "--ring", "F2[h]", "--alpha", "h^3000000000",
                       "--beta", "0")
    assert code == 3 and "resource cap" in err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--knot", "3_1", "--check", "all")
    assert code == 0 and out.strip().endswith("checks passed")
    assert "FAIL" not in out


def test_verify_json_lines(capsys):
    code, out, _ = run(capsys, "verify", "--knot", "4_1", "--check", "mirror", "--json")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines[-1] == {"checks": len(lines) - 1, "failed": 0, "pass": True}
    assert all({"check", "inputs", "pass", "seed", "target"} <= set(x) for x in lines[:-1])


def test_verify_failure_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(LinkDiagram, "mirror", lambda self: self)
    code, out, _ = run(capsys, "verify", "--knot", "3_1", "--check", "mirror")
    assert code == 1 and "FAIL" in out


def test_table_listing(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "--max-crossings", "4")
    assert code == 0 and "4_1" in out and "5_1" not in out
    bad = tmp_path / "t.txt"
    bad.write_text(f"a | 1 | {TREFOIL}\na | 1 | {TREFOIL}\n")
    code, out, err = run(capsys, "table", "--file", str(bad))
    assert code == 2 and "duplicate" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "kh2.cli", "compute", "--knot", "unknot", "--json", "--no-cache"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["result"]


def test_verify_workers_match_serial(capsys):
    args = ["verify", "--all", "--max-crossings", "4", "--check", "mirror", "--json"]
    code1, serial, _ = run(capsys, *args)
    code2, parallel, _ = run(capsys, *args, "--workers", "3")
    assert code1 == code2 == 0 and serial == parallel
