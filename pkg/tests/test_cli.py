import json

import pytest

from coxfold.cli import main
from coxfold.report import load_golden


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_json(capsys):
    code, out, _ = run(capsys, "roots", "--group", "E8", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["count"] == 240 and len(obj["roots"]) == 240


def test_roots_csv(capsys):
    code, out, _ = run(capsys, "roots", "--group", "H2", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "index,a1,a2" and len(out.splitlines()) == 11


def test_group(capsys):
    code, out, _ = run(capsys, "group", "--group", "H4", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["order"] == 14400 and obj["rotations"] == 7200
    code, out, _ = run(capsys, "group", "--group", "E8")
    assert code == 0 and "not enumerated" in out


def test_project_and_lift(capsys, tmp_path):
    code, out, _ = run(capsys, "project", "--group", "A4", "--vector", "1,1,1,1", "--json")
    assert code == 0
    img = json.loads(out)
    f = tmp_path / "v.json"
    f.write_text(out)
    code, out, _ = run(capsys, "lift", "--group", "H2", "--input", str(f), "--json")
    assert code == 0 and [c["a"] for c in json.loads(out)["coords"]] == [1, 1, 1, 1]
    code, out, _ = run(capsys, "project", "--group", "A4", "--subspace", "perp", "--vector", "1,1,1,1", "--json")
    assert json.loads(out)["basis"] == "conjugate"
    assert img["coords"][0] == {"a": 1, "b": 1, "den": 1}


def test_extend_induce_classify(capsys):
    code, out, _ = run(capsys, "extend", "--base", "D6", "--json")
    assert code == 0 and [e["name"] for e in json.loads(out)["extensions"]] == ["D6<", "D6=", "D6>"]
    code, out, _ = run(capsys, "induce", "--ext", "E8=", "--subspace", "par", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["extension"]["name"] == "H4=" and obj["kac_moody"]["ok"]
    code, out, _ = run(capsys, "classify", "--ext", "H3>", "--json")
    obj = json.loads(out)
    assert obj["k"] == -1 and obj["multipliers"] == ["2/5", "2"]


def test_classify_from_file(capsys, tmp_path):
    code, out, _ = run(capsys, "induce", "--ext", "A4=", "--json")
    f = tmp_path / "ext.json"
    f.write_text(json.dumps(json.loads(out)["extension"]))
    code, out, _ = run(capsys, "classify", "--input", str(f), "--json")
    assert code == 0 and json.loads(out)["xy"] == {"a": 2, "b": -1, "den": 1}


def test_symmetrise(capsys):
    code, out, _ = run(capsys, "symmetrise", "--ext", "H4=", "--lift-transposed", "--side", "right", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["exists"] and obj["S"][0][0] == {"a": 1, "b": 0, "den": 1}


def test_double(capsys):
    code, out, _ = run(capsys, "double", "--base", "A4", "--diagrams", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["summary"]["count"] == 6 and obj["summary"]["diagram_classes"] == 3
    assert obj["summary"]["kernel_trivial"] == 0


def test_fragment_render_pipeline(capsys, tmp_path):
    frag = tmp_path / "points.json"
    code, _, _ = run(capsys, "fragment", "--group", "H2", "--axis", "twofold", "--length", "tau", "--n", "1", "--out", str(frag))
    assert code == 0 and json.loads(frag.read_text())["cardinalities"] == [10, 40]
    svg = tmp_path / "p.svg"
    code, _, _ = run(capsys, "render", "--input", str(frag), "--out", str(svg), "--no-timestamp")
    text = svg.read_text()
    assert code == 0 and text.count("<circle") == 50 and "generated" not in text
    code, _, _ = run(capsys, "render", "--input", str(frag), "--out", str(svg))
    assert "<!-- generated" in svg.read_text()


def test_outputs_are_byte_identical(capsys, tmp_path):
    outs = []
    for k, threads in enumerate(("1", "3")):
        path = tmp_path / f"f{k}.csv"
        run(capsys, "fragment", "--group", "H3", "--length", "tau", "--format", "csv", "--out", str(path), "--threads", threads)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    a = run(capsys, "double", "--base", "D6", "--json", "--threads", "1")[1]
    b = run(capsys, "double", "--base", "D6", "--json", "--threads", "4")[1]
    assert a == b


@pytest.mark.parametrize(
    "args",
    [
        ["classify", "--ext", "H5="],
        ["roots", "--group", "F4"],
        ["fragment", "--group", "H2", "--axis", "fivefold"],
        ["fragment", "--group", "H2", "--length", "tau tau"],
        ["render", "--input", "/nonexistent.json"],
        ["nonsense"],
        ["fragment", "--group", "H2", "--n", "-1"],
    ],
)
def test_usage_errors_exit_2(capsys, args):
    code, _, err = run(capsys, *args)
    assert code == 2


def test_unknown_extension_lists_catalog(capsys):
    _, _, err = run(capsys, "induce", "--ext", "X=")
    assert "A4=, D6<, D6=, D6>, E8=" in err


def test_report_all_passes(capsys):
    code, out, _ = run(capsys, "report-all", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["passed"]
    assert {c["criterion"] for c in obj["criteria"]} == set(range(1, 12))
    assert all(rec["citation"] for rec in obj["checks"])
    statuses = {rec["id"]: rec["status"] for rec in obj["checks"]}
    assert statuses.pop("symmetrisable") == "deviation"
    assert set(statuses.values()) == {"pass"}


def test_report_all_strict_fails_on_deviation(capsys):
    code, out, _ = run(capsys, "report-all", "--only", "symmetrisable", "--strict")
    assert code == 1 and "DEVIATION" in out


def test_report_all_names_corrupted_check(capsys, tmp_path):
    golden = json.loads(json.dumps({"checks": list(load_golden().values())}))
    for entry in golden["checks"]:
        if entry["id"] == "double_counts":
            entry["value"]["E8"] = 291
    f = tmp_path / "golden.json"
    f.write_text(json.dumps(golden))
    code, out, _ = run(capsys, "report-all", "--golden", str(f), "--only", "double_counts", "root_counts")
    assert code == 1
    assert "[FAIL     ] double_counts" in out and "/E8: expected 291, got 292" in out
    assert "[PASS     ] root_counts" in out


def test_report_all_bad_manifest(capsys, tmp_path):
    f = tmp_path / "golden.json"
    f.write_text("{not json")
    assert run(capsys, "report-all", "--golden", str(f))[0] == 2
