import json

from shintani.cli import main
from shintani.solomon_hu import pm_eq, pm_from_json


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


TF_ONE = {"n": 1, "p": 3, "M": 4, "terms": [{"residue": [1], "weight": 1}]}
TF_DIFF = {
    "n": 1,
    "p": 3,
    "M": 4,
    "terms": [{"residue": [1], "weight": 1}, {"residue": [3], "weight": -1}],
}
TF_BALANCED_2D = {
    "n": 2,
    "p": 3,
    "M": 4,
    "terms": [
        {"residue": [1, j], "weight": 1} for j in range(4)
    ] + [
        {"residue": [3, j], "weight": -1} for j in range(4)
    ],
}


def test_pair_command(tmp_path, capsys):
    path = write(tmp_path, "in.json", {
        "test_function": TF_ONE, "cone": {"generators": [["1"]]},
    })
    code, out = run(capsys, "--command", "pair", "--input", path)
    assert code == 0
    data = json.loads(out)
    assert data["numerator"] == [{"vector": [1], "coeff": "1"}]
    assert data["denominator"] == [[4]]


def test_pair_zero_function(tmp_path, capsys):
    path = write(tmp_path, "in.json", {
        "test_function": {"n": 1, "p": 3, "M": 4, "terms": []},
        "cone": {"generators": [["1"]]},
    })
    code, out = run(capsys, "--command", "pair", "--input", path)
    assert code == 0
    assert json.loads(out)["numerator"] == []


def test_pair_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["--command", "pair", "--input", str(bad)]) == 2
    missing = write(tmp_path, "missing.json", {"cone": {"generators": [["1"]]}})
    assert main(["--command", "pair", "--input", missing]) == 2


def test_pair_dependent_generators(tmp_path, capsys):
    path = write(tmp_path, "in.json", {
        "test_function": {"n": 2, "p": 3, "M": 2, "terms": []},
        "cone": {"generators": [["1", "0"], ["2", "0"]]},
    })
    assert main(["--command", "pair", "--input", path]) == 3


def test_pair_round_trip(tmp_path, capsys):
    path = write(tmp_path, "in.json", {
        "test_function": TF_DIFF, "cone": {"generators": [["1"]]},
    })
    code, out = run(capsys, "--command", "pair", "--input", path)
    pm = pm_from_json(json.loads(out))
    code2, out2 = run(capsys, "--command", "pair", "--input", path)
    assert pm_eq(pm, pm_from_json(json.loads(out2)))
    assert out == out2


def test_vh_command(tmp_path, capsys):
    path = write(tmp_path, "in.json", {
        "test_function": TF_DIFF, "rays": [{"name": "e1", "v": [1]}],
    })
    code, out = run(capsys, "--command", "vh", "--input", path)
    assert code == 0 and json.loads(out) == {"e1": True}
    path2 = write(tmp_path, "in2.json", {
        "test_function": TF_ONE, "rays": [{"name": "e1", "v": [1]}],
    })
    _, out2 = run(capsys, "--command", "vh", "--input", path2)
    assert json.loads(out2) == {"e1": False}
    path3 = write(tmp_path, "in3.json", {"test_function": TF_ONE, "rays": []})
    code3, out3 = run(capsys, "--command", "vh", "--input", path3)
    assert code3 == 0 and json.loads(out3) == {}


def test_moments_command(tmp_path, capsys):
    path = write(tmp_path, "in.json", {
        "test_function": TF_DIFF, "cone": {"generators": [["1"]]},
    })
    code, out = run(capsys, "--command", "moments", "--input", path, "--max-order", "2")
    assert code == 0
    rows = {tuple(r["order"]): r for r in json.loads(out)["moments"]}
    assert rows[(0,)]["rational"] == "1/2"
    assert rows[(1,)]["rational"] == "0"
    assert rows[(2,)]["rational"] == "-1/2"


def test_moments_rejects_non_measures(tmp_path, capsys):
    path = write(tmp_path, "in.json", {
        "test_function": TF_ONE, "cone": {"generators": [["1"]]},
    })
    assert main(["--command", "moments", "--input", path]) == 4


def test_moments_from_raw_pseudo_measure(tmp_path, capsys):
    pm_json = {
        "numerator": [
            {"vector": [1], "coeff": "1"},
            {"vector": [3], "coeff": "-1"},
        ],
        "denominator": [[4]],
    }
    path = write(tmp_path, "in.json", pm_json)
    code, out = run(capsys, "--command", "moments", "--input", path,
                    "--p", "3", "--max-order", "2")
    assert code == 0
    rows = {tuple(r["order"]): r for r in json.loads(out)["moments"]}
    assert rows[(0,)]["rational"] == "1/2"


def test_cocycle_command_and_determinism(tmp_path, capsys):
    path = write(tmp_path, "f.json", {"test_function": TF_BALANCED_2D})
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["--command", "cocycle", "--input", path, "--trials", "2",
                 "--seed", "7", "--out", str(out1)]) == 0
    assert main(["--command", "cocycle", "--input", path, "--trials", "2",
                 "--seed", "7", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["all_pass"] and report["vh_e1"]
    assert len(report["trials"]) == 2


def test_cocycle_vacuous_and_corrupted(tmp_path, capsys):
    path = write(tmp_path, "f.json", {"test_function": TF_BALANCED_2D})
    assert main(["--command", "cocycle", "--input", path, "--trials", "0",
                 "--seed", "7", "--out", str(tmp_path / "v.json")]) == 0
    assert main(["--command", "cocycle", "--input", path, "--trials", "1",
                 "--seed", "7", "--corrupt-sign",
                 "--out", str(tmp_path / "c.json")]) == 6
    report = json.loads((tmp_path / "c.json").read_text())
    assert not report["all_pass"]
    assert "offending" in report["trials"][0]
