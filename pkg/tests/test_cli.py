import json

import pytest

from blockforge.cli import main
from blockforge.config import shipped_config_path

COORD4 = [[str(int(i == j)) for j in range(4)] for i in range(4)]


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", shipped_config_path("class1_standard"))
    assert code == 0 and json.loads(out)["exit_code"] == 0
    bad = write(tmp_path, "bad.json", {"class": "class1", "rank": 1, "phi": [["0"], ["1"]], "profile": ["zero", "full"]})
    assert run(capsys, "validate", bad)[0] == 1
    c2 = write(tmp_path, "c2.json", {"class": "class2", "rank": 4, "phi": COORD4, "profile": ["zero"] * 4, "alpha0": [1, 1, 1, 1]})
    assert run(capsys, "validate", c2, "--radius", "0")[0] == 2


def test_validate_by_shipped_name(capsys):
    code, out, _ = run(capsys, "validate", "class3_kappa")
    assert code == 0 and json.loads(out)["manifest"]["config"] == "class3_kappa"


def test_malformed_config_is_reported(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text('{"class": "class1", "rank": 1, "phi": [[0.5]]}')
    code, _, err = run(capsys, "validate", p)
    assert code == 1 and "floating-point" in err
    code, _, err = run(capsys, "validate", tmp_path / "missing.json")
    assert code == 1 and "error" in err


def test_bracket_command(tmp_path, capsys):
    u = write(tmp_path, "u.json", [{"alpha": [0, 0], "idx": [0, 0], "coeff": "1"}])
    v = write(tmp_path, "v.json", [{"alpha": [2, 3], "idx": [1, 1], "coeff": "1"}])
    code, out, _ = run(capsys, "bracket", "class1_standard", u, v)
    doc = json.loads(out)
    assert code == 0
    assert doc["result"] == [
        {"alpha": [2, 3], "coeff": "1", "idx": [0, 1]},
        {"alpha": [2, 3], "coeff": "2", "idx": [1, 1]},
    ]
    # a plain term list is not a super element
    code, _, err = run(capsys, "bracket", "class3_eps1", u, v)
    assert code == 1 and "even" in err


def test_super_bracket_command(tmp_path, capsys):
    u = write(tmp_path, "u.json", {"odd": [{"alpha": [1, 0], "idx": [0, 0], "coeff": "1"}]})
    code, out, _ = run(capsys, "bracket", "class3_eps1", u, u)
    res = json.loads(out)["result"]
    assert code == 0 and res["odd"] == [] and res["even"]


def test_probe_zero_trials_skips_closure(tmp_path, capsys):
    out = tmp_path / "p.json"
    code, text, _ = run(capsys, "probe", "class1_standard", "--window", 1, 1, "--trials", 0, "--triples", 20, "--out", out)
    doc = json.loads(text)
    assert code == 0 and doc["sections"]["closure"]["status"] == "SKIPPED"
    assert doc["sections"]["jacobi"]["status"] == "PASS"
    assert out.read_text() == text


def test_probe_sections_and_invalid_config(tmp_path, capsys):
    code, text, _ = run(capsys, "probe", "class1_zero", "--window", 2, 0, "--trials", 2, "--sections", "derived,closure")
    doc = json.loads(text)
    assert code == 0 and set(doc["sections"]) == {"derived", "closure"}
    assert doc["sections"]["derived"]["status"] == "PASS"
    bad = write(tmp_path, "bad.json", {"class": "class1", "rank": 1, "phi": [["0"], ["1"]], "profile": ["zero", "full"]})
    code, text, _ = run(capsys, "probe", bad, "--window", 1, 0, "--trials", 1)
    assert code == 1
    assert {s["status"] for s in json.loads(text)["sections"].values()} == {"NOT_APPLICABLE"}


def test_block0_closure_makes_no_claim(capsys):
    code, text, _ = run(capsys, "probe", "block0_standard", "--window", 1, 0, "--trials", 1, "--sections", "closure")
    assert code == 0 and json.loads(text)["sections"]["closure"]["status"] == "NO_CLAIM"


def test_reports_are_reproducible_and_never_overwritten(tmp_path, capsys):
    out = tmp_path / "r.json"
    args = ["probe", "class1_skew", "--window", 1, 1, "--trials", 2, "--triples", 10, "--seed", 4, "--out", out]
    assert run(capsys, *args)[0] == 0
    first = out.read_bytes()
    assert run(capsys, *args)[0] == 0
    assert out.read_bytes() == first
    args[args.index("--seed") + 1] = 5
    code, _, err = run(capsys, *args)
    assert code == 1 and "not overwritten" in err
    assert out.read_bytes() == first


def test_realize_check(capsys):
    code, text, _ = run(capsys, "realize-check", "c3_super_virasoro", "--trials", 30)
    assert code == 0 and json.loads(text)["status"] == "PASS"
    code, text, _ = run(capsys, "realize-check", "c2_torus", "--trials", 10, "--param", "n=-1")
    assert code == 0 and json.loads(text)["cross_check"]["params"]["n"] == "-1"
    code, _, err = run(capsys, "realize-check", "no_such_spec")
    assert code == 1


def test_report_merge(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "validate", "class1_standard", "--out", a)
    c2 = write(tmp_path, "c2.json", {"class": "class2", "rank": 4, "phi": COORD4, "profile": ["zero"] * 4, "alpha0": [1, 1, 1, 1]})
    run(capsys, "validate", c2, "--radius", "0", "--out", b)
    code, text, _ = run(capsys, "report", "--merge", a, b)
    assert code == 2 and len(json.loads(text)["reports"]) == 2
    code, _, _ = run(capsys, "report", "--merge", a)
    assert code == 0


@pytest.mark.parametrize("value", ["0", "two", "-3"])
def test_thread_setting_is_validated(monkeypatch, capsys, value):
    monkeypatch.setenv("BLOCKFORGE_THREADS", value)
    code, _, err = run(capsys, "probe", "class1_standard", "--window", 1, 0, "--trials", 0, "--triples", 1)
    assert code == 1 and "BLOCKFORGE_THREADS" in err


def test_negative_arguments(capsys):
    assert run(capsys, "probe", "class1_standard", "--window", 1, 0, "--trials", -1)[0] == 1
    assert run(capsys, "probe", "class1_standard", "--window", -1, 0)[0] == 1
