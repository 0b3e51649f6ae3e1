import json
import subprocess
import sys

import pytest

from spdrules import load_rule
from spdrules.cli import main
from spdrules.fileio import ParseError, dump_rule, parse_profile, parse_rule


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


@pytest.fixture
def median_doc(fixtures_dir):
    return json.loads((fixtures_dir / "median_three_by_three.json").read_text())


# ---- validate

def test_validate_ok(capsys, fixtures_dir):
    code, out, _ = run(capsys, "validate", fixtures_dir / "median_three_by_three.json")
    assert code == 0 and out.strip().endswith("valid")
    assert "DEF2_III" in out


def test_validate_json_report(capsys, fixtures_dir):
    code, out, _ = run(capsys, "validate", "--json", fixtures_dir / "coalition_nonanonymous.json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["anonymity_failures"] == ["DEF4_V", "DEF6_IV"]


def test_validate_zero_quota(capsys, tmp_path, median_doc):
    median_doc["quotas"][0]["quotas"] = [[0, 0]]
    code, out, _ = run(capsys, "validate", _write(tmp_path, "r.json", median_doc))
    assert code == 2 and "violation DEF2_I" in out


def test_validate_non_adjacent_pair(capsys, tmp_path, median_doc):
    median_doc["phantoms"][2] = {"pair": [1, 3]}
    code, _, err = run(capsys, "validate", _write(tmp_path, "r.json", median_doc))
    assert code == 3 and "not adjacent" in err and "$.phantoms[2].pair" in err


def test_validate_syntax_error_has_position(capsys, tmp_path):
    code, _, err = run(capsys, "validate", _write(tmp_path, "r.json", '{\n  "omega": [1, 2,\n}'))
    assert code == 3 and "line 3" in err


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d.update(extra=1), "unknown field"),
    (lambda d: d.update(omega=[1, 2.5, 3, 4]), "inexact"),
    (lambda d: d.update(omega=[1, 3, 2, 4]), "strictly increasing"),
    (lambda d: d["phantoms"].append({"single": 7}), "not an alternative"),
    (lambda d: d.update(representation="table"), "representation"),
    (lambda d: d["agents"].update(a="3"), "integer"),
])
def test_parse_errors(capsys, tmp_path, median_doc, mutate, needle):
    mutate(median_doc)
    code, _, err = run(capsys, "validate", _write(tmp_path, "r.json", median_doc))
    assert code == 3 and needle in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "eval", tmp_path / "nope.json", tmp_path / "p.json")
    assert code == 3


def test_rational_alternatives_round_trip(median_doc):
    median_doc["omega"] = [1, "3/2", 2, "5/2"]
    median_doc["phantoms"] = [{"single": 1}, {"single": "3/2"}, {"pair": [2, "5/2"]}, {"pair": [2, "5/2"]}]
    median_doc["quotas"][0]["pair"] = [2, "5/2"]
    rule = parse_rule(json.dumps(median_doc))
    assert rule.validate().ok
    assert parse_rule(dump_rule(rule)) == rule
    assert '"3/2"' in dump_rule(rule)


# ---- eval

def test_eval_outcomes(capsys, fixtures_dir):
    for rule in ("median_three_by_three.json", "coalition_three_by_three.json"):
        path = fixtures_dir / rule
        assert run(capsys, "eval", path, fixtures_dir / "profile_low_peaks.json")[1] == "2\n"
        code, out, _ = run(capsys, "eval", path, fixtures_dir / "profile_right_pair.json", "--trace")
        assert code == 0 and out == "4\nstep1=(3,4) counts=(1,0)\n"
        assert run(capsys, "eval", path, fixtures_dir / "profile_left_pair.json")[1] == "3\n"


def test_eval_single_point_rule(capsys, tmp_path):
    rule = _write(tmp_path, "r.json", {"omega": ["7/3"], "agents": {"a": 1, "d": 1}, "representation": "median",
                                      "phantoms": [{"single": "7/3"}, {"single": "7/3"}]})
    prof = _write(tmp_path, "p.json", {"peaks": ["7/3"], "dips": ["7/3"]})
    assert run(capsys, "eval", rule, prof)[:2] == (0, "7/3\n")


def test_eval_profile_with_wrong_length(capsys, tmp_path, fixtures_dir):
    prof = _write(tmp_path, "p.json", {"peaks": [1, 2], "dips": [1, 1, 1]})
    code, _, err = run(capsys, "eval", fixtures_dir / "median_three_by_three.json", prof)
    assert code == 3 and "peaks" in err


def test_eval_invalid_rule(capsys, tmp_path, median_doc, fixtures_dir):
    median_doc["quotas"] = []
    code, _, err = run(capsys, "eval", _write(tmp_path, "r.json", median_doc), fixtures_dir / "profile_low_peaks.json")
    assert code == 2 and "QUOTA_KEYS" in err


def test_parse_profile_rejects_unknown_values(median_rule):
    with pytest.raises(ParseError):
        parse_profile('{"peaks": [1, 2, 5], "dips": [1, 1, 1]}', median_rule.space, median_rule.partition)


# ---- convert

def test_convert_to_coalition(capsys, tmp_path, fixtures_dir):
    out = tmp_path / "c.json"
    code, stdout, _ = run(capsys, "convert", fixtures_dir / "median_three_by_three.json", "--to", "coalition", "--out", out)
    report = json.loads(stdout)
    assert code == 0 and report["behaviorally_equal"] and report["profiles_compared"] == 4096
    doc = json.loads(out.read_text())
    assert [t["threshold"] for t in doc["thresholds"]] == [3, 2, 2, 0]
    assert doc["decisive"] == [{"pair": [3, 4], "count_pairs": [[0, 2], [1, 1]]}]
    assert load_rule(out) == load_rule(fixtures_dir / "coalition_three_by_three.json")


def test_convert_round_trip_reparses(capsys, tmp_path, fixtures_dir):
    mid, back = tmp_path / "c.json", tmp_path / "m.json"
    run(capsys, "convert", fixtures_dir / "median_three_by_three.json", "--to", "coalition", "--out", mid)
    code, stdout, _ = run(capsys, "convert", mid, "--to", "median", "--out", back)
    assert code == 0 and json.loads(stdout)["behaviorally_equal"]
    assert load_rule(back) == load_rule(fixtures_dir / "median_three_by_three.json")
    for f in (mid, back):
        assert run(capsys, "validate", f)[0] == 0


def test_convert_to_stdout(capsys, fixtures_dir):
    code, out, err = run(capsys, "convert", fixtures_dir / "coalition_three_by_three.json", "--to", "median")
    assert code == 0 and json.loads(out)["representation"] == "median"
    assert json.loads(err)["behaviorally_equal"] is True


def test_convert_refuses_identity_aware_rule(capsys, fixtures_dir):
    code, out, err = run(capsys, "convert", fixtures_dir / "coalition_nonanonymous.json", "--to", "median")
    assert code == 4 and out == "" and "depend on agent identities" in err


def test_general_form_file_round_trip(fixtures_dir):
    rule = load_rule(fixtures_dir / "coalition_nonanonymous.json")
    assert parse_rule(dump_rule(rule)) == rule


# ---- audit

def test_audit_worked_rule(capsys, fixtures_dir):
    code, out, _ = run(capsys, "audit", fixtures_dir / "median_three_by_three.json")
    records = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [r["check"] for r in records] == ["sp", "gsp", "anon"]
    assert [r["status"] for r in records] == ["pass", "partial-coverage", "pass"]
    assert all("elapsed" not in r for r in records)


def test_audit_identity_aware_rule(capsys, fixtures_dir):
    path = fixtures_dir / "coalition_nonanonymous.json"
    code, out, _ = run(capsys, "audit", path, "--checks", "sp")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "audit", path, "--checks", "anon", "--anon-side", "D",
                       "--profile", fixtures_dir / "profile_swap_before.json")
    w = json.loads(out)["witness"]
    assert code == 1
    assert w["profile"] == {"peaks": [2, 1, 4], "dips": [2, 2, 4]}
    assert w["alternate"] == {"peaks": [2, 1, 4], "dips": [4, 2, 2]}
    assert (w["outcome"], w["alternate_outcome"]) == (4, 3)


def test_audit_is_byte_identical(capsys, fixtures_dir):
    args = ["audit", fixtures_dir / "coalition_nonanonymous.json", "--max-exhaustive", "100", "--samples", "300", "--seed", "9"]
    first = run(capsys, *args)
    assert first == run(capsys, *args)
    assert '"partial-coverage"' in first[1] or '"witness"' in first[1]


def test_audit_timing_flag(capsys, fixtures_dir):
    _, out, _ = run(capsys, "audit", fixtures_dir / "median_three_by_three.json", "--checks", "sp", "--timing")
    assert "elapsed" in json.loads(out)


def test_audit_budget(capsys, fixtures_dir):
    code, out, _ = run(capsys, "audit", fixtures_dir / "median_three_by_three.json", "--checks", "gsp", "--max-exhaustive", "50")
    assert code == 5 and json.loads(out)["status"] == "budget-exceeded"


def test_audit_unknown_check(capsys, fixtures_dir):
    assert run(capsys, "audit", fixtures_dir / "median_three_by_three.json", "--checks", "sp,xyz")[0] == 3


# ---- table

def test_table_lines(capsys, fixtures_dir):
    code, out, _ = run(capsys, "table", fixtures_dir / "median_three_by_three.json")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 4096
    assert lines[0] == "1,1,1\t1,1,1\t1"
    assert "1,4,4\t2,2,1\t4" in lines and "1,4,4\t2,2,4\t3" in lines


def test_table_matches_conversion(capsys, fixtures_dir):
    a = run(capsys, "table", fixtures_dir / "median_three_by_three.json")[1]
    b = run(capsys, "table", fixtures_dir / "coalition_three_by_three.json")[1]
    assert a == b


def test_table_two_points_one_dipped_agent(capsys, tmp_path):
    rule = _write(tmp_path, "r.json", {"omega": [0, 1], "agents": {"a": 0, "d": 1}, "representation": "median",
                                      "phantoms": [{"pair": [0, 1]}], "quotas": [{"pair": [0, 1], "quotas": [[0, 1]]}]})
    code, out, _ = run(capsys, "table", rule)
    assert code == 0 and out.splitlines() == ["\t0\t1", "\t1\t0"]


def test_table_budget(capsys, fixtures_dir):
    assert run(capsys, "table", fixtures_dir / "median_three_by_three.json", "--max-exhaustive", "10")[0] == 5


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "spdrules", "eval", str(fixtures_dir / "median_three_by_three.json"),
                           str(fixtures_dir / "profile_left_pair.json")], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "3\n"
