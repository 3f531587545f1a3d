import json

import pytest

from rankone.cli import RunConfig, UsageError, main, run


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_not_multiple_command(capsys):
    code, rep, err = call(capsys, "block", "--q", "2", "--p", "7", "--s", "10", "--r", "3",
                          "not-multiple", "--t", "2", "--level-bound", "10")
    assert code == 0 and rep["exit_code"] == 0
    assert [r["status"] for r in rep["records"]] == ["verified_to_bound"]
    assert rep["records"][0]["bound"] == 10
    assert "1 verified to bound" in err


def test_semigroup_analyze(capsys):
    code, rep, _ = call(capsys, "semigroup", "--gens", "2,7", "analyze")
    assert code == 0
    assert rep["result"]["conductor"] == 6 and rep["result"]["gaps"] == [1, 3, 5]


def test_malformed_cone_is_a_usage_error(capsys):
    code, rep, err = call(capsys, "semigroup", "--cone", "<2,>", "analyze")
    assert code == 2 and rep is None
    assert "error" in err and "<2,>" in err


def test_invalid_block_is_a_usage_error(capsys):
    code, _, err = call(capsys, "block", "--q", "2", "--p", "7", "--s", "6", "--r", "2",
                        "member", "--value", "1")
    assert code == 2 and "gcd(r,s)" in err


def test_non_positive_bound_is_rejected(capsys):
    code, _, err = call(capsys, "verify-all", "--level-bound", "0")
    assert code == 2 and "level_bound" in err


def test_refuted_embedding_exits_one(capsys):
    code, rep, _ = call(capsys, "semigroup", "--gens", "2,5", "embed", "--multiplier", "2",
                        "--target", "<2,5>")
    assert code == 1
    assert rep["records"][0]["status"] == "refuted" and rep["records"][0]["witness"] == "1"
    assert rep["summary"]["refuted"] == 1


def test_membership_and_layered_cones(capsys):
    code, rep, _ = call(capsys, "semigroup", "--layered", "5*<2,5>+6*<6,161>", "member",
                        "--value", "15")
    assert code == 0 and rep["result"] == {"member": False}
    code, rep, _ = call(capsys, "block", "--q", "2", "--p", "7", "--s", "10", "--r", "3",
                        "member", "--value", "110/9")
    assert code == 0 and rep["result"] == {"member": False, "ladder": False}


def test_intersect(capsys):
    code, rep, _ = call(capsys, "semigroup", "--gens", "2,7", "intersect", "--with", "<3,5>")
    assert code == 0 and rep["result"]["gaps"] == [1, 2, 3, 4, 5, 7]


def test_supernatural(capsys):
    code, rep, _ = call(capsys, "supernatural", "mul", "--a", "2^3*5", "--b", "2*7")
    assert rep["result"] == {"value": "2^4*5*7"}
    code, rep, _ = call(capsys, "supernatural", "contains", "--a", "2^inf", "--x", "1/6")
    assert rep["result"] == {"member": False}
    code, _, _ = call(capsys, "supernatural", "show", "--a", "2^")
    assert code == 2


def test_block_covers_from_file(tmp_path, capsys):
    f = tmp_path / "samples.json"
    f.write_text(json.dumps(["0", "2/3", "7"]))
    code, rep, _ = call(capsys, "block", "--q", "2", "--p", "7", "--s", "10", "--r", "3",
                        "covers", "--samples", str(f))
    assert code == 0 and rep["records"][0]["status"] == "proved"
    assert rep["result"]["samples"][1][:2] == ["2/3", "1"]


def test_interval_commands(capsys):
    code, rep, _ = call(capsys, "interval", "--block", "2,7,10,3", "--kind", "D", "probe",
                        "--threshold", "1000000")
    assert code == 0 and rep["records"][0]["witness"] == "12"
    code, rep, _ = call(capsys, "interval", "--block", "2,7,10,3", "contains", "--value", "10",
                        "--bound", "10")
    assert rep["records"][0]["status"] == "verified_to_bound"
    code, rep, _ = call(capsys, "interval", "--block", "2,7,10,3", "soft", "--bound", "6")
    assert code == 0 and rep["records"][0]["status"] == "verified_to_bound"


@pytest.mark.parametrize("argv", [
    ["gaps", "--a", "5", "--H", "<2,5>"],
    ["chain", "--H1", "<2,5>", "--A", "5,161,30000", "--depth", "3"],
    ["ertorema", "--J", "2,3,5", "--diagrams", "2", "--size", "3"],
    ["laleche", "--L", "2,3", "--J", "5,7", "--size", "2"],
])
def test_construction_commands(argv, capsys):
    code, rep, _ = call(capsys, *argv)
    assert code == 0
    assert rep["summary"]["refuted"] == 0 and rep["summary"]["proved"] > 0


def test_gaps_result(capsys):
    _, rep, _ = call(capsys, "gaps", "--a", "5", "--H", "<2,5>")
    assert rep["result"]["L"] == [15, 51, 87, 123, 159] and rep["result"]["N_G"] == 160


def test_chain_budget_is_skipped_not_failed(capsys):
    code, rep, err = call(capsys, "chain", "--H1", "<2,5>", "--A", "5,161,30000", "--depth", "3",
                          "--work-limit", "1")
    assert code == 0 and rep["summary"]["skipped"] == 1 and "warning" in err


def test_verify_all_with_tiny_work_limit(capsys):
    code, rep, err = call(capsys, "verify-all", "--work-limit", "1")
    assert code == 0
    skipped = [r for r in rep["records"] if r["status"] == "skipped"]
    assert len(skipped) == 1 and skipped[0]["claim"].startswith("criterion-06")
    assert "budget" in skipped[0]["note"] and "warning" in err


def test_config_file_and_output(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    out = tmp_path / "report.json"
    cfg.write_text(json.dumps({"command": "semigroup",
                               "parameters": {"gens": "3,5", "action": "analyze"},
                               "output": str(out)}))
    code = main(["--config", str(cfg)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["result"]["gaps"] == [1, 2, 4, 7]
    assert rep["header"]["config"]["command"] == "semigroup"


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text("[1, 2]")
    assert main(["--config", str(cfg)]) == 2
    cfg.write_text("{not json")
    assert main(["--config", str(cfg)]) == 2


def test_report_invariants():
    rep = run(RunConfig("verify-all", seed=3))
    recs = rep.records
    assert [r["claim"] for r in recs] == sorted(r["claim"] for r in recs)
    assert sum(rep.summary.values()) == len(recs)
    assert rep.exit_code == (1 if rep.summary["refuted"] else 0) == 0
    body = rep.to_json()
    assert set(body) == {"header", "records", "summary", "exit_code", "result"}
    assert set(body["header"]) == {"tool", "version", "config", "timestamp"}


def test_run_rejects_unknown_command():
    with pytest.raises(UsageError):
        run(RunConfig("nonsense"))
    with pytest.raises(UsageError):
        run(RunConfig("verify-all", bounds={"level_bound": -1}))
