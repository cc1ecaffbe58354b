import json

import pytest

from circulant.cli import (
    expansion_report_from_dict,
    expansion_report_to_dict,
    gt_report_from_dict,
    gt_report_to_dict,
    main,
)
from circulant.expand import det_expand, det_expand_general, per_expand
from circulant.togliatti import GroupAction, minimality_check


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_det_json(capsys):
    code, out, err = run(capsys, "det", "--n", "3")
    assert code == 0 and not err
    payload = json.loads(out)
    assert payload["kind"] == "det"
    assert payload["n"] == 3
    assert payload["alpha"] == [0, 1, 2]
    assert payload["count"] == 4
    assert {"multiset": [0, 1, 2], "coeff": "-3"} in payload["terms"]


def test_det_roundtrip(capsys):
    code, out, _ = run(capsys, "det", "--d", "6", "--alpha", "0,1,5")
    assert code == 0
    report = expansion_report_from_dict(json.loads(out))
    assert report == det_expand_general(6, (0, 1, 5))


def test_per_roundtrip():
    report = per_expand(4)
    assert expansion_report_from_dict(expansion_report_to_dict(report, "per")) == report


def test_det_general_term_count_cross_check(capsys):
    from circulant.togliatti import invariant_count

    code, out, _ = run(capsys, "det", "--d", "6", "--alpha", "0,1,5")
    payload = json.loads(out)
    action = GroupAction(6, (0, 1, 5))
    report = minimality_check(action)
    assert payload["count"] == invariant_count(action) - len(report.missing_monomials)


def test_det_requires_arguments(capsys):
    code, _, err = run(capsys, "det")
    assert code == 1 and "requires" in err


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "--n-range", "3..6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,d,p,equal,prime_power"
    assert lines[1] == "3,4,4,true,true"
    assert lines[2] == "4,10,10,true,true"
    assert lines[3] == "5,26,26,true,true"
    assert lines[4] == "6,68,80,false,false"


def test_count_single_row(capsys):
    code, out, _ = run(capsys, "count", "--n", "2")
    assert code == 0
    assert out.splitlines()[1] == "2,2,2,true,true"


def test_count_deterministic_across_workers(capsys):
    _, serial, _ = run(capsys, "count", "--n-range", "3..6", "--workers", "1")
    _, parallel, _ = run(capsys, "count", "--n-range", "3..6", "--workers", "3")
    assert serial == parallel


def test_count_bad_range(capsys):
    code, _, err = run(capsys, "count", "--n-range", "5..3")
    assert code == 1
    code, _, err = run(capsys, "count", "--n-range", "abc")
    assert code == 1


def test_coeff(capsys):
    code, out, _ = run(capsys, "coeff", "--n", "3", "--multiset", "0,1,2")
    assert code == 0
    payload = json.loads(out)
    assert payload == {"kind": "coeff", "n": 3, "multiset": [0, 1, 2],
                       "coeff": "-3"}


def test_witness_six(capsys):
    code, out, _ = run(capsys, "witness", "--n", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["multiset"] == [0, 0, 1, 2, 4, 5]
    assert payload["congruence_ok"] is True
    assert payload["predicate_ok"] is True
    assert payload["coefficient"] == "0"
    assert payload["params"] == {"n": 2, "m": 3, "lambda": 1, "mu": 1,
                                 "m0": 2, "m1": 1, "a1": 2, "a2": 4, "a3": 5}


def test_witness_ten(capsys):
    code, out, _ = run(capsys, "witness", "--n", "10")
    assert code == 0
    assert json.loads(out)["multiset"] == [0, 0, 0, 0, 1, 1, 1, 3, 6, 8]


def test_witness_prime_power_exit(capsys):
    code, out, err = run(capsys, "witness", "--n", "8")
    assert code == 1
    assert not out
    assert "PrimePowerInput" in err


def test_gt_report(capsys):
    code, out, _ = run(capsys, "gt", "--d", "3", "--alpha", "0,1,2")
    assert code == 0
    payload = json.loads(out)
    assert payload["mu"] == 4
    assert payload["minimal"] is True
    assert payload["rank"] == 5
    assert payload["generators"] == [[0, 0, 0], [0, 1, 2], [1, 1, 1], [2, 2, 2]]
    report = gt_report_from_dict(payload)
    assert report == minimality_check(GroupAction(3, (0, 1, 2)))


def test_gt_roundtrip_with_skipped_rank():
    report = minimality_check(GroupAction(6, tuple(range(6))), rank_dim_limit=0)
    assert report.rank is None
    assert gt_report_from_dict(gt_report_to_dict(report)) == report


def test_scan_square_csv(capsys):
    code, out, _ = run(capsys, "scan", "--square", "7")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,minimal,prime_power,consistent"
    assert "6,false,false,true" in lines
    assert all(line.endswith("true") for line in lines[1:])


def test_scan_ternary_csv(capsys):
    code, out, _ = run(capsys, "scan", "--ternary", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "d,n,m,minimal,missing_count"
    assert "3,1,2,true,0" in lines
    assert all(line.endswith(",0") for line in lines[1:])


def test_scan_requires_mode(capsys):
    code, _, _ = run(capsys, "scan")
    assert code == 1


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "det", "--n", "9", "--budget", "100")
    assert code == 2
    assert "budget" in err


def test_budget_env_override(capsys, monkeypatch):
    monkeypatch.setenv("CIRCULANT_BUDGET", "100")
    code, _, _ = run(capsys, "det", "--n", "9")
    assert code == 2
    # explicit flag beats the environment
    code, out, _ = run(capsys, "det", "--n", "9", "--budget", "30000")
    assert code == 0
    monkeypatch.setenv("CIRCULANT_BUDGET", "junk")
    code, _, err = run(capsys, "det", "--n", "3")
    assert code == 1 and "CIRCULANT_BUDGET" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "det", "--n", "4", "--out", str(target))
    assert code == 0 and not out
    payload = json.loads(target.read_text())
    assert payload["count"] == 10


def test_output_bytes_deterministic(capsys):
    _, first, _ = run(capsys, "det", "--n", "5")
    _, second, _ = run(capsys, "det", "--n", "5")
    assert first == second
    _, first, _ = run(capsys, "scan", "--ternary", "6", "--workers", "1")
    _, second, _ = run(capsys, "scan", "--ternary", "6", "--workers", "2")
    assert first == second


def test_pretty_formats(capsys):
    code, out, _ = run(capsys, "det", "--n", "3", "--format", "pretty")
    assert code == 0 and "4 terms" in out
    code, out, _ = run(capsys, "count", "--n", "4", "--format", "pretty")
    assert code == 0 and "prime_power" in out
    code, out, _ = run(capsys, "gt", "--d", "3", "--alpha", "0,1,2",
                       "--format", "pretty")
    assert code == 0 and "minimal: true" in out


def test_csv_term_format(capsys):
    code, out, _ = run(capsys, "det", "--n", "3", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "multiset,coeff"
    assert "0 1 2,-3" in lines


def test_invalid_action_exit(capsys):
    code, _, err = run(capsys, "gt", "--d", "5", "--alpha", "0,0,0")
    assert code == 1 and "InvalidAction" in err


def test_internal_error_exit(capsys, monkeypatch):
    from circulant import cli
    from circulant.errors import ConsistencyError

    def boom(*args, **kwargs):
        raise ConsistencyError("forced for the exit-code test")

    monkeypatch.setattr(cli, "det_expand", boom)
    code, _, err = run(capsys, "det", "--n", "3")
    assert code == 3 and "internal error" in err


def test_unknown_command(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1


def test_help_exits_cleanly(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "det" in out and "scan" in out
