import json

import pytest

from cli_cases import CASES, materialize
from vaporlab.cli import build_parser, parse_sequence
from vaporlab.errors import VaporlabError


def test_every_subcommand_has_a_case():
    parser = build_parser()
    groups = parser._subparsers._group_actions[0].choices
    names = {f"{g} {c}" for g, sub in groups.items() for c in sub._subparsers._group_actions[0].choices}
    assert names == set(CASES)


@pytest.mark.parametrize("name", sorted(CASES))
def test_subcommand_succeeds_with_json(name, run_cli, tmp_path):
    code, out = run_cli(*materialize(CASES[name], tmp_path))
    assert code == 0
    assert isinstance(json.loads(out), dict)


def test_parse_sequence_forms(tmp_path):
    assert parse_sequence("factorial:1:4").terms == (1, 2, 6, 24)
    assert parse_sequence("pi-floor:3").terms == (3, 9, 31)
    assert parse_sequence("explicit:1,5,9").terms == (1, 5, 9)
    assert parse_sequence("steered-pi:8").terms == (1, 4, 10, 32, 98, 306, 966, 3024)
    path = tmp_path / "s.txt"
    path.write_text(parse_sequence("factorial:2:3").to_text())
    assert parse_sequence("@" + str(path)).terms == (2, 6, 24)
    with pytest.raises(VaporlabError):
        parse_sequence("nonsense:1")


def test_roundtrip_cross_check(run_cli):
    code, out = run_cli("codec", "roundtrip", "--seq", "factorial:1:5", "--edges", "2 3")
    rep = json.loads(out)
    assert code == 0
    for key in ("q_missing", "q_spurious", "e_missing", "e_spurious"):
        assert rep[key] == []


def test_domain_error_exit_code(run_cli):
    code, out = run_cli("seq", "factorial", "--start", "0", "--count", "3")
    assert code == 1
    assert "strict increase" in json.loads(out)["error"]["message"]
    code, out = run_cli("seq", "growth", "--seq", "explicit:1,2,4,8", "--t", "2", "--r-abs", "0")
    assert code == 1 and json.loads(out)["error"]["type"] == "NoThresholdError"


def test_usage_error_exit_code(run_cli):
    with pytest.raises(SystemExit) as info:
        run_cli("seq", "bogus")
    assert info.value.code == 2


def test_table_output(run_cli):
    code, out = run_cli("solve", "lineq", "--seq", "factorial:1:10", "--m", "2", "--n", "1",
                        "--r", "-3", "--no-max-differ", "--table")
    assert code == 0
    assert "x_values" in out and "0 1" in out


def test_out_file(run_cli, tmp_path):
    target = tmp_path / "r.json"
    code, out = run_cli("solve", "facbase", "--value", "7", "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["digits"] == [1, 0, 1]
