import json
from pathlib import Path

import pytest

from pdcbench.cli import COMMANDS, build_parser, main, run_task
from pdcbench.workspace import load_workspace

WS = Path(__file__).parent.parent / "demos" / "workspaces"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_all_commands_exist():
    p = build_parser()
    for cmd in COMMANDS:
        assert p.parse_args([cmd, "ws.json"]).command == cmd
    assert len(COMMANDS) == 12


def test_check_homothety_regular_exits_zero(capsys):
    code, rep, _ = run(capsys, "check-pdc", WS / "kA2.json", "--candidate", "regular")
    assert code == 0
    assert rep["verdict"] == "pass-exact"


def test_homothety_task_alias():
    ws = load_workspace(WS / "kA2.json")
    out, code = run_task(ws, {"op": "check-homothety", "candidate": "regular"})
    assert code == 0 and out["verdict"] == "pass-exact"


def test_bass_membership_of_injective(capsys):
    code, rep, _ = run(capsys, "membership", WS / "kA2.json", "--candidate", "regular",
                       "--object", "I2", "--class", "bass")
    assert code == 0
    entry = rep["reports"][0]["reports"][0]
    assert entry["status"] == "member-exact" and entry["class"] == "bass"


def test_roundtrip_non_member_exits_one_with_witness(capsys):
    code, rep, _ = run(capsys, "roundtrip", WS / "non_example.json", "--candidate", "simple",
                       "--object", "X", "--class", "bass")
    assert code == 1
    r = rep["reports"][0]
    assert r["verdict"] == "fail" and r["witness"]


def test_non_example_checks_fail_with_certificates(capsys):
    code, rep, _ = run(capsys, "run", WS / "non_example.json")
    assert code == 1
    for r in rep["reports"][:2]:
        assert r["verdict"] == "fail"
        assert any(a.get("certificate") for a in r["axioms"] if a["verdict"] == "fail")


def test_window_limited_exits_two(capsys):
    code, rep, _ = run(capsys, "ext", WS / "dual_numbers.json", "--left", "S", "--right", "S",
                       "--degrees", "20", "--window", "4")
    assert code == 2


def test_ext_values(capsys):
    code, rep, _ = run(capsys, "ext", WS / "kA2.json", "--left", "S1", "--right", "S2", "--degrees", "0", "1")
    assert code == 0
    text = json.dumps(rep)
    assert '"1": 1' in text or '"1":1' in text


def test_load_error_exits_three(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": {"kind": "rationals"}, "modules": {"M": {"left": "Q", "dim": 1}}}')
    code, rep, err = run(capsys, "validate", bad)
    assert code == 3 and rep is None and "error" in err


def test_unresolved_task_reference_exits_three(capsys):
    code, _, err = run(capsys, "membership", WS / "kA2.json", "--candidate", "nope")
    assert code == 3 and "nope" in err


def test_report_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["run", str(WS / "dual_numbers.json"), "--report", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("name,code", [("kA2", 0), ("dual_numbers", 0), ("tilting", 0),
                                       ("base_change", 0), ("non_example", 1)])
def test_demo_workspaces(name, code, capsys):
    got, rep, _ = run(capsys, "run", WS / f"{name}.json")
    assert got == code
    for r in rep["reports"]:
        if r["verdict"] == "pass-exact":
            assert r.get("certificate") or all(
                a.get("certificate") for a in r.get("axioms", []) if a["verdict"] == "pass-exact")


def test_every_subcommand_runs(capsys):
    for cmd in COMMANDS:
        path = WS / ("base_change.json" if cmd == "relative-iv" else "kA2.json")
        code, rep, err = run(capsys, cmd, path)
        assert code in (0, 1, 2), (cmd, err)
        assert rep["command"] == cmd
