import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from gring.cli import _bind_values, main
from gring.coefficients import GF, QQ, ZZ
from gring.division import Relation, verify_relation
from gring.ring import mul_naive, parse_element

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "div": ["div", "--field", "q", "--rank", "2", "--x", "1+g+gh+ghg", "--y", "h+hg",
            "--a", "h", "--b", "-1-hg", "--json"],
    "mul_f3": ["mul", "--field", "fp:3", "--rank", "2", "--x", "1+g", "--y", "1+g+g^2", "--json"],
    "audit": ["audit-constants", "--delta", "5", "--json"],
    "gen_pair": ["gen-pair", "--seed", "4", "--depth", "3", "--field", "fp:7", "--json"],
    "pair_z": ["pair-analyze", "--field", "z", "--rank", "1", "--v", "2", "--w", "g-1", "--json"],
    "gcd": ["gcd", "--x", "1+g+gh+ghg", "--y", "h+hg", "--json"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(argv, capsys):
    code, out = run(argv, capsys)
    obj = json.loads(out)
    obj.pop("timestamp")
    return code, obj


def test_bind_values():
    assert _bind_values(["div", "--b", "-1-hg", "--json"]) == ["div", "--b=-1-hg", "--json"]


def test_div_example(capsys):
    code, out = run(CASES["div"][:-1], capsys)
    assert code == 0
    assert out.splitlines() == ["q = h'+g", "r = 0"]
    q = parse_element("h'+g")
    assert mul_naive(q, parse_element("h+hg")) == parse_element("1+g+gh+ghg")


def test_mul_example(capsys):
    code, out = run(CASES["mul_f3"][:-1], capsys)
    F3 = GF(3)
    want = mul_naive(parse_element("1+g", F3), parse_element("1+g+g^2", F3))
    assert parse_element(out.strip(), F3) == want
    assert out.strip() == "1+2*g+2*g^2+g^3"


def test_audit_example(capsys):
    code, obj = run_json(CASES["audit"], capsys)
    assert code == 0
    assert obj["result"]["threshold"] == 1475
    assert obj["result"]["genus_log_bound"] == 1000000


def test_pair_analyze_example(capsys):
    code, obj = run_json(CASES["pair_z"], capsys)
    assert obj["result"]["verdict"] == "rank-1-not-free" and obj["result"]["m"] == 2


def test_gen_pair_relation_holds(capsys):
    code, obj = run_json(CASES["gen_pair"], capsys)
    F7 = GF(7)
    r = obj["result"]
    x, y = parse_element(r["x"], F7), parse_element(r["y"], F7)
    rel = Relation(parse_element(r["relation"]["a"], F7), parse_element(r["relation"]["b"], F7))
    assert verify_relation(x, y, rel)
    assert obj["invocation"]["seed"] == 4 and "budget" in obj["invocation"]


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_transcripts(name, capsys, monkeypatch):
    monkeypatch.delenv("GRING_MAX_BALL_VERTICES", raising=False)
    code, obj = run_json(CASES[name], capsys)
    _, again = run_json(CASES[name], capsys)
    assert obj == again
    path = GOLDEN / f"{name}.json"
    if os.environ.get("GRING_UPDATE_GOLDEN"):
        path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    assert json.loads(path.read_text()) == obj


def test_element_files(tmp_path, capsys):
    (tmp_path / "x.txt").write_text("# dividend\n1+g+gh+ghg\n")
    (tmp_path / "v.txt").write_text("g-1\n0\n")
    (tmp_path / "w.txt").write_text("0\nh-1\n")
    code, out = run(["div", "--x", f"@{tmp_path / 'x.txt'}", "--y", "h+hg", "--a", "h", "--b", "-1-hg"], capsys)
    assert "q = h'+g" in out
    code, out = run(["pair-analyze", "--n", "2", "--v", f"@{tmp_path / 'v.txt'}", "--w", f"@{tmp_path / 'w.txt'}"],
                    capsys)
    assert code == 0 and "free-rank-2-at-budget" in out


def test_trace_file(tmp_path, capsys):
    trace = tmp_path / "t.json"
    run(CASES["div"][:-1] + ["--trace", str(trace)], capsys)
    steps = json.loads(trace.read_text())
    assert steps[0]["c"] == "h'+g" and steps[0]["diameter2_before"] == 6


def test_vector_entries_inline(capsys):
    code, obj = run_json(["pair-analyze", "--n", "2", "--v", "g-1;0", "--w", "0;h-1", "--json"], capsys)
    assert obj["result"]["verdict"] == "free-rank-2-at-budget"


def test_exit_codes(capsys, monkeypatch):
    assert run(["mul", "--x", "1+", "--y", "g"], capsys)[0] == 1
    assert run(["div", "--x", "g", "--y", "h", "--a", "1", "--b", "1"], capsys)[0] == 1
    assert run(["exact-div", "--x", "1", "--z", "1+g"], capsys) == (0, "none\n")
    assert run(["relation-search", "--x", "g-1", "--y", "h-1", "--radius2", "4"], capsys)[0] == 0
    assert run(["relation-search", "--x", "g-1", "--y", "h-1", "--radius2", "30", "--budget", "10"], capsys)[0] == 2
    assert run(["gcd", "--x", "g-1", "--y", "h-1", "--search-radius", "2"], capsys)[0] == 2
    monkeypatch.setenv("GRING_MAX_BALL_VERTICES", "5")
    assert run(["relation-search", "--x", "g-1", "--y", "h-1", "--radius2", "8"], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["mul", "--x", "g"])
    assert info.value.code == 1


def test_error_json(capsys):
    code, obj = run_json(["mul", "--x", "1+", "--y", "g", "--json"], capsys)
    assert code == 1 and obj["status"] == "error" and "column" in obj["error"]


def test_hyp_check(capsys):
    code, obj = run_json(["hyp-check", "--lemma", "delta", "--dim", "3", "--samples", "200", "--json"], capsys)
    assert code == 0 and obj["result"]["passed"]
    code, obj = run_json(["hyp-check", "--lemma", "delta", "--samples", "2000", "--delta", "0", "--json"], capsys)
    assert code == 1 and obj["result"]["results"][0]["failures"] > 0


def test_entry_point_and_version():
    out = subprocess.run([sys.executable, "-m", "gring", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("gring ")
    out = subprocess.run([sys.executable, "-m", "gring", "audit-constants", "--delta", "5"],
                         capture_output=True, text=True)
    assert "threshold = 1475" in out.stdout
