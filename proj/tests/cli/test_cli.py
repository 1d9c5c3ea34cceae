import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("FGAME_BIN", "fgame")
DATA = Path(os.environ.get("FGAME_DATA", Path(__file__).resolve().parents[2] / "data")) / "corpus"
ALL_SIGNS = DATA / "formulas" / "all_signs.cnf"


def run(*args, stdin=None, env=None):
    return subprocess.run([BIN, *map(str, args)], input=stdin, capture_output=True, text=True,
                          env={**os.environ, **(env or {})})


def ok(*args, stdin=None):
    p = run(*args, stdin=stdin)
    assert p.returncode == 0, p.stderr
    return p.stdout


def solve_json(text, *flags):
    return json.loads(ok("solve", *flags, "--format", "json", stdin=text))


def test_version():
    assert ok("--version").strip() == "fgame 1.0.0 (schema 1)"


def test_counterexample_pipeline():
    game = ok("gen", "counterexample", "--n", "4")
    assert solve_json(game, "--exact")["value"] == 0.75


def test_constant_one_fixture():
    doc = {"kind": "free2", "x": 2, "y": 3, "a": 2, "b": 2, "table": [1] * 24}
    assert solve_json(json.dumps(doc), "--exact")["value"] == 1.0


def test_birthday_pipeline_matches_experiment():
    desc = ok("gen", "birthday", "--k", "2", "--l", "2", ALL_SIGNS)
    assert json.loads(desc)["kind"] == "birthday"
    value = solve_json(desc, "--exact")["value"]
    rows = json.loads(ok("experiment", "birthday-gap", "--k", "2", "--l", "2", "--format", "json", ALL_SIGNS))["rows"]
    num, den = map(int, rows[0]["repeated_value"].split("/"))
    assert abs(value - num / den) < 1e-12


def test_cvgame_of_satisfiable_formula():
    game = ok("convert", "--from", "dimacs", "--to", "cvgame", DATA / "formulas" / "triples_4.cnf")
    assert solve_json(game, "--exact")["value"] == 1.0


def test_free_to_2csp_preserves_value():
    source = DATA / "games" / "seed_7.json"
    csp = ok("convert", "--from", "game-json", "--to", "2csp", source)
    assert solve_json(csp, "--exact")["value"] == solve_json(source.read_text(), "--exact")["value"]


def test_game_json_round_trip_bytes():
    for path in sorted((DATA / "games").glob("*.json"))[:5]:
        assert ok("convert", "--from", "game-json", "--to", "game-json", path) == path.read_text()
    generated = ok("gen", "counterexample", "--n", "3")
    assert ok("convert", "--from", "game-json", "--to", "game-json", stdin=generated) == generated


def test_outputs_embed_version_config_and_seed():
    doc = json.loads(ok("gen", "counterexample", "--n", "3", "--seed", "9"))
    meta = doc["meta"]
    assert meta["version"] == "1.0.0" and meta["seed"] == 9 and meta["config"]["n"] == "3"
    csv = ok("experiment", "collision", "--k", "1", "--l", "1", DATA / "graphs" / "complete_2_2.txt")
    assert csv.startswith("# fgame 1.0.0")
    assert "# seed 0" in csv
    assert "m,n,c,d,k,l,probability,bound,bound_positive,holds" in csv


def test_thread_count_does_not_change_output():
    game = (DATA / "games" / "seed_5.json").read_text()
    outs = {ok("solve", "--rest", "--eps", "0.5", "--seed", "3", "--threads", t, "--format", "json", stdin=game)
            for t in ("1", "3")}
    assert len(outs) == 1
    outs = {ok("experiment", "subsample", "--kappa", "1,2", "--threads", t, DATA / "games" / "seed_5.json")
            for t in ("1", "4")}
    assert len(outs) == 1


def test_decision_exit_codes():
    sat = ok("gen", "cvgame", DATA / "formulas" / "single.cnf")
    assert run("solve", "--decide-gap", "--eps", "0.1", stdin=sat).returncode == 0
    unsat = ok("gen", "cvgame", ALL_SIGNS)
    p = run("solve", "--decide-gap", "--eps", "0.04", stdin=unsat)
    assert p.returncode == 1
    assert "below-gap" in p.stdout


@pytest.mark.parametrize("args", [
    ("solve", "--est", "--eps", "1.5"),
    ("solve", "--est", "--eps", "0"),
    ("solve", "--decide-delta", "--delta", "-0.1"),
    ("solve", "--subsample", "--eps", "0.5", "--lambda", "0"),
    ("solve", "--exact", "--threads", "0"),
    ("solve", "--exact", "--budget", "-1"),
    ("solve", "--exact", "--est"),
    ("gen", "counterexample", "--n", "1"),
    ("gen", "threshold", "--n", "2", "--threshold", "1.5"),
    ("experiment", "collision", "--k", "0"),
    ("experiment", "amplify", "--n", "0"),
    ("convert", "--from", "dimacs", "--to", "xml"),
    ("nonsense",),
])
def test_out_of_range_parameters_are_usage_errors(args):
    # Nothing on stdin: rejection must happen before any input is read.
    assert run(*args, stdin="").returncode == 64


def test_method_parameters_are_checked():
    game = ok("gen", "counterexample", "--n", "2")
    assert run("solve", "--est", stdin=game).returncode == 64
    assert run("solve", "--exact", "--eps", "0.3", stdin=game).returncode == 64
    assert run("solve", "--exact", stdin="{not json").returncode == 64
    assert run("solve", "--exact", stdin='{"kind":"free2"}').returncode == 64


def test_budget_exit_code_and_env():
    game = ok("gen", "counterexample", "--n", "5")
    p = run("solve", "--exact", "--budget", "100", stdin=game)
    assert p.returncode == 65
    assert "estimated cost" in p.stderr
    assert run("solve", "--exact", stdin=game, env={"FGAME_BUDGET": "100"}).returncode == 65
    assert run("solve", "--exact", stdin=game, env={"FGAME_BUDGET": "abc"}).returncode == 64


def test_report():
    p = run("experiment", "report")
    assert p.returncode == 0
    assert "assertions passed" in p.stdout
    doc = json.loads(ok("experiment", "report", "--format", "json"))
    failed = [a for a in doc["assertions"] if not a["passed"]]
    assert [a["experiment"] for a in failed] == ["amplification direction"]
    assert run("experiment", "report", "--strict").returncode == 1
