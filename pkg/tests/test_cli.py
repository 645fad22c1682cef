"""Command line interface: exit codes, output formats, protocol parity."""

import json
import os
import subprocess
import sys

import pytest

NABELLA = [sys.executable, "-m", "nabella.cli"]


def run_cli(args, input=None, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(NABELLA + args, input=input, text=True,
                          capture_output=True, env=env, cwd=cwd)


def canon(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# check

def test_check_pass(corpus_dir):
    r = run_cli(["check", os.path.join(corpus_dir, "even_odd.thm")])
    assert r.returncode == 0
    assert "PASS" in r.stdout


def test_check_fail(tmp_path):
    p = tmp_path / "bad.thm"
    p.write_text("Kind i type. Type z i.\n"
                 "Define r : i -> prop by r z.\n"
                 "Theorem t : forall X, r X. intros. search.\n")
    r = run_cli(["check", str(p)])
    assert r.returncode == 1
    assert "FAIL" in r.stdout


def test_check_json(corpus_dir):
    r = run_cli(["check", "--json", os.path.join(corpus_dir, "even_odd.thm")])
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["ok"] is True
    assert out["files"][0]["ok"] is True


def test_check_usage_error():
    r = run_cli(["check"])
    assert r.returncode == 2


def test_check_whole_corpus(corpus_dir):
    files = sorted(os.path.join(corpus_dir, f)
                   for f in os.listdir(corpus_dir) if f.endswith(".thm"))
    r = run_cli(["check"] + files)
    assert r.returncode == 0, r.stdout + r.stderr
    assert r.stdout.count("PASS") == len(files)


# ---------------------------------------------------------------------------
# query

def test_query_eval(corpus_dir):
    r = run_cli(["query", "stlc.sig",
                 "eval (app (abs i (x\\ x)) (abs i (y\\ y))) V"],
                cwd=corpus_dir)
    assert r.returncode == 0
    assert "V = abs i (x\\ x)" in r.stdout


def test_query_of(corpus_dir):
    r = run_cli(["query", "stlc.sig", "of (abs i (x\\ x)) T"],
                cwd=corpus_dir)
    assert r.returncode == 0
    assert "T = arr i i" in r.stdout


def test_query_no_solutions(corpus_dir):
    r = run_cli(["query", "stlc.sig",
                 "of (abs i (x\\ app x x)) T"], cwd=corpus_dir)
    assert r.returncode == 1
    assert "No solutions." in r.stdout


# ---------------------------------------------------------------------------
# debug commands

def test_unify_pattern():
    r = run_cli(["unify", "--type", "g:i -> i -> i", "F n1", "g n1 n1"])
    assert r.returncode == 0
    assert "F = x\\ g x x" in r.stdout


def test_unify_identity():
    r = run_cli(["unify", "X", "X"])
    assert r.returncode == 0
    assert "identity" in r.stdout


def test_unify_clash():
    r = run_cli(["unify", "--type", "c:i", "--type", "d:i", "c", "d"])
    assert r.returncode == 1
    assert "No unifier" in r.stdout


def test_nabs_holds():
    r = run_cli(["nabs", "x\\ x", "n1", "1"])
    assert r.returncode == 0
    assert "yes" in r.stdout


def test_nabs_fails():
    r = run_cli(["nabs", "--type", "c:i", "x\\ x", "c", "1"])
    assert r.returncode == 1


def test_nabs_solutions():
    r = run_cli(["nabs", "x\\ x", "Y", "1"])
    assert r.returncode == 0
    assert "Y = n1" in r.stdout


# ---------------------------------------------------------------------------
# repl

EVEN_SCRIPT = """Kind nat type.
Type z nat.
Type s nat -> nat.
Define even : nat -> prop by even z ; even (s (s N)) := even N.
Theorem even_z : even z.
search.
"""


def test_repl_json_emits_one_line_per_statement():
    r = run_cli(["repl", "--json"], input=EVEN_SCRIPT)
    assert r.returncode == 0
    lines = [json.loads(l) for l in r.stdout.splitlines() if l.strip()]
    assert len(lines) == 6
    assert all(o["status"] == "ok" for o in lines)
    # entering the theorem opens a proof, search closes it
    assert lines[4]["proof"] is True
    assert lines[5]["proof"] is False


def test_repl_json_error_reported():
    r = run_cli(["repl", "--json"], input="Kind nat type.\nbogus junk.\n")
    lines = [json.loads(l) for l in r.stdout.splitlines() if l.strip()]
    assert lines[0]["status"] == "ok"
    assert lines[1]["status"] == "error"
    assert lines[1]["error"]


def test_repl_depth_flag_beats_env(tmp_path):
    # NABELLA_DEPTH makes the default search too shallow; --depth wins
    script = ("Kind i type. Type z i. Type s i -> i.\n"
              "Define nat : i -> prop by nat z ; nat (s N) := nat N.\n"
              "Theorem t : nat (s (s (s (s z)))).\n"
              "search.\n")
    r = run_cli(["repl", "--json"], input=script,
                env_extra={"NABELLA_DEPTH": "1"})
    lines = [json.loads(l) for l in r.stdout.splitlines() if l.strip()]
    assert lines[-1]["status"] == "error"
    r = run_cli(["repl", "--json", "--depth", "8"], input=script,
                env_extra={"NABELLA_DEPTH": "1"})
    lines = [json.loads(l) for l in r.stdout.splitlines() if l.strip()]
    assert lines[-1]["status"] == "ok"
    assert lines[-1]["proof"] is False


# ---------------------------------------------------------------------------
# serve --stdio protocol

def serve_exchange(requests, cwd=None):
    inp = "\n".join(json.dumps(r) for r in requests) + "\n"
    r = run_cli(["serve", "--stdio"], input=inp, cwd=cwd)
    assert r.returncode == 0
    return [json.loads(l) for l in r.stdout.splitlines() if l.strip()]


def test_serve_basic_session(corpus_dir):
    out = serve_exchange([
        {"id": 1, "cmd": "load_spec", "text": "stlc.sig"},
        {"id": 2, "cmd": "command",
         "text": "Theorem t : {of (abs i (x\\ x)) (arr i i)}."},
        {"id": 3, "cmd": "tactic", "text": "search."},
        {"id": 4, "cmd": "state"},
    ], cwd=corpus_dir)
    assert [o["id"] for o in out] == [1, 2, 3, 4]
    assert all(o["status"] == "ok" for o in out)
    assert out[1]["subgoals"]
    assert out[2]["subgoals"] == []


def test_serve_undo_and_errors(corpus_dir):
    out = serve_exchange([
        {"id": 1, "cmd": "command", "text": "Kind i type."},
        {"id": 2, "cmd": "command", "text": "bogus."},
        {"id": 3, "cmd": "undo"},
        {"id": 4, "cmd": "mystery"},
        {"id": 5, "cmd": "state"},
    ], cwd=corpus_dir)
    assert out[0]["status"] == "ok"
    assert out[1]["status"] == "error" and out[1]["error"]
    assert out[2]["status"] == "ok"
    assert out[3]["status"] == "error"
    assert out[3]["kind"] == "unknown_command"
    assert out[4]["status"] == "ok"


def test_serve_malformed_json(corpus_dir):
    r = run_cli(["serve", "--stdio"], input="this is not json\n",
                cwd=corpus_dir)
    out = [json.loads(l) for l in r.stdout.splitlines() if l.strip()]
    assert out[0]["status"] == "error"


# ---------------------------------------------------------------------------
# parity: repl --json and serve --stdio describe identical states

def script_statements(path):
    from nabella.session import split_statements, _untokenize
    with open(path) as fh:
        text = fh.read()
    return [_untokenize(toks) + "." for toks in split_statements(text)]


@pytest.mark.parametrize("thm", ["even_odd.thm", "preservation.thm"])
def test_protocol_parity(corpus_dir, thm):
    path = os.path.join(corpus_dir, thm)
    with open(path) as fh:
        text = fh.read()
    repl = run_cli(["repl", "--json"], input=text, cwd=corpus_dir)
    assert repl.returncode == 0
    repl_lines = [json.loads(l) for l in repl.stdout.splitlines()
                  if l.strip()]

    stmts = script_statements(path)
    reqs = []
    for i, stmt in enumerate(stmts):
        kind = "command" if stmt.split()[0][0].isupper() else "tactic"
        reqs.append({"id": i, "cmd": kind, "text": stmt})
    serve_lines = serve_exchange(reqs, cwd=corpus_dir)

    assert len(repl_lines) == len(serve_lines) == len(stmts)
    for a, b in zip(repl_lines, serve_lines):
        assert a["status"] == b["status"] == "ok"
        assert canon(a["subgoals"]) == canon(b["subgoals"])
