"""Golden-file tests for the command line and its exit-code contract."""

import subprocess
import sys
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*argv, env=None):
    return subprocess.run(
        [sys.executable, "-m", "redukto.cli", *argv],
        capture_output=True,
        text=True,
        env=env,
    )


GOLDEN_CASES = [
    ("run_m_e_aaaa_trace.txt", ["run", "m_e", "aaaa", "--trace"]),
    ("run_m_e_aaa.txt", ["run", "m_e", "aaa"]),
    ("run_dyck1_trace.txt", ["run", "dyck1", "a1ā1a1ā1", "--trace"]),
    ("decide_m_e_basic_b.txt", ["decide", "m_e", "b", "--kind", "basic"]),
    ("decide_m_e_h_hproper_aaa.txt", ["decide", "m_e_h", "aaa", "--kind", "hproper"]),
    ("decide_dyck1_input.txt", ["decide", "dyck1", "a1ā1a1ā1", "--kind", "input"]),
    ("enum_dyck1_basic_4.txt", ["enum", "dyck1", "--kind", "basic", "--max-len", "4"]),
    ("check_m_e_mono.txt", ["check", "m_e", "--what", "mono", "--max-len", "8"]),
    ("check_dyck1_mono.txt", ["check", "dyck1", "--what", "mono", "--max-len", "10"]),
    ("check_m_e_forms.txt", ["check", "m_e", "--what", "forms"]),
    ("enum_m_e_input_9.txt", ["enum", "m_e", "--kind", "input", "--max-len", "9"]),
    ("enum_dyck1_input_4.txt", ["enum", "dyck1", "--kind", "input", "--max-len", "4"]),
    ("catalog.txt", ["catalog"]),
]


@pytest.mark.parametrize("name,argv", GOLDEN_CASES, ids=[n for n, _ in GOLDEN_CASES])
def test_golden(name, argv):
    proc = run_cli(*argv)
    got = "exit %d\n%s" % (proc.returncode, proc.stdout)
    assert got == (GOLDEN / name).read_text(encoding="utf-8")


def test_run_exit_codes(tmp_path):
    assert run_cli("run", "m_e", "aaaa").returncode == 0
    assert run_cli("run", "m_e", "aaa").returncode == 1
    assert run_cli("run", "m_e", "zz").returncode == 3
    bad = tmp_path / "bad.rlww"
    bad.write_text("name x\nwindow nope\n", encoding="utf-8")
    proc = run_cli("run", str(bad), "a")
    assert proc.returncode == 3
    assert "line 2" in proc.stderr


def test_run_with_limits_exit():
    proc = run_cli("run", "m_e", "aaaaaaaa", "--limits", "steps=3")
    assert proc.returncode == 2


def test_limits_environment_override():
    import os

    env = dict(os.environ, REDUKTO_LIMITS="steps=3")
    proc = run_cli("run", "m_e", "aaaaaaaa", env=env)
    assert proc.returncode == 2


def test_decide_input_alphabet_violation():
    proc = run_cli("decide", "m_e", "b", "--kind", "input")
    assert proc.returncode == 3


def test_file_arguments_resolve(tmp_path):
    exported = tmp_path / "m_e.rlww"
    assert run_cli("catalog", "--export", "m_e", "-o", str(exported)).returncode == 0
    assert run_cli("run", str(exported), "aaaa").returncode == 0
    # Exported text matches the in-memory rendering byte for byte.
    from redukto.catalog import catalog_get
    from redukto.fileformat import render_automaton

    assert exported.read_text(encoding="utf-8") == render_automaton(
        catalog_get("m_e").spec
    )


def test_transform_pipeline_and_checks(tmp_path):
    grammar = tmp_path / "anbn.g"
    out = tmp_path / "anbn.rlww"
    assert run_cli("catalog", "--export", "anbn_gnf", "-o", str(grammar)).returncode == 0
    proc = run_cli("transform", "gnf2hrrwwc", str(grammar), "--window", "3",
                   "-o", str(out))
    assert proc.returncode == 0
    assert "used 4" in proc.stdout
    assert run_cli("check", str(out), "--what", "forms").returncode == 0
    assert run_cli("check", str(out), "--what", "det").returncode == 0
    proc = run_cli("decide", str(out), "aabb", "--kind", "hproper")
    assert proc.returncode == 0
    assert "witness: (1,a) (2,a) (3,b) (3,b)" in proc.stdout
    assert run_cli("decide", str(out), "abab", "--kind", "hproper").returncode == 1


def test_transform_window_cap_failure(tmp_path):
    grammar = tmp_path / "anbn.g"
    out = tmp_path / "anbn.rlww"
    run_cli("catalog", "--export", "anbn_gnf", "-o", str(grammar))
    proc = run_cli("transform", "gnf2hrrwwc", str(grammar), "--window", "2",
                   "--window-cap", "2", "-o", str(out))
    assert proc.returncode == 1
    assert "synthesis-failed" in proc.stdout


def test_transform_shrink(tmp_path):
    out = tmp_path / "m_e_h_shrunk.rlww"
    proc = run_cli("transform", "shrink", "m_e_h", "-o", str(out))
    assert proc.returncode == 0
    assert "a=3" in proc.stdout
    assert run_cli("check", str(out), "--what", "det").returncode == 1
    assert run_cli("check", str(out), "--what", "shrink", "--max-len", "6").returncode == 0


def test_cmp_against_oracle():
    proc = run_cli("cmp", "m_e", "input", "oracle:m_e", "input", "--max-len", "12")
    assert proc.returncode == 0
    assert "equal up to length 12" in proc.stdout
    proc = run_cli("cmp", "dyck1", "input", "oracle:l_2", "input", "--max-len", "4")
    assert proc.returncode == 1
    assert "counterexample" in proc.stdout


def test_check_cycle_degree_override():
    assert run_cli("check", "lm_1", "--what", "cycle", "--max-len", "8").returncode == 0
    assert run_cli(
        "check", "lm_1", "--what", "cycle", "--max-len", "8", "--degree", "1"
    ).returncode == 1
