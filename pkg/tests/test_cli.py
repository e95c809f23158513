"""Command line surface: exit codes, output formats, config handling."""

from __future__ import annotations

import io
import subprocess
import sys

import pytest

from rainbowfree.canon import are_isomorphic
from rainbowfree.cli import FAIL, LIMIT, OK, USAGE, main
from rainbowfree.constructions import double, doubled_nine, pair_family, t_star
from rainbowfree.family import (
    MULTISET,
    SET,
    family_from_triangles,
    parse_family,
    serialize_family,
)


def run_cli(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def save(tmp_path, name, family):
    p = tmp_path / name
    p.write_text(serialize_family(family))
    return str(p)


RAINBOW3 = family_from_triangles(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])


# -- check


def test_check_rainbow_free(tmp_path, capsys):
    path = save(tmp_path, "t8.trifam", t_star(8))
    code, out, _ = run_cli(capsys, ["check", path])
    assert code == OK and out == "rainbow-free\n"
    code, out, _ = run_cli(capsys, ["check", path, "--porcelain"])
    assert code == OK and out == "status=rainbow-free\n"


def test_check_rainbow_prints_certificate(tmp_path, capsys):
    path = save(tmp_path, "bad.trifam", RAINBOW3)
    code, out, _ = run_cli(capsys, ["check", path])
    assert code == FAIL and "rainbow" in out
    code, out, _ = run_cli(capsys, ["check", path, "--porcelain"])
    assert code == FAIL and out.startswith("status=rainbow\n")


def test_check_verify_bound(tmp_path, capsys):
    path = save(tmp_path, "t8.trifam", t_star(8))
    code, out, _ = run_cli(capsys, ["check", path, "--verify-bound"])
    assert code == OK
    assert "bound 8|T| = 64 <= n^2 = 64: holds" in out
    code, out, _ = run_cli(capsys, ["check", path, "--verify-bound", "--porcelain"])
    assert code == OK and "bound=holds" in out

    mpath = save(tmp_path, "d9.trifam", doubled_nine())
    code, out, _ = run_cli(capsys, ["check", mpath, "--verify-bound"])
    assert code == OK and "bound n/a (multiset mode)" in out
    code, out, _ = run_cli(capsys, ["check", mpath, "--verify-bound", "--porcelain"])
    assert code == OK and "bound=n/a" in out


def test_check_reads_stdin(capsys, monkeypatch):
    text = serialize_family(t_star(4))
    code, out, _ = run_cli(capsys, ["check", "-"], stdin=text, monkeypatch=monkeypatch)
    assert code == OK and out == "rainbow-free\n"


def test_check_out_writes_file(tmp_path, capsys):
    path = save(tmp_path, "t4.trifam", t_star(4))
    target = tmp_path / "verdict.txt"
    code, out, _ = run_cli(capsys, ["check", path, "--out", str(target)])
    assert code == OK and out == ""
    assert target.read_text() == "rainbow-free\n"


def test_check_bad_inputs(tmp_path, capsys):
    code, _, err = run_cli(capsys, ["check", str(tmp_path / "missing.trifam")])
    assert code == USAGE and "cannot read" in err
    broken = tmp_path / "broken.trifam"
    broken.write_text("trifam 2\nmode set\nn 4\n0 1 2\n")
    code, _, err = run_cli(capsys, ["check", str(broken)])
    assert code == USAGE and "header" in err


# -- construct


def test_construct_tstar(capsys):
    code, out, _ = run_cli(capsys, ["construct", "tstar", "--n", "8"])
    assert code == OK
    assert parse_family(out).same_family(t_star(8))
    code, _, err = run_cli(capsys, ["construct", "tstar", "--n", "6"])
    assert code == USAGE and "n % 4" in err
    code, _, err = run_cli(capsys, ["construct", "tstar"])
    assert code == USAGE and "--n" in err


def test_construct_pairs(capsys):
    argv = ["construct", "pairs", "--n", "7", "--pairs", "2", "--apexes", "3"]
    code, out, _ = run_cli(capsys, argv)
    assert code == OK
    assert parse_family(out).same_family(pair_family(7, 2, 3))
    code, _, err = run_cli(capsys, ["construct", "pairs", "--n", "7", "--pairs", "2"])
    assert code == USAGE and "--apexes" in err


def test_construct_fig5(capsys):
    code, out, _ = run_cli(capsys, ["construct", "fig5"])
    assert code == OK
    assert parse_family(out).same_family(doubled_nine())


def test_construct_double(tmp_path, capsys, monkeypatch):
    src = family_from_triangles(6, [(0, 1, 2), (3, 4, 5)])
    path = save(tmp_path, "src.trifam", src)
    code, out, _ = run_cli(capsys, ["construct", "double", path])
    assert code == OK
    assert parse_family(out).same_family(double(src))
    code, out, _ = run_cli(
        capsys,
        ["construct", "double"],
        stdin=serialize_family(src),
        monkeypatch=monkeypatch,
    )
    assert code == OK and parse_family(out).same_family(double(src))


def test_construct_rejects_stray_file(tmp_path, capsys):
    path = save(tmp_path, "t4.trifam", t_star(4))
    code, _, err = run_cli(capsys, ["construct", "tstar", path, "--n", "4"])
    assert code == USAGE and "takes no family file" in err


# -- certify


def test_certify_extremal(tmp_path, capsys):
    path = save(tmp_path, "t8.trifam", t_star(8))
    code, out, _ = run_cli(capsys, ["certify", path])
    assert code == OK and "verdict" in out
    code, out, _ = run_cli(capsys, ["certify", path, "--porcelain"])
    assert code == OK and "verdict=pass" in out
    assert "is_tstar=true" in out and "extremal=true" in out


def test_certify_non_extremal(tmp_path, capsys):
    path = save(tmp_path, "p.trifam", pair_family(7, 2, 3))
    code, out, _ = run_cli(capsys, ["certify", path])
    assert code == OK


def test_certify_rainbow_family(tmp_path, capsys):
    path = save(tmp_path, "bad.trifam", RAINBOW3)
    code, out, _ = run_cli(capsys, ["certify", path, "--porcelain"])
    assert code == FAIL and out.startswith("status=rainbow\n")


def test_certify_mis_limit(tmp_path, capsys):
    big = family_from_triangles(70, [(0, 1, 2)])
    path = save(tmp_path, "big.trifam", big)
    code, _, err = run_cli(capsys, ["certify", path])
    assert code == LIMIT and "error:" in err


# -- search


def test_search_maximize(capsys):
    code, out, err = run_cli(capsys, ["search", "--n", "7"])
    assert code == OK
    assert out.startswith("best = 6\n")
    assert "witnesses = " in out
    assert "trifam 1" in out  # witness blocks inline
    assert err.startswith("nodes = ")


def test_search_porcelain(capsys):
    code, out, err = run_cli(capsys, ["search", "--n", "6", "--porcelain"])
    assert code == OK
    assert out.startswith("best=4\n")
    assert "witnesses=2" in out
    assert err.startswith("nodes=")


def test_search_prove_found_and_refuted(capsys):
    code, out, _ = run_cli(capsys, ["search", "--n", "8", "--prove", "8"])
    assert code == OK and "witness = found" in out
    code, out, _ = run_cli(capsys, ["search", "--n", "5", "--prove", "4"])
    assert code == FAIL and "witness = refuted" in out


def test_search_multiset_prove(capsys):
    argv = ["search", "--n", "9", "--mode", "multiset", "--prove", "12"]
    code, out, _ = run_cli(capsys, argv)
    assert code == OK and "witness = found" in out


def test_search_enumerate(capsys):
    argv = ["search", "--n", "8", "--enumerate-extremal", "--porcelain"]
    code, out, _ = run_cli(capsys, argv)
    assert code == OK and "classes=1" in out


def test_search_node_limit_hits_limit(capsys):
    code, out, _ = run_cli(capsys, ["search", "--n", "7", "--node-limit", "3"])
    assert code == LIMIT and "completed = false" in out


def test_search_witness_files(tmp_path, capsys):
    base = str(tmp_path / "wit")
    code, out, _ = run_cli(capsys, ["search", "--n", "6", "--out", base])
    assert code == OK
    assert f"witness-file.0 = {base}-0" in out
    assert f"witness-file.1 = {base}-1" in out
    assert "trifam 1" not in out
    w0 = parse_family((tmp_path / "wit-0").read_text())
    assert w0.n == 6 and w0.size == 4


def test_search_checkpoint_resume(tmp_path, capsys):
    ck = str(tmp_path / "run.ckpt")
    argv = [
        "search", "--n", "7", "--node-limit", "5",
        "--checkpoint", ck, "--checkpoint-interval", "2",
    ]
    code, out, _ = run_cli(capsys, argv)
    assert code == LIMIT and "completed = false" in out
    code, out, _ = run_cli(capsys, ["search", "--resume", ck])
    assert code == OK and out.startswith("best = 6\n")


def test_search_resume_rejects_overrides(tmp_path, capsys):
    ck = str(tmp_path / "run.ckpt")
    run_cli(capsys, [
        "search", "--n", "6", "--node-limit", "3",
        "--checkpoint", ck, "--checkpoint-interval", "2",
    ])
    code, _, err = run_cli(capsys, ["search", "--resume", ck, "--n", "6"])
    assert code == USAGE and "--resume takes --n from the checkpoint" in err
    code, _, err = run_cli(capsys, ["search", "--resume", ck, "--enumerate-extremal"])
    assert code == USAGE and "target" in err
    code, _, err = run_cli(capsys, ["search", "--resume", str(tmp_path / "no.ckpt")])
    assert code == USAGE


def test_search_flag_validation(capsys):
    code, _, err = run_cli(capsys, ["search"])
    assert code == USAGE and "--n" in err
    code, _, err = run_cli(
        capsys, ["search", "--n", "6", "--prove", "4", "--enumerate-extremal"]
    )
    assert code == USAGE and "mutually exclusive" in err
    code, _, err = run_cli(capsys, ["search", "--n", "2"])
    assert code == USAGE and "n >= 3" in err


# -- rs


def test_rs_doubled_nine(tmp_path, capsys):
    path = save(tmp_path, "d9.trifam", doubled_nine())
    code, out, _ = run_cli(capsys, ["rs", path])
    assert code == OK
    assert "n = 9" in out
    assert "t2-constraints = true" in out
    assert "unique-triangle = true" in out
    code, out, _ = run_cli(capsys, ["rs", path, "--porcelain"])
    assert code == OK
    assert out == (
        "n=9\nt1=6\nt2=6\ng2-edges=18\ntotal=12\n"
        "t1-bound=holds\nt2-constraints=true\nunique-triangle=true\n"
    )


def test_rs_rejects_set_mode(tmp_path, capsys):
    path = save(tmp_path, "t8.trifam", t_star(8))
    code, _, err = run_cli(capsys, ["rs", path])
    assert code == USAGE and "multiset" in err


def test_rs_flags_violations(tmp_path, capsys):
    f = family_from_triangles(4, [(0, 1, 2, 2), (0, 1, 3, 2)], MULTISET)
    path = save(tmp_path, "v.trifam", f)
    code, out, _ = run_cli(capsys, ["rs", path])
    assert code == FAIL
    assert "t2-constraints = false" in out
    assert "  edge (0, 1) shared by members" in out
    assert "unique-triangle = false (edge (0, 1))" in out


# -- iso and canon


def test_iso(tmp_path, capsys):
    perm = {v: (v * 3 + 1) % 8 for v in range(8)}
    shuffled = family_from_triangles(
        8, [tuple(sorted(perm[v] for v in t)) for t in t_star(8).support], SET
    )
    a = save(tmp_path, "a.trifam", t_star(8))
    b = save(tmp_path, "b.trifam", shuffled)
    c = save(tmp_path, "c.trifam", pair_family(8, 1, 6))
    code, out, _ = run_cli(capsys, ["iso", a, b])
    assert code == OK and out == "isomorphic\n"
    code, out, _ = run_cli(capsys, ["iso", a, c])
    assert code == FAIL and out == "not-isomorphic\n"
    code, out, _ = run_cli(capsys, ["iso", a, b, "--porcelain"])
    assert code == OK and out == "isomorphic=true\n"


def test_canon_normalizes_relabelings(tmp_path, capsys):
    perm = {0: 5, 1: 2, 2: 7, 3: 0, 4: 3, 5: 1, 6: 6, 7: 4}
    shuffled = family_from_triangles(
        8, [tuple(sorted(perm[v] for v in t)) for t in t_star(8).support], SET
    )
    a = save(tmp_path, "a.trifam", t_star(8))
    b = save(tmp_path, "b.trifam", shuffled)
    code, out_a, _ = run_cli(capsys, ["canon", a])
    assert code == OK
    code, out_b, _ = run_cli(capsys, ["canon", b])
    assert code == OK
    assert out_a == out_b
    assert are_isomorphic(parse_family(out_a), t_star(8))


# -- config files


def test_config_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "search.cfg"
    cfg.write_text("n = 6\nporcelain = true\n# comment\n\n")
    code, out, _ = run_cli(capsys, ["search", "--config", str(cfg)])
    assert code == OK and out.startswith("best=4\n")


def test_config_explicit_flags_win(tmp_path, capsys):
    cfg = tmp_path / "search.cfg"
    cfg.write_text("n = 5\n")
    code, out, _ = run_cli(capsys, ["search", "--n", "7", "--config", str(cfg)])
    assert code == OK and out.startswith("best = 6\n")


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mystery = 1\n")
    code, _, err = run_cli(capsys, ["search", "--n", "6", "--config", str(cfg)])
    assert code == USAGE and "unknown key 'mystery'" in err
    cfg.write_text("n = lots\n")
    code, _, err = run_cli(capsys, ["search", "--config", str(cfg)])
    assert code == USAGE and "bad value" in err
    cfg.write_text("just words\n")
    code, _, err = run_cli(capsys, ["search", "--config", str(cfg)])
    assert code == USAGE and "expected key = value" in err
    code, _, err = run_cli(capsys, ["check", "x", "--config", str(tmp_path / "no.cfg")])
    assert code == USAGE and "cannot read" in err


def test_config_dashed_keys(tmp_path, capsys):
    cfg = tmp_path / "lim.cfg"
    cfg.write_text("node-limit = 3\nn = 7\n")
    code, out, _ = run_cli(capsys, ["search", "--config", str(cfg)])
    assert code == LIMIT and "completed = false" in out


# -- parser level


def test_usage_errors(capsys):
    assert run_cli(capsys, [])[0] == USAGE
    assert run_cli(capsys, ["frobnicate"])[0] == USAGE
    assert run_cli(capsys, ["check"])[0] == USAGE
    assert run_cli(capsys, ["construct", "sphere"])[0] == USAGE


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "rainbowfree.cli", "construct", "tstar", "--n", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == OK
    assert parse_family(proc.stdout).same_family(t_star(4))
    proc = subprocess.run(
        [sys.executable, "-m", "rainbowfree.cli", "check", "-"],
        input=proc.stdout,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == OK and proc.stdout == "rainbow-free\n"
