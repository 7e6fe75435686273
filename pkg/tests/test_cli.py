import csv
import json
import math

import pytest

from nsmac.cli import cli_dispatch


def run(capsys, *argv):
    rc = cli_dispatch(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_success_bac_2x2(capsys):
    rc, out, _ = run(capsys, "success", "--channel", "bac",
                     "--k1", "2", "--k2", "2")
    assert rc == 0
    assert "0.75" in out


def test_success_trivial(capsys):
    rc, out, _ = run(capsys, "success", "--channel", "bac",
                     "--k1", "1", "--k2", "1")
    assert rc == 0
    assert "= 1" in out


def test_certify_exact(capsys):
    rc, out, _ = run(capsys, "certify", "--channel", "bac", "-n", "1",
                     "--k1", "1", "--k2", "2", "--certify", "exact")
    assert rc == 0
    assert "certified_exact_one" in out


def test_certify_below_one_exit_code(capsys):
    rc, out, _ = run(capsys, "certify", "--channel", "bac", "-n", "1",
                     "--k1", "2", "--k2", "2", "--certify", "exact")
    assert rc == 1
    assert "below_one" in out


def test_region_closed_form_csv(capsys, tmp_path):
    out_path = str(tmp_path / "cf.csv")
    rc, out, _ = run(capsys, "region", "--channel", "bac",
                     "--kind", "relaxed-closed-form", "--out", out_path)
    assert rc == 0
    with open(out_path) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["R1", "R2"]
    best = max(float(a) + float(b) for a, b in rows[1:])
    assert abs(best - math.log2(3)) <= 1e-6
    manifest = json.load(open(out_path + ".manifest.json"))
    assert "versions" in manifest and "config" in manifest


def test_region_rerun_byte_identical(capsys, tmp_path):
    p1, p2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    run(capsys, "region", "--channel", "bac", "--kind", "classical",
        "--grid", "32", "--out", p1)
    run(capsys, "region", "--channel", "bac", "--kind", "classical",
        "--grid", "32", "--out", p2)
    assert open(p1).read() == open(p2).read()


def test_frontier_csv(capsys, tmp_path):
    out_path = str(tmp_path / "fr.csv")
    rc, out, _ = run(capsys, "frontier", "--channel", "bac", "-n", "1",
                     "--out", out_path)
    assert rc == 0
    lines = open(out_path).read().strip().split("\n")
    assert lines[0] == "R1,R2"
    assert len(lines) == 3      # (1,2) and (2,1)


def test_concat_csv(capsys, tmp_path):
    out_path = str(tmp_path / "cc.csv")
    rc, out, _ = run(capsys, "concat", "--channel", "bac", "-n", "1",
                     "--k1", "2:3", "--k2", "2:3", "--out", out_path)
    assert rc == 0
    assert open(out_path).read().startswith("R1,R2")
    meta = json.load(open(out_path + ".manifest.json"))
    assert meta["result"]["points"]     # per-point (k1, k2, A, B1, B2)


def test_indep_and_converse(capsys):
    rc, out, _ = run(capsys, "indep", "--channel", "bac",
                     "--k1", "2", "--k2", "2", "--l1", "2", "--l2", "2")
    assert rc == 0 and "holds" in out
    rc, out, _ = run(capsys, "converse", "--channel", "bac", "--eps", "0")
    assert rc == 0 and "R1+R2 <= 1.5" in out


def test_dump_lp(capsys, tmp_path):
    out_path = str(tmp_path / "lp.txt")
    rc, out, _ = run(capsys, "dump-lp", "--channel", "bac",
                     "--k1", "2", "--k2", "2", "--level", "element",
                     "--out", out_path)
    assert rc == 0
    text = open(out_path).read()
    assert "Maximize" in text and "Subject To" in text


def test_unknown_channel_usage_error(capsys):
    rc, _, err = run(capsys, "success", "--channel", "nope",
                     "--k1", "2", "--k2", "2")
    assert rc == 2


def test_unknown_subcommand(capsys):
    rc, _, _ = run(capsys, "frobnicate")
    assert rc == 2


def test_noisy_bac_flags(capsys):
    rc, out, _ = run(capsys, "success", "--channel", "noisy-bac",
                     "--eps1", "1/1000", "--k1", "2", "--k2", "2")
    assert rc == 0
