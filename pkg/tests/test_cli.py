import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

import wafomnet.cli as cli
from wafomnet import build_sobol, load_direction_numbers, load_scramble, points_real, save_net, scramble, wafom
from wafomnet.cli import main

from conftest import random_net


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def id_net(tmp_path):
    path = tmp_path / "id1.net"
    path.write_text("1 3 3\n100\n010\n001\n")
    return str(path)


def test_points_identity_net(id_net):
    code, text = run(["points", "--net", id_net, "--m", "3"])
    assert code == 0
    values = [float(v) for v in text.split()]
    assert len(text.splitlines()) == 8
    assert sorted(values) == [(h + 0.5) / 8 for h in range(8)]


def test_points_reparse_bit_exact(tmp_path):
    net = random_net(np.random.default_rng(0), 3, 6, 32)
    path = tmp_path / "r.net"
    save_net(net, path)
    code, text = run(["points", "--net", str(path), "--m", "6"])
    assert code == 0
    parsed = np.array([[float(v) for v in line.split()] for line in text.splitlines()])
    assert np.array_equal(parsed, points_real(net))


def test_points_count_and_out_file(tmp_path):
    out = tmp_path / "p.txt"
    code, text = run(["points", "--sobol-dirs", "builtin", "--s", "2", "--m", "4",
                      "--count", "5", "--out", str(out)])
    assert code == 0 and text == ""
    assert len(out.read_text().splitlines()) == 5


@pytest.mark.parametrize("argv", [
    ["points", "--net", "x.net"],
    ["points", "--m", "3"],
    ["points", "--net", "x.net", "--sobol-dirs", "builtin", "--m", "3"],
    ["points", "--sobol-dirs", "builtin", "--m", "3"],
    ["points", "--sobol-dirs", "builtin", "--s", "2", "--m", "40"],
    ["quality", "--sobol-dirs", "builtin", "--s", "2", "--m", "3", "--q", "3"],
    ["search", "--sobol-dirs", "builtin", "--s", "2", "--m", "3", "--M", "0"],
    ["search", "--sobol-dirs", "builtin", "--s", "2", "--m", "3", "--threads", "0"],
    ["genz", "--nets", "nolabel"],
    ["genz", "--nets", "a=sobol", "--m-range", "5:2"],
    ["genz", "--nets", "a=magic"],
    ["genz", "--nets", "a=sobol", "--families", "0,7"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run(argv)
    assert code == 2
    assert capsys.readouterr().err


def test_bad_net_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.net"
    bad.write_text("1 2 2\n10\n0x\n")
    code, _ = run(["quality", "--net", str(bad), "--m", "2"])
    assert code == 2
    assert ":3:" in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path):
    assert run(["points", "--net", str(tmp_path / "none.net"), "--m", "1"])[0] == 2


def test_quality_identity_and_sobol(id_net):
    code, text = run(["quality", "--net", id_net, "--m", "3"])
    assert code == 0
    rep = json.loads(text)
    assert set(rep) == {"t", "wafom", "q", "s", "m", "n"}
    assert rep["t"] == 0 and rep["s"] == 1 and rep["n"] == 3
    _, text = run(["quality", "--sobol-dirs", "builtin", "--s", "5", "--m", "6"])
    assert json.loads(text)["t"] == 3


def test_quality_verify_dual(tmp_path, capsys):
    net = random_net(np.random.default_rng(1), 2, 5, 8)
    path = tmp_path / "small.net"
    save_net(net, path)
    code, text = run(["quality", "--net", str(path), "--m", "5", "--verify-dual", "--q", "4"])
    assert code == 0 and json.loads(text)["wafom"] == pytest.approx(wafom(net, 4), rel=1e-12)
    code, _ = run(["quality", "--sobol-dirs", "builtin", "--s", "2", "--m", "3", "--verify-dual"])
    assert code == 2


def test_quality_verify_dual_reports_disagreement(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(cli, "wafom_dual_oracle", lambda net, q: 1.0)
    path = tmp_path / "small.net"
    save_net(random_net(np.random.default_rng(2), 2, 3, 4), path)
    code, _ = run(["quality", "--net", str(path), "--m", "3", "--verify-dual"])
    assert code == 1
    assert "disagree" in capsys.readouterr().err


def test_search_outputs(tmp_path):
    scr, trace = tmp_path / "best.scr", tmp_path / "trace.jsonl"
    argv = ["search", "--sobol-dirs", "builtin", "--s", "3", "--m", "6", "--M", "20",
            "--seed", "4", "--out-scramble", str(scr), "--out-trace", str(trace)]
    code, text = run(argv)
    assert code == 0
    summary = json.loads(text)
    assert summary["best_wafom"] <= summary["unscrambled_wafom"]
    assert summary["M"] == 20 and summary["seed"] == 4 and summary["include_identity"]
    assert load_scramble(scr).s == 3
    records = [json.loads(line) for line in trace.read_text().splitlines()]
    assert len(records) == summary["improvements"]
    assert records[-1]["index"] == summary["candidate_index"]


def test_search_identity_when_candidate_worse(tmp_path):
    # a searched net is already good; its first random candidate is worse
    code, _ = run(["search", "--sobol-dirs", "builtin", "--s", "3", "--m", "6", "--M", "50",
                   "--out-scramble", str(tmp_path / "s.scr")])
    assert code == 0
    base = build_sobol(load_direction_numbers(), 3, 6, 32)
    good = scramble(base, load_scramble(tmp_path / "s.scr"))
    path = tmp_path / "good.net"
    save_net(good, path)
    for seed in range(20):
        code, text = run(["search", "--net", str(path), "--m", "6", "--M", "1", "--seed", str(seed),
                          "--include-identity"])
        summary = json.loads(text)
        _, text2 = run(["search", "--net", str(path), "--m", "6", "--M", "1", "--seed", str(seed),
                        "--no-include-identity"])
        if json.loads(text2)["best_wafom"] > summary["unscrambled_wafom"]:
            assert summary["candidate_index"] == 0
            assert summary["best_wafom"] == summary["unscrambled_wafom"]
            return
    pytest.fail("no worse candidate found")


def test_search_repeatable_and_thread_independent():
    base = ["search", "--sobol-dirs", "builtin", "--s", "4", "--m", "7", "--M", "30", "--seed", "2"]
    a = run(base + ["--threads", "1"])
    b = run(base + ["--threads", "1"])
    c = run(base + ["--threads", "3"])
    assert a == b == c


def test_genz_rows_and_repeat(tmp_path):
    out = tmp_path / "g.csv"
    argv = ["genz", "--nets", "sob=sobol", "scr=scrambled:5", "--families", "1,5",
            "--s", "3", "--m-range", "2:4", "--samples", "4", "--seed", "3", "--out", str(out)]
    assert run(argv)[0] == 0
    first = out.read_bytes()
    rows = list(csv.reader(io.StringIO(first.decode())))
    assert rows[0] == ["net", "family", "s", "m", "N", "median_log10_rel_err", "samples", "seed"]
    assert len(rows) - 1 == 2 * 2 * 3
    assert run(argv + ["--threads", "2"])[0] == 0
    assert out.read_bytes() == first


def test_genz_file_and_naive_specs(tmp_path):
    net = random_net(np.random.default_rng(3), 2, 6, 16)
    path = tmp_path / "f.net"
    save_net(net, path)
    code, text = run(["genz", "--nets", f"f=file:{path}", "nv=naive:3", "--families", "2",
                      "--s", "2", "--n", "16", "--m-range", "3:5", "--samples", "3"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))[1:]
    assert [(r[0], r[3]) for r in rows] == [("f", "3"), ("f", "4"), ("f", "5"),
                                            ("nv", "3"), ("nv", "4"), ("nv", "5")]


def test_console_script_entry_point(id_net):
    proc = subprocess.run([sys.executable, "-m", "wafomnet.cli", "quality", "--net", id_net, "--m", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["t"] == 0
    proc = subprocess.run([sys.executable, "-m", "wafomnet.cli", "points", "--net", id_net],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "--m" in proc.stderr
