import json

import numpy as np
import pytest

from gpfill import TimeSeries
from gpfill.cli import main, run_cells, run_experiment
from gpfill.config import default_config
from gpfill.io import fmt, read_series_csv

SMALL = ("process = ou\n"
         "n = 120\n"
         "sparsity = 0.08, 0.15\n"
         "min_gap = 3\n"
         "seed = 11\n")


def write_small_config(tmp_path, extra=""):
    path = tmp_path / "small.cfg"
    path.write_text(SMALL + extra, encoding="utf-8")
    return path


def tree_bytes(root):
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            out[str(path.relative_to(root))] = path.read_bytes()
    return out


def test_run_cells_shares_truth_within_a_process():
    cfg = default_config(3, sparsity=(0.03, 0.05))
    res = run_cells(cfg)
    assert len(res.cells) == 4
    by_proc = {}
    for cell in res.cells:
        by_proc.setdefault(cell.process, []).append(cell)
    for cells in by_proc.values():
        assert np.array_equal(cells[0].truth.values, cells[1].truth.values)
    # but the two processes differ
    assert not np.array_equal(by_proc["ou"][0].truth.values,
                              by_proc["fractional"][0].truth.values)


def test_run_cells_observation_counts():
    cfg = default_config(4)
    res = run_cells(cfg)
    counts = {c.label: len(c.obs) for c in res.cells}
    assert counts["ou_3pct"] == 11
    assert counts["ou_5pct"] == 18
    assert counts["ou_7pct"] == 25


def test_cli_writes_expected_tree(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["--config", str(write_small_config(tmp_path)), "--out", str(out)])
    assert code == 0
    for cell in ("ou_8pct", "ou_15pct"):
        for name in ("truth.csv", "observations.csv", "reconstruction.csv",
                     "report.txt", "reconstruction.png"):
            assert (out / cell / name).is_file()
    assert (out / "summary.csv").is_file()
    assert (out / "summary.png").is_file()
    assert (out / "manifest.json").is_file()
    stdout = capsys.readouterr().out
    assert "process" in stdout and "ou" in stdout


def test_cli_quiet_suppresses_summary(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["--config", str(write_small_config(tmp_path)),
                 "--out", str(out), "--quiet"])
    assert code == 0
    assert capsys.readouterr().out == ""


def test_summary_matches_reports_exactly(tmp_path):
    out = tmp_path / "out"
    cfg_path = write_small_config(tmp_path)
    assert main(["--config", str(cfg_path), "--out", str(out), "--quiet"]) == 0
    summary = (out / "summary.csv").read_text(encoding="utf-8").splitlines()[1:]
    for line in summary:
        process, sparsity, score, n_points, n_skipped = line.split(",")
        pct = format(float(sparsity) * 100, "g").replace(".", "_")
        report = (out / f"{process}_{pct}pct" / "report.txt").read_text(encoding="utf-8")
        assert report.splitlines()[0] == f"mape_ar = {score}"


def test_truth_csv_reads_back_as_the_simulated_series(tmp_path):
    out = tmp_path / "out"
    cfg_path = write_small_config(tmp_path)
    assert main(["--config", str(cfg_path), "--out", str(out), "--quiet"]) == 0
    back = read_series_csv(out / "ou_8pct" / "truth.csv")
    assert isinstance(back, TimeSeries)
    assert back.grid.n == 120


def test_manifest_contents(tmp_path):
    out = tmp_path / "out"
    cfg_path = write_small_config(tmp_path)
    assert main(["--config", str(cfg_path), "--out", str(out), "--quiet"]) == 0
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["config"]["seeds"]["master"] == 11
    assert "numpy" in manifest["versions"]
    assert "ou_8pct" in manifest["cells"]
    assert str(out) not in json.dumps(manifest)
    assert sorted(manifest["files"]) == manifest["files"]


def test_same_seed_produces_byte_identical_trees(tmp_path):
    cfg_path = write_small_config(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["--config", str(cfg_path), "--out", str(out_a), "--quiet"]) == 0
    assert main(["--config", str(cfg_path), "--out", str(out_b), "--quiet"]) == 0
    ta, tb = tree_bytes(out_a), tree_bytes(out_b)
    assert list(ta) == list(tb)
    for name in ta:
        assert ta[name] == tb[name], name


def test_different_seed_changes_observations(tmp_path):
    cfg_path = write_small_config(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["--config", str(cfg_path), "--out", str(out_a), "--quiet"]) == 0
    assert main(["--config", str(cfg_path), "--out", str(out_b),
                 "--seed", "12", "--quiet"]) == 0
    obs_a = (out_a / "ou_8pct" / "observations.csv").read_bytes()
    obs_b = (out_b / "ou_8pct" / "observations.csv").read_bytes()
    assert obs_a != obs_b


def test_flag_overrides_reach_the_run(tmp_path):
    out = tmp_path / "out"
    cfg_path = write_small_config(tmp_path)
    code = main(["--config", str(cfg_path), "--out", str(out),
                 "--sparsity", "0.2", "--horizon", "2",
                 "--secondary", "ar:1", "--quiet"])
    assert code == 0
    assert (out / "ou_20pct").is_dir()
    report = (out / "ou_20pct" / "report.txt").read_text(encoding="utf-8")
    assert "horizon = 2" in report
    assert "config.secondary = ar:1" in report


def test_unwritable_output_dir_exits_2_without_partial_files(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory", encoding="utf-8")
    out = blocker / "sub"
    cfg_path = write_small_config(tmp_path)
    code = main(["--config", str(cfg_path), "--out", str(out), "--quiet"])
    assert code == 2
    assert not out.exists()
    assert "cannot write" in capsys.readouterr().err


def test_bad_config_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("not_a_key = 1\n", encoding="utf-8")
    assert main(["--config", str(path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_bad_secondary_flag_exits_2(tmp_path, capsys):
    cfg_path = write_small_config(tmp_path)
    assert main(["--config", str(cfg_path), "--secondary", "arma:9"]) == 2
    capsys.readouterr()


def test_missing_config_file_exits_2(tmp_path):
    assert main(["--config", str(tmp_path / "absent.cfg")]) == 2


def test_infeasible_sparsity_exits_1(tmp_path, capsys):
    path = tmp_path / "cfg"
    path.write_text("n = 20\nsparsity = 0.5\nmin_gap = 5\n", encoding="utf-8")
    out = tmp_path / "out"
    assert main(["--config", str(path), "--out", str(out), "--quiet"]) == 1
    assert "InfeasibleSparsity" in capsys.readouterr().err
    assert not out.exists()


def test_run_experiment_returns_written_paths(tmp_path):
    cfg = default_config(11, out_dir=str(tmp_path / "out"),
                         processes=(("ou", default_config(1).processes[0][1]),),
                         sparsity=(0.05,))
    paths, code = run_experiment(cfg, quiet=True)
    assert code == 0
    assert len(paths) == 8  # 5 per-cell files + summary.csv/png + manifest
    for p in paths:
        assert p.is_file()
