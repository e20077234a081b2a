import numpy as np
import pytest

from gpfill import (NonMonotonicTime, Observations, ParseError, TimeGrid,
                    TimeSeries)
from gpfill.evaluate import EvalReport, PointScore, SkippedPoint
from gpfill.io import (fmt, read_series_csv, write_observations_csv,
                       write_reconstruction_csv, write_report, write_series_csv,
                       write_summary_csv)


def test_fmt_round_trips_doubles():
    rng = np.random.default_rng(30)
    for x in [0.1, 1e-300, 1e300, 7.0, np.pi, -0.0, 1 / 3] + list(rng.normal(size=20)):
        assert float(fmt(x)) == float(x)


def test_series_round_trip_regular(tmp_path):
    grid = TimeGrid(t0=0.0, dt=0.02, n=40)
    rng = np.random.default_rng(31)
    series = TimeSeries(grid, rng.normal(size=40))
    path = tmp_path / "series.csv"
    write_series_csv(path, grid.times(), series.values)
    back = read_series_csv(path)
    assert isinstance(back, TimeSeries)
    assert np.array_equal(back.values, series.values)
    assert back.grid.n == 40
    assert back.grid.dt == pytest.approx(0.02, rel=1e-12)


def test_observations_round_trip_irregular(tmp_path):
    times = np.array([0.0, 0.1, 0.35, 1.2, 5.0])
    values = np.array([1.0, -2.0, 0.5, 3.25, -0.125])
    obs = Observations(indices=np.arange(5), times=times, values=values)
    path = tmp_path / "obs.csv"
    write_observations_csv(path, obs)
    back = read_series_csv(path)
    assert isinstance(back, Observations)
    assert np.array_equal(back.times, times)
    assert np.array_equal(back.values, values)


def test_two_point_file_parses_as_regular(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("t,y\n0,1\n0.02,2\n", encoding="utf-8")
    back = read_series_csv(path)
    assert isinstance(back, TimeSeries)
    assert back.grid.dt == pytest.approx(0.02)
    assert np.array_equal(back.values, [1.0, 2.0])


def test_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,value\n0,1\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        read_series_csv(path)
    assert err.value.line == 1


def test_unparseable_row_reports_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,y\n0,1\nx,2\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        read_series_csv(path)
    assert err.value.line == 3


def test_wrong_field_count(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,y\n0,1,2\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_series_csv(path)


def test_out_of_order_times(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,y\n0,1\n2,1\n1,1\n", encoding="utf-8")
    with pytest.raises(NonMonotonicTime):
        read_series_csv(path)


def test_line_endings_are_lf(tmp_path):
    path = tmp_path / "series.csv"
    write_series_csv(path, [0.0, 1.0], [1.5, 2.5])
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.decode("utf-8").startswith("t,y\n")


def test_reconstruction_csv_layout(tmp_path):
    path = tmp_path / "recon.csv"
    times = np.array([0.0, 0.5])
    mean = np.array([1.0, 2.0])
    var = np.array([0.25, 0.5])
    draws = np.array([[1.1, 2.1], [0.9, 1.9]])
    write_reconstruction_csv(path, times, mean, var, draws)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,mean,var,draw1,draw2"
    fields = lines[1].split(",")
    assert [float(v) for v in fields] == [0.0, 1.0, 0.25, 1.1, 0.9]


def test_summary_csv_layout(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary_csv(path, [("ou", 0.03, 0.0049, 10, 0)])
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "process,sparsity,mape_ar,n_points,n_skipped"
    assert lines[1] == "ou,0.03,0.0049,10,0"


def sample_report():
    points = (PointScore(k=2, index=10, time=0.2, actual=1.0, predicted=0.9,
                         ape=0.1, fallback_used=False, eps_guarded=False),
              PointScore(k=3, index=20, time=0.4, actual=2.0, predicted=2.2,
                         ape=0.1, fallback_used=True, eps_guarded=False))
    skipped = (SkippedPoint(k=4, reason="index 1 is under the horizon 5"),)
    return EvalReport(horizon=1, per_point=points, skipped=skipped,
                      mape_ar=0.1, n_fallback=1,
                      config={"secondary": "ar:2", "horizon": 1})


def test_report_file_contents(tmp_path):
    path = tmp_path / "report.txt"
    write_report(path, sample_report())
    text = path.read_text(encoding="utf-8")
    assert "mape_ar = 0.1" in text
    assert "n_points = 2" in text
    assert "n_skipped = 1" in text
    assert "config.secondary = ar:2" in text
    assert "k,t,actual,predicted,ape,fallback,eps_guarded" in text
    assert "2,0.2,1.0,0.9,0.1,0,0" in text
    assert "3,0.4,2.0,2.2,0.1,1,0" in text
    assert "index 1 is under the horizon 5" in text


def test_written_floats_read_back_exactly(tmp_path):
    rng = np.random.default_rng(32)
    times = np.cumsum(rng.uniform(0.01, 1.0, 30))
    values = rng.normal(size=30) * 10.0 ** rng.integers(-8, 8, 30)
    obs = Observations(indices=np.arange(30), times=times, values=values)
    path = tmp_path / "obs.csv"
    write_observations_csv(path, obs)
    back = read_series_csv(path)
    assert np.array_equal(back.times, times)
    assert np.array_equal(back.values, values)
