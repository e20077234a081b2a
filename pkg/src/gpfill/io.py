"""Reading and writing the delimited outputs.

All files are UTF-8 with LF line endings.  Floats are written with
repr(), the shortest decimal string that round-trips to the same
double, so write-then-read is exact.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import NonMonotonicTime, ParseError
from .evaluate import EvalReport
from .series import Observations, TimeGrid, TimeSeries

__all__ = ["fmt", "write_series_csv", "write_observations_csv",
           "write_reconstruction_csv", "write_summary_csv", "write_report",
           "write_manifest", "read_series_csv", "REGULAR_REL_TOL"]

REGULAR_REL_TOL = 1e-9


def fmt(x) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def _write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_series_csv(path, times, values):
    lines = ["t,y"]
    for t, y in zip(times, values):
        lines.append(f"{fmt(t)},{fmt(y)}")
    _write_text(path, "\n".join(lines) + "\n")


def write_observations_csv(path, obs: Observations):
    write_series_csv(path, obs.times, obs.values)


def write_reconstruction_csv(path, times, mean, var, draws):
    """Posterior summary table; draws is a (2, n) array."""
    draws = np.asarray(draws, dtype=float)
    lines = ["t,mean,var,draw1,draw2"]
    for i, t in enumerate(times):
        lines.append(f"{fmt(t)},{fmt(mean[i])},{fmt(var[i])},"
                     f"{fmt(draws[0, i])},{fmt(draws[1, i])}")
    _write_text(path, "\n".join(lines) + "\n")


def write_summary_csv(path, rows):
    """rows: iterables of (process, sparsity, mape_ar, n_points, n_skipped)."""
    lines = ["process,sparsity,mape_ar,n_points,n_skipped"]
    for process, sparsity, score, n_points, n_skipped in rows:
        lines.append(f"{process},{fmt(sparsity)},{fmt(score)},{n_points},{n_skipped}")
    _write_text(path, "\n".join(lines) + "\n")


def write_report(path, report: EvalReport):
    """Structured plain-text dump of an evaluation report."""
    lines = [f"mape_ar = {fmt(report.mape_ar)}",
             f"horizon = {report.horizon}",
             f"n_points = {len(report.per_point)}",
             f"n_skipped = {len(report.skipped)}",
             f"n_fallback = {report.n_fallback}"]
    for key in sorted(report.config):
        lines.append(f"config.{key} = {_config_value(report.config[key])}")
    lines.append("")
    lines.append("k,t,actual,predicted,ape,fallback,eps_guarded")
    for p in report.per_point:
        lines.append(f"{p.k},{fmt(p.time)},{fmt(p.actual)},{fmt(p.predicted)},"
                     f"{fmt(p.ape)},{int(p.fallback_used)},{int(p.eps_guarded)}")
    if report.skipped:
        lines.append("")
        lines.append("skipped k,reason")
        for s in report.skipped:
            lines.append(f"{s.k},{s.reason}")
    _write_text(path, "\n".join(lines) + "\n")


def _config_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def write_manifest(path, manifest: dict):
    _write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_series_csv(path):
    """Parse a t,y file back into a TimeSeries or Observations.

    A regular grid is detected when spacings are uniform to within
    1e-9 relative; otherwise the points come back as Observations with
    indices numbering the rows.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()
    if not raw_lines or raw_lines[0].strip() != "t,y":
        raise ParseError("expected header 't,y'", line=1)
    times, values = [], []
    for lineno, line in enumerate(raw_lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected two comma-separated fields, got {line!r}",
                             line=lineno)
        try:
            t = float(parts[0])
            y = float(parts[1])
        except ValueError:
            raise ParseError(f"could not parse numbers from {line!r}", line=lineno) from None
        if not (np.isfinite(t) and np.isfinite(y)):
            raise ParseError(f"non-finite value in {line!r}", line=lineno)
        times.append(t)
        values.append(y)
    if not times:
        raise ParseError("no data rows", line=max(2, len(raw_lines)))
    t = np.array(times)
    y = np.array(values)
    if np.any(np.diff(t) <= 0.0):
        bad = int(np.argmax(np.diff(t) <= 0.0))
        raise NonMonotonicTime(
            f"times must be strictly increasing; row {bad + 3} does not advance")
    if t.size >= 2:
        dt = (t[-1] - t[0]) / (t.size - 1)
        spacings = np.diff(t)
        if dt > 0 and np.max(np.abs(spacings - dt)) <= REGULAR_REL_TOL * abs(dt):
            return TimeSeries(TimeGrid(t0=float(t[0]), dt=float(dt), n=t.size), y)
    return Observations(indices=np.arange(t.size), times=t, values=y)
