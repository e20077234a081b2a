"""Command-line experiment driver.

One command: simulate the configured processes, thin each path to the
requested sparsity, reconstruct by GP regression, score with the rolling
forecast evaluation, and write CSVs, per-cell reports, figures, and a
manifest into the output directory.  All randomness derives from one
master seed, so the same invocation reproduces the same bytes.
"""

from __future__ import annotations

import argparse
import io as _io
import platform
import sys
from dataclasses import dataclass, replace

import matplotlib
import numpy as np
import scipy

from . import __version__
from .config import (ExperimentConfig, build_config, cell_seed, default_config,
                     derive_stage_seeds, load_config, parse_config_text,
                     parse_secondary)
from .errors import GpfillError, ParseError, ValidationError
from .evaluate import EvalReport, mape_ar
from .figures import render_reconstruction, render_summary
from .gpr import fit, predict_mean, predict_var, sample_posterior
from .io import (fmt, write_manifest, write_observations_csv,
                 write_reconstruction_csv, write_report, write_series_csv,
                 write_summary_csv)
from .series import Observations, TimeSeries
from .simulate import sample_gp_prior, sparsify

__all__ = ["CellResult", "ExperimentResult", "run_cells", "run_experiment", "main"]


@dataclass(frozen=True)
class CellResult:
    """One (process, sparsity fraction) cell of the benchmark grid."""

    process: str
    fraction: float
    truth: TimeSeries
    obs: Observations
    mean: np.ndarray
    var: np.ndarray
    draws: np.ndarray
    report: EvalReport
    truth_seed: int
    sparsify_seed: int
    sampling_seed: int

    @property
    def label(self) -> str:
        pct = format(self.fraction * 100.0, "g").replace(".", "_")
        return f"{self.process}_{pct}pct"


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    cells: tuple


def run_cells(config: ExperimentConfig) -> ExperimentResult:
    """Compute every cell in memory; no files are touched.

    The simulated truth is drawn once per process and shared across its
    sparsity fractions, so scores within a row differ only in which
    points were kept.
    """
    config.validate()
    grid_times = config.grid.times()
    cells = []
    for proc_idx, (name, params) in enumerate(config.processes):
        truth_seed = cell_seed(config.seed_simulation, proc_idx)
        truth = sample_gp_prior(params, config.grid, config.noise_sd, truth_seed)[0]
        for frac_idx, frac in enumerate(config.sparsity):
            sparsify_seed = cell_seed(config.seed_sparsify, proc_idx, frac_idx)
            obs = sparsify(truth, frac, config.min_gap, sparsify_seed)
            model = fit(obs, params, config.gp_noise2)
            mean = predict_mean(model, grid_times)
            var = predict_var(model, grid_times)
            sampling_seed = cell_seed(config.seed_sampling, proc_idx, frac_idx)
            draws = sample_posterior(model, grid_times, config.draws, sampling_seed)
            recon = TimeSeries(config.grid, mean)
            report = mape_ar(recon, obs, config.horizon, config.secondary,
                             config.epsilon, config.signed_mape)
            report = replace(report, config={
                **report.config, "process": name, "sparsity": frac,
                "min_gap": config.min_gap, "noise_sd": config.noise_sd,
                "gp_noise2": config.gp_noise2, "seed_master": config.master_seed,
                "seed_truth": truth_seed, "seed_sparsify": sparsify_seed,
                "seed_sampling": sampling_seed})
            cells.append(CellResult(process=name, fraction=frac, truth=truth,
                                    obs=obs, mean=mean, var=var, draws=draws,
                                    report=report, truth_seed=truth_seed,
                                    sparsify_seed=sparsify_seed,
                                    sampling_seed=sampling_seed))
    return ExperimentResult(config=config, cells=tuple(cells))


def _render_png_bytes(render, *args) -> bytes:
    buf = _io.BytesIO()
    render(buf, *args)
    return buf.getvalue()


def _manifest_for(result: ExperimentResult, file_names) -> dict:
    config = result.config
    cells = {}
    for cell in result.cells:
        cells[cell.label] = {
            "seeds": {"truth": cell.truth_seed, "sparsify": cell.sparsify_seed,
                      "sampling": cell.sampling_seed},
            "n_observed": len(cell.obs),
            "mape_ar": cell.report.mape_ar,
            "n_points": len(cell.report.per_point),
            "n_skipped": len(cell.report.skipped),
            "n_fallback": cell.report.n_fallback,
        }
    return {
        "artifact": "gpfill",
        "version": __version__,
        "versions": {"python": platform.python_version(),
                     "numpy": np.__version__,
                     "scipy": scipy.__version__,
                     "matplotlib": matplotlib.__version__},
        "rng": "numpy default_rng (PCG64); stage and cell seeds via SeedSequence",
        "config": config.summary_dict(),
        "cells": cells,
        "files": sorted(file_names),
    }


def run_experiment(config: ExperimentConfig, quiet: bool = False):
    """Run every cell, then write the output tree; returns (paths, exit code).

    All results and figure bytes are assembled in memory before the
    first file is created, so a failing cell leaves no output behind.
    """
    from pathlib import Path

    result = run_cells(config)

    payloads = {}
    summary_rows = []
    scores = {}
    for cell in result.cells:
        d = cell.label
        t = cell.truth.grid.times()
        payloads[f"{d}/truth.csv"] = ("series", (t, cell.truth.values))
        payloads[f"{d}/observations.csv"] = ("obs", cell.obs)
        payloads[f"{d}/reconstruction.csv"] = ("recon", (t, cell.mean, cell.var, cell.draws))
        payloads[f"{d}/report.txt"] = ("report", cell.report)
        title = f"{cell.process}, {cell.fraction * 100:g}% kept, mape_ar = {cell.report.mape_ar:.4g}"
        payloads[f"{d}/reconstruction.png"] = ("bytes", _render_png_bytes(
            render_reconstruction, cell.truth, cell.obs, cell.mean, cell.var,
            cell.draws, title))
        summary_rows.append((cell.process, cell.fraction, cell.report.mape_ar,
                             len(cell.report.per_point), len(cell.report.skipped)))
        scores[(cell.process, cell.fraction)] = cell.report.mape_ar
    payloads["summary.csv"] = ("summary", summary_rows)
    process_names = [name for name, _ in config.processes]
    payloads["summary.png"] = ("bytes", _render_png_bytes(
        render_summary, process_names, list(config.sparsity), scores))
    payloads["manifest.json"] = ("manifest",
                                 _manifest_for(result, list(payloads) + ["manifest.json"]))

    out = Path(config.out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for rel in sorted(payloads):
            kind, data = payloads[rel]
            path = out / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            if kind == "series":
                write_series_csv(path, *data)
            elif kind == "obs":
                write_observations_csv(path, data)
            elif kind == "recon":
                write_reconstruction_csv(path, *data)
            elif kind == "report":
                write_report(path, data)
            elif kind == "summary":
                write_summary_csv(path, data)
            elif kind == "manifest":
                write_manifest(path, data)
            else:
                with open(path, "wb") as fh:
                    fh.write(data)
            written.append(path)
    except OSError:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise

    if not quiet:
        _print_summary(result)
        print(f"wrote {len(written)} files under {out}")
    return written, 0


def _print_summary(result: ExperimentResult):
    fracs = list(result.config.sparsity)
    scores = {(c.process, c.fraction): c.report.mape_ar for c in result.cells}
    procs = [name for name, _ in result.config.processes]
    head = "process".ljust(12) + "".join(f"{f * 100:g}%".rjust(12) for f in fracs)
    print(head)
    for proc in procs:
        row = proc.ljust(12)
        for f in fracs:
            row += f"{scores[(proc, f)]:.6g}".rjust(12)
        print(row)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpfill",
        description="Reconstruct sparse series by GP regression and score the "
                    "result with rolling autoregressive forecasts.")
    parser.add_argument("--config", metavar="PATH",
                        help="key = value config file (defaults cover the full benchmark)")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--seed", metavar="N", type=int,
                        help="master seed; derives the simulation/sparsify/sampling seeds")
    parser.add_argument("--horizon", metavar="H", type=int,
                        help="forecast horizon in grid steps")
    parser.add_argument("--secondary", metavar="SPEC",
                        help="evaluation model: ar:p or sarima:p,d,q,P,D,Q,s")
    parser.add_argument("--sparsity", metavar="F1,F2,...",
                        help="comma-separated kept fractions, each in (0,1)")
    parser.add_argument("--signed-mape", action="store_true",
                        help="average signed relative errors instead of absolute ones")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary table")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
        if args.seed is not None:
            sim, spa, sam = derive_stage_seeds(args.seed)
            cfg = replace(cfg, master_seed=args.seed, seed_simulation=sim,
                          seed_sparsify=spa, seed_sampling=sam)
    else:
        cfg = default_config(args.seed if args.seed is not None else 1)
    if args.out:
        cfg = replace(cfg, out_dir=args.out)
    if args.horizon is not None:
        cfg = replace(cfg, horizon=args.horizon)
    if args.secondary:
        cfg = replace(cfg, secondary=parse_secondary(args.secondary))
    if args.sparsity:
        try:
            fracs = tuple(float(p) for p in args.sparsity.split(",") if p.strip())
        except ValueError:
            raise ValidationError(f"--sparsity must be comma-separated numbers, "
                                  f"got {args.sparsity!r}") from None
        if not fracs:
            raise ValidationError("--sparsity list is empty")
        cfg = replace(cfg, sparsity=fracs)
    if args.signed_mape:
        cfg = replace(cfg, signed_mape=True)
    return cfg.validate()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except (ParseError, ValidationError) as exc:
        print(f"gpfill: config error: {exc}", file=sys.stderr)
        return 2
    try:
        _, code = run_experiment(cfg, quiet=args.quiet)
        return code
    except OSError as exc:
        print(f"gpfill: cannot write outputs: {exc}", file=sys.stderr)
        return 2
    except GpfillError as exc:
        print(f"gpfill: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
