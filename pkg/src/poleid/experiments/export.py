"""CSV/JSON output of a sweep."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, dump_config

TRIALS_HEADER = ["setting", "sample_size", "trial", "seed", "d_hausdorff", "markov_err",
                 "sigma_n_est", "near_singular", "bound_value", "bound_valid"]
CURVES_HEADER = ["sample_size", "median", "q10", "q90", "bound_overlay"]
POLES_HEADER = ["kind", "sample_size", "trial", "real", "imag"]


def fmt(x) -> str:
    """Fixed 17-significant-digit text; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def _write(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def best_sample_size(curves):
    finite = [c for c in curves if not math.isnan(c.median)]
    if not finite:
        return None
    return min(finite, key=lambda c: c.median).sample_size


def export(records, curves, outdir, true_poles=None, config: ExperimentConfig | None = None) -> list[Path]:
    """Write ``trials.csv``, ``curves.csv``, ``poles.csv`` and, with a config,
    ``config.json`` and ``summary.json``. Returns the written paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "trials.csv"
    _write(path, TRIALS_HEADER, (
        (r.setting, r.sample_size, r.trial_index, r.seed, r.d_hausdorff, r.markov_err,
         r.sigma_n_est, r.near_singular, r.bound_value, r.bound_valid)
        for r in records))
    written.append(path)

    path = out / "curves.csv"
    _write(path, CURVES_HEADER, ((c.sample_size, c.median, c.q10, c.q90, c.bound_overlay) for c in curves))
    written.append(path)

    best = best_sample_size(curves)
    pole_rows = []
    if true_poles is not None and best is not None:
        pole_rows += [("true", best, "", z.real, z.imag) for z in np.asarray(true_poles)]
    if best is not None:
        for r in records:
            if r.sample_size == best and not r.failed:
                pole_rows += [("estimate", best, r.trial_index, z.real, z.imag) for z in r.poles]
    path = out / "poles.csv"
    _write(path, POLES_HEADER, pole_rows)
    written.append(path)

    if config is not None:
        path = out / "config.json"
        path.write_text(dump_config(config))
        written.append(path)
        summary = {
            "best_sample_size": best,
            "true_poles": [[z.real, z.imag] for z in np.asarray(true_poles if true_poles is not None else [])],
            "curves": [{"sample_size": c.sample_size, "succeeded": c.n_ok, "failed": c.n_failed,
                        "near_singular": sum(1 for r in records if r.sample_size == c.sample_size and r.near_singular)}
                       for c in curves],
        }
        path = out / "summary.json"
        path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def read_curves(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: float(v) if v else None for k, v in row.items()} for row in csv.DictReader(fh)]
