"""Readers for the simulator's output files (cdf.csv, summary.json)."""

from __future__ import annotations

import json
from pathlib import Path

CDF_HEADER = "x_bits_per_period,cdf"


def read_cdf(path: str | Path) -> tuple[list[float], list[float]]:
    """CDF step points from a cdf.csv file, as (x values, cumulative levels)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"cdf file not found: {path}")
    lines = [line for line in path.read_text().splitlines() if line.strip()]
    if not lines or lines[0] != CDF_HEADER:
        raise ValueError(f"{path}: expected header '{CDF_HEADER}'")
    if len(lines) < 2:
        raise ValueError(f"{path}: no data rows")
    xs, fs = [], []
    for line in lines[1:]:
        x, f = line.split(",")
        xs.append(float(x))
        fs.append(float(f))
    return xs, fs


def read_sweep(directory: str | Path) -> tuple[list[int], list[float]]:
    """Station counts and mean minimum throughputs of a sweep directory.

    A sweep directory holds one ``k*/summary.json`` per station count, as
    written by the simulator CLI; the means are taken from those summaries
    verbatim.
    """
    directory = Path(directory)
    if not directory.exists():
        raise FileNotFoundError(f"sweep directory not found: {directory}")
    summaries = sorted(directory.glob("k*/summary.json"))
    if not summaries:
        raise ValueError(f"{directory}: no k*/summary.json files")
    points = []
    for path in summaries:
        summary = json.loads(path.read_text())
        points.append((int(summary["config"]["k_count"]), float(summary["mean_min_throughput"])))
    points.sort()
    return [k for k, _ in points], [y for _, y in points]
