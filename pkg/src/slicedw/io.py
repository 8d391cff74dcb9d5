"""CSV readers and writers for point clouds and training logs.

Cloud format: RFC-4180-style comma separation, '.' decimal separator, one
row per sample with d numeric columns, optionally preceded by a single
header row.  Writers emit 17 significant digits so float64 values
round-trip exactly.
"""

import csv

import numpy as np

from .validation import as_cloud

__all__ = [
    "format_float",
    "save_cloud",
    "load_cloud",
    "write_loss_log",
    "write_eval_log",
    "write_wall_ms_log",
]


def format_float(value):
    """Render a float with 17 significant digits (exact float64 round trip)."""
    return format(float(value), ".17g")


def _is_numeric_row(row):
    try:
        for item in row:
            float(item)
    except ValueError:
        return False
    return len(row) > 0


def save_cloud(path, points, header=None):
    """Write a point cloud; ``header`` is an optional list of column names."""
    points = as_cloud(points, "points")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            if len(header) != points.shape[1]:
                raise ValueError(
                    f"header has {len(header)} names for {points.shape[1]} columns"
                )
            writer.writerow(header)
        for row in points:
            writer.writerow([format_float(v) for v in row])


def load_cloud(path):
    """Read a point cloud, skipping a single non-numeric header row if present."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path} holds no data rows")
    if not _is_numeric_row(rows[0]):
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path} holds a header but no data rows")
    width = len(rows[0])
    data = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path} row {i + 1} has {len(row)} fields, expected {width}")
        try:
            data[i] = [float(v) for v in row]
        except ValueError as exc:
            raise ValueError(f"{path} row {i + 1} has a non-numeric field") from exc
    return as_cloud(data, "cloud")


def write_loss_log(path, reports):
    """Per-step objective terms; deterministic given the same run."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "recon", "sw", "total"])
        for r in reports:
            writer.writerow([r.step, format_float(r.recon), format_float(r.sw), format_float(r.total)])


def write_wall_ms_log(path, reports):
    """Per-step wall time, kept apart from the loss log so that log stays bit-reproducible."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "wall_ms"])
        for r in reports:
            writer.writerow([r.step, format_float(r.wall_ms)])


def write_eval_log(path, evals):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "sw_latent", "recon_cost", "grid_occupancy"])
        for e in evals:
            writer.writerow(
                [
                    e.step,
                    format_float(e.sw_latent),
                    format_float(e.recon_cost),
                    format_float(e.grid_occupancy),
                ]
            )
