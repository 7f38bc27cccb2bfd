"""Render sweep results to PNG figures next to the CSV report.

Four fixed charts cover the usual reporting axes: subgraph recall and
subgraph order against expansion depth (one line per root set size), and
mAP against the propagation weight and iteration count. Rows sharing an
x-value within a series are averaged over the remaining grid axes.
Deterministic: fixed filenames, sizes, and sorted series order.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import EmptyInput, IoError
from .evaluation import SweepRow

FIGURE_DPI = 120


def _series(
    rows: Sequence[SweepRow], x_field: str, series_field: str, y_field: str
) -> dict[float, list[tuple[float, float]]]:
    """Group rows into series -> sorted (x, mean y) points."""
    buckets: dict[tuple[float, float], list[float]] = defaultdict(list)
    for row in rows:
        key = (getattr(row, series_field), getattr(row, x_field))
        buckets[key].append(getattr(row, y_field))
    lines: dict[float, list[tuple[float, float]]] = defaultdict(list)
    for (series_value, x_value), ys in sorted(buckets.items()):
        lines[series_value].append((x_value, sum(ys) / len(ys)))
    return lines


def _plot(
    path: Path,
    rows: Sequence[SweepRow],
    x_field: str,
    series_field: str,
    y_field: str,
    x_label: str,
    series_label: str,
    y_label: str,
) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5), dpi=FIGURE_DPI)
    try:
        for series_value, points in _series(rows, x_field, series_field, y_field).items():
            xs = [x for x, _ in points]
            ys = [y for _, y in points]
            ax.plot(xs, ys, marker="o", label=f"{series_label}={series_value:g}")
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        ax.legend(fontsize="small")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        try:
            fig.savefig(path)
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
    finally:
        plt.close(fig)


def render_sweep_figures(rows: Iterable[SweepRow], out_dir: str | Path) -> list[Path]:
    """Write the four sweep charts into out_dir and return the written paths."""
    rows = list(rows)
    if not rows:
        raise EmptyInput("no sweep rows to plot")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc.strerror or exc}") from exc
    charts = (
        ("recall_vs_depth.png", "depth", "root_size", "mean_recall",
         "expansion depth", "roots", "mean subgraph recall"),
        ("order_vs_depth.png", "depth", "root_size", "mean_subgraph_order",
         "expansion depth", "roots", "mean subgraph order"),
        ("map_vs_alpha.png", "alpha", "iters", "map",
         "propagation weight", "iters", "mAP"),
        ("map_vs_iters.png", "iters", "alpha", "map",
         "iterations", "alpha", "mAP"),
    )
    written: list[Path] = []
    for filename, x_field, series_field, y_field, x_label, series_label, y_label in charts:
        path = out_dir / filename
        _plot(path, rows, x_field, series_field, y_field, x_label, series_label, y_label)
        written.append(path)
    return written
