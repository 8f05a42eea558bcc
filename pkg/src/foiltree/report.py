"""Benchmark report rendering: text table, csv, json, and figures.

Wall-clock columns are real measurements and differ between runs; every
renderer takes ``include_timing`` so two runs of the same configuration can
be compared byte for byte with timing stripped.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # render to files only, no display required
import matplotlib.pyplot as plt

from .evaluation import BenchmarkReport

_COLUMNS = [
    ("dataset", "Dataset"),
    ("model", "Model"),
    ("n_features", "Feat."),
    ("model_f1", "Model F1"),
    ("fidelity", "Fidelity"),
    ("accuracy", "Accuracy"),
    ("mean_length", "Length"),
    ("mean_time_s", "Time (s)"),
    ("zero_length_count", "Zero-len"),
    ("no_foil_count", "No-foil"),
    ("failure_count", "Failed"),
]

_TIMING_KEYS = {"mean_time_s", "total_time_s"}


def _cell(row_dict: dict, key: str) -> str:
    v = row_dict[key]
    if key == "mean_length":
        return f"{v:.2f} ({row_dict['n_features']})"
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


def format_text_table(report: BenchmarkReport, include_timing: bool = True) -> str:
    """Aligned table, one row per dataset-model pair, plus grid means.

    The length column shows "mean (n_features)" so short explanations can be
    read against the size of the feature space they select from.
    """
    columns = [(k, h) for k, h in _COLUMNS if include_timing or k not in _TIMING_KEYS]
    table = [[h for _, h in columns]]
    for row in report.rows:
        d = row.to_dict()
        table.append([_cell(d, k) for k, _ in columns])
    widths = [max(len(r[i]) for r in table) for i in range(len(columns))]
    lines = []
    for ri, r in enumerate(table):
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if ri == 0:
            lines.append("  ".join("-" * w for w in widths))
    lines.append("")
    lines.append(
        f"Grid means: fidelity {report.grid_fidelity:.3f},"
        f" accuracy {report.grid_accuracy:.3f},"
        f" length {report.grid_mean_length:.2f}"
        + (f", time {report.grid_mean_time_s * 1000:.1f} ms" if include_timing else "")
    )
    lines.append(f"Master seed: {report.master_seed}; repetitions: {report.repetitions}")
    if include_timing:
        lines.append(f"Total wall time: {report.total_time_s:.1f} s")
    if report.failures:
        lines.append(f"Failures: {len(report.failures)} (see json report for details)")
    return "\n".join(lines) + "\n"


def to_csv(report: BenchmarkReport, include_timing: bool = True) -> str:
    keys = [k for k in report.rows[0].to_dict() if include_timing or k not in _TIMING_KEYS]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        d = row.to_dict()
        writer.writerow({k: d[k] for k in keys})
    return buf.getvalue()


def to_json(report: BenchmarkReport, include_timing: bool = True) -> str:
    rows = []
    for row in report.rows:
        d = row.to_dict()
        if not include_timing:
            d = {k: v for k, v in d.items() if k not in _TIMING_KEYS}
        rows.append(d)
    payload = {
        "rows": rows,
        "grid_means": {
            "fidelity": report.grid_fidelity,
            "accuracy": report.grid_accuracy,
            "mean_length": report.grid_mean_length,
        },
        "master_seed": report.master_seed,
        "repetitions": report.repetitions,
        "config": report.config,
        "datasets": report.datasets,
        "failures": report.failures,
    }
    if include_timing:
        payload["grid_means"]["mean_time_s"] = report.grid_mean_time_s
        payload["total_time_s"] = report.total_time_s
    return json.dumps(payload, indent=2, sort_keys=True)


def _grouped_bars(ax, report: BenchmarkReport, key: str, title: str, ylim=None):
    datasets = list(dict.fromkeys(r.dataset for r in report.rows))
    kinds = list(dict.fromkeys(r.model for r in report.rows))
    values = {(r.dataset, r.model): getattr(r, key) for r in report.rows}
    width = 0.8 / max(len(kinds), 1)
    for mi, kind in enumerate(kinds):
        xs = [di + mi * width for di in range(len(datasets))]
        ys = [values.get((d, kind), 0.0) for d in datasets]
        ax.bar(xs, ys, width=width, label=kind)
    ax.set_xticks([di + 0.4 - width / 2 for di in range(len(datasets))])
    ax.set_xticklabels(datasets)
    ax.set_title(title)
    if ylim:
        ax.set_ylim(*ylim)
    ax.legend(fontsize=7)


def render_figures(report: BenchmarkReport, outdir: str | Path) -> list[Path]:
    """Bar charts per metric, written as png files; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), constrained_layout=True)
    _grouped_bars(axes[0], report, "fidelity", "Fidelity (F1 vs model output)", ylim=(0, 1.05))
    _grouped_bars(axes[1], report, "accuracy", "Accuracy (F1 vs true label)", ylim=(0, 1.05))
    path = outdir / "scores.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), constrained_layout=True)
    _grouped_bars(axes[0], report, "mean_length", "Mean explanation length")
    _grouped_bars(axes[1], report, "mean_time_s", "Mean time per explanation (s)")
    path = outdir / "length_time.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written


def write_report(report: BenchmarkReport, outdir: str | Path, figures: bool = True) -> dict[str, Path]:
    """Write report.txt / report.csv / report.json (and figures) under
    ``outdir``; returns a name-to-path map of everything written."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "text": outdir / "report.txt",
        "csv": outdir / "report.csv",
        "json": outdir / "report.json",
    }
    paths["text"].write_text(format_text_table(report))
    paths["csv"].write_text(to_csv(report))
    paths["json"].write_text(to_json(report))
    if figures:
        for p in render_figures(report, outdir / "figures"):
            paths[p.stem] = p
    return paths
