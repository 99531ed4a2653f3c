"""Render simulation traces into figures and delimited data.

A bubble-sort performatization emits one melodic-contour record per
iteration (the value order after that pass). The report turns a JSON-lines
trace into a two-panel figure (contour lines, swaps per iteration) and a CSV
of the same records for spreadsheet work.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # render to files only; no display server here

import matplotlib.pyplot as plt

from .errors import RejectedError


def load_trace(path: Path | str) -> tuple[list[dict], dict]:
    """Split a trace file into iteration records and the summary line."""
    iterations: list[dict] = []
    summary: dict = {}
    with Path(path).open(encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if "iteration" in rec:
                iterations.append(rec)
            else:
                summary = rec
    if not iterations:
        raise RejectedError("trace contains no iteration records")
    return iterations, summary


def write_contour_csv(iterations: list[dict], path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["iteration", "position", "value", "swaps", "flag-raised-at-end"])
        for rec in iterations:
            swaps = sum(1 for c in rec.get("comparisons", []) if c[2])
            for pos, value in enumerate(rec["order"]):
                w.writerow([rec["iteration"], pos, value, swaps, rec["flag-raised-at-end"]])


def render_contour_figure(iterations: list[dict], summary: dict, path: Path) -> None:
    fig, (ax_contour, ax_swaps) = plt.subplots(
        2, 1, figsize=(8, 7), height_ratios=[3, 1], sharex=False)
    cmap = plt.get_cmap("viridis")
    n = len(iterations)
    for i, rec in enumerate(iterations):
        color = cmap(i / max(n - 1, 1))
        ax_contour.plot(range(len(rec["order"])), rec["order"], marker="o",
                        color=color, label=f"iteration {rec['iteration']}")
    ax_contour.set_xlabel("position in line")
    ax_contour.set_ylabel("value (pitch)")
    verdict = summary.get("verdict", "?")
    ax_contour.set_title(f"Melodic contour per iteration (verdict: {verdict})")
    if n <= 12:
        ax_contour.legend(fontsize="small")
    swap_counts = [sum(1 for c in rec.get("comparisons", []) if c[2]) for rec in iterations]
    ax_swaps.bar([rec["iteration"] for rec in iterations], swap_counts, color="tab:gray")
    ax_swaps.set_xlabel("iteration")
    ax_swaps.set_ylabel("swaps")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def report(trace_path: Path | str, out_dir: Path | str) -> dict:
    """Write contour.png and contour.csv next to each other; return paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    iterations, summary = load_trace(trace_path)
    csv_path = out / "contour.csv"
    fig_path = out / "contour.png"
    write_contour_csv(iterations, csv_path)
    render_contour_figure(iterations, summary, fig_path)
    return {
        "figure": str(fig_path),
        "csv": str(csv_path),
        "iterations": len(iterations),
        "verdict": summary.get("verdict"),
        "final": summary.get("final"),
    }
