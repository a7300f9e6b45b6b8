"""Render BER-versus-SNR figures from simulation sweep CSVs.

Input is the sweep CSV schema produced by the icpsk CLI:

    snr_db,receiver,strategy,pair_count,si_count,theory,simulated,ci_halfwidth,errors,trials

This package draws those columns and nothing else: it never recomputes
error rates. One panel per input CSV; solid lines with markers carry the
simulated rates, dashed lines the theory column. Output bytes are
deterministic for identical inputs (fixed figure geometry, fixed metadata).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first

__all__ = ["EXPECTED_COLUMNS", "PlotError", "PlotSpec", "SweepData",
           "read_sweep_csv", "build_figure", "render", "main"]

EXPECTED_COLUMNS = ("snr_db", "receiver", "strategy", "pair_count",
                    "si_count", "theory", "simulated", "ci_halfwidth",
                    "errors", "trials")

_FIGSIZE_PANEL = (6.0, 4.5)
_DPI = 100
_MARKERS = "osD^vPXd*"


class PlotError(Exception):
    """A CSV failed to parse or selects nothing to draw."""


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: input sweeps, grouping, theory overlay, destination."""

    csv_paths: tuple[str, ...]
    out_path: str
    group_by: str = "strategy"  # or "receiver"
    overlay_theory: bool = True
    title: str = ""

    def __post_init__(self):
        if not self.csv_paths:
            raise PlotError("at least one input CSV is required")
        if self.group_by not in ("strategy", "receiver"):
            raise PlotError("group_by must be 'strategy' or 'receiver'")


@dataclass
class SweepData:
    """Parsed rows of one sweep CSV, keyed for plotting."""

    path: str
    rows: list[dict] = field(default_factory=list)

    def curves(self, group_by: str) -> dict[str, list[dict]]:
        """Rows per curve label, each sorted by SNR.

        Grouping by strategy yields one curve per (receiver, selector).
        Grouping by receiver yields one curve per receiver, keeping the
        smallest simulated rate at each SNR (the strategy the receiver
        would actually use).
        """
        groups: dict[str, list[dict]] = {}
        if group_by == "strategy":
            for row in self.rows:
                label = (f"R{row['receiver']} a={row['strategy']} "
                         f"|P|={row['pair_count']} |S|={row['si_count']}")
                groups.setdefault(label, []).append(row)
        else:
            per_point: dict[tuple[int, float], dict] = {}
            for row in self.rows:
                key = (row["receiver"], row["snr_db"])
                best = per_point.get(key)
                if best is None or row["simulated"] < best["simulated"]:
                    per_point[key] = row
            for (receiver, _), row in sorted(per_point.items()):
                groups.setdefault(f"R{receiver}", []).append(row)
        for rows in groups.values():
            rows.sort(key=lambda r: r["snr_db"])
        return groups


def read_sweep_csv(path: str) -> SweepData:
    """Parse one sweep CSV, validating the header and every cell."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise PlotError(f"{path}: empty file") from None
            if tuple(header) != EXPECTED_COLUMNS:
                raise PlotError(
                    f"{path}: header {header!r} does not match the sweep "
                    f"schema {','.join(EXPECTED_COLUMNS)}")
            data = SweepData(path=path)
            for lineno, cells in enumerate(reader, start=2):
                if not cells:
                    continue
                if len(cells) != len(EXPECTED_COLUMNS):
                    raise PlotError(f"{path}:{lineno}: expected "
                                    f"{len(EXPECTED_COLUMNS)} columns")
                try:
                    data.rows.append({
                        "snr_db": float(cells[0]),
                        "receiver": int(cells[1]),
                        "strategy": cells[2],
                        "pair_count": int(cells[3]),
                        "si_count": int(cells[4]),
                        "theory": float(cells[5]),
                        "simulated": float(cells[6]),
                        "ci_halfwidth": float(cells[7]),
                        "errors": int(cells[8]),
                        "trials": int(cells[9]),
                    })
                except ValueError as exc:
                    raise PlotError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise PlotError(f"cannot read '{path}': {exc}") from exc
    if not data.rows:
        raise PlotError(f"{path}: no data rows")
    return data


def _draw_panel(ax, data: SweepData, spec: PlotSpec) -> None:
    for i, (label, rows) in enumerate(data.curves(spec.group_by).items()):
        color = f"C{i % 10}"
        marker = _MARKERS[i % len(_MARKERS)]
        snr = [r["snr_db"] for r in rows]
        sim = [r["simulated"] if r["simulated"] > 0 else math.nan
               for r in rows]
        ax.plot(snr, sim, color=color, marker=marker, markersize=4,
                linewidth=1.2, label=label)
        if spec.overlay_theory:
            theory = [r["theory"] if r["theory"] > 0 else math.nan
                      for r in rows]
            ax.plot(snr, theory, color=color, linestyle="--", linewidth=1.0)
    ax.set_yscale("log")
    ax.set_xlabel("Es/N0 (dB)")
    ax.set_ylabel("bit error rate")
    ax.set_title(Path(data.path).stem, fontsize=10)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)


def build_figure(spec: PlotSpec):
    """The figure for a spec; separated from file output for testing."""
    sweeps = [read_sweep_csv(path) for path in spec.csv_paths]
    n = len(sweeps)
    fig, axes = plt.subplots(
        1, n, figsize=(_FIGSIZE_PANEL[0] * n, _FIGSIZE_PANEL[1]),
        squeeze=False)
    for ax, data in zip(axes[0], sweeps):
        _draw_panel(ax, data, spec)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> str:
    """Write the figure to spec.out_path and return that path.

    All inputs are parsed before the output file is touched, so a bad CSV
    never leaves a partial image behind.
    """
    fig = build_figure(spec)
    try:
        fig.savefig(spec.out_path, dpi=_DPI,
                    metadata={"Software": "icpsk-plots"})
    finally:
        plt.close(fig)
    return spec.out_path


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="icpsk-plots",
        description="Render BER-versus-SNR figures from sweep CSVs, "
                    "one panel per file.")
    parser.add_argument("csvs", nargs="+", help="sweep CSV files")
    parser.add_argument("--group-by", choices=("strategy", "receiver"),
                        default="strategy")
    parser.add_argument("--no-theory", action="store_true",
                        help="skip the dashed theory curves")
    parser.add_argument("--title", default="")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        render(PlotSpec(csv_paths=tuple(args.csvs),
                        out_path=args.out,
                        group_by=args.group_by,
                        overlay_theory=not args.no_theory,
                        title=args.title))
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
