#!/usr/bin/env python3
"""Resampling effort versus dimension d, one line per estimator.

Usage:
    plot_scaling.py --out FIG.png ESTIMATOR:d=CSV [ESTIMATOR:d=CSV ...]

x is d on a log2 scale; y is the mean resamples per checkpointed round.
When every CSV carries the elapsed_ns column a dashed mean-runtime line is
drawn on a twin axis; files without it degrade to resamples only.
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from csv_schema import SchemaError, load_run


def parse_points(tokens: list[str]) -> list[tuple[str, int, str]]:
    points = []
    for tok in tokens:
        head, sep, path = tok.partition("=")
        est, sep2, d_str = head.partition(":")
        if not sep or not sep2 or not est or not path:
            raise SchemaError(f"expected ESTIMATOR:d=CSV, got {tok!r}")
        try:
            d = int(d_str)
        except ValueError:
            raise SchemaError(f"bad d value in {tok!r}") from None
        points.append((est, d, path))
    return points


def plot_scaling(points: list[tuple[str, int, str]], out_png: str) -> None:
    if len({d for _, d, _ in points}) < 2:
        raise SchemaError("need >=2 d values")
    by_est: dict[str, list[tuple[int, float, float | None]]] = defaultdict(list)
    have_elapsed = True
    for est, d, path in points:
        run = load_run(path, require_elapsed=False)
        mean_res = float(run.resamples.mean())
        mean_ns = float(run.elapsed_ns.mean()) if run.elapsed_ns is not None else None
        if mean_ns is None:
            have_elapsed = False
        by_est[est].append((d, mean_res, mean_ns))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax2 = ax.twinx() if have_elapsed else None
    for est, vals in sorted(by_est.items()):
        vals.sort()
        ds = [v[0] for v in vals]
        res = [v[1] for v in vals]
        line, = ax.plot(ds, res, marker="o", label=f"{est} resamples")
        if ax2 is not None:
            ax2.plot(ds, [v[2] / 1e6 for v in vals], marker="x", linestyle="--",
                     color=line.get_color(), alpha=0.6)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("d")
    ax.set_ylabel("mean resamples per round")
    if ax2 is not None:
        ax2.set_ylabel("mean round time (ms, dashed)")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("points", nargs="+", metavar="ESTIMATOR:d=CSV")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        plot_scaling(parse_points(args.points), args.out)
    except (SchemaError, OSError) as exc:
        print(f"plot_scaling: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
