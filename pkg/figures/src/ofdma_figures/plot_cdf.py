"""Empirical CDF of the per-drop minimum throughput, one curve per policy.

Standalone script: give it one cdf.csv per policy for the single-pattern
panel and/or the multi-pattern panel, e.g.

    ofdma-plot-cdf --single wmm=runs/single/wmm/cdf.csv \
                   --single pf=runs/single/pf/cdf.csv \
                   --multi wmm=runs/multi/wmm/cdf.csv \
                   --rmin 20000 --out fig_cdf.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .data import read_cdf

KB = 1000.0  # axis unit is kb per scheduling period; conversion happens only here


def plot_cdf(panels: list[tuple[str, dict[str, Path]]], r_min: float, out_path: Path):
    """Render one step-curve per policy for each panel and save the figure."""
    if not panels:
        raise ValueError("no input curves given")
    # read everything first so a bad input never leaves a half-written image
    loaded = [
        (title, [(name, read_cdf(path)) for name, path in inputs.items()])
        for title, inputs in panels
    ]
    fig, axes = plt.subplots(1, len(loaded), figsize=(5.2 * len(loaded), 4.0), squeeze=False)
    for ax, (title, curves) in zip(axes[0], loaded):
        for name, (xs, fs) in curves:
            ax.step([x / KB for x in xs], fs, where="post", label=name)
        ax.axvline(r_min / KB, color="gray", linestyle="--", linewidth=1,
                   label=f"requirement {r_min / KB:g} kb")
        ax.set_xlabel("minimum throughput (kb/period)")
        ax.set_ylabel("empirical CDF")
        ax.set_title(title)
        ax.set_ylim(0.0, 1.02)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="lower right")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def _parse_named(pairs: list[str] | None, flag: str) -> dict[str, Path]:
    out: dict[str, Path] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"{flag} expects name=path, got {pair!r}")
        name, path = pair.split("=", 1)
        out[name] = Path(path)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--single", action="append", metavar="NAME=CDF_CSV",
                        help="curve for the single-pattern panel")
    parser.add_argument("--multi", action="append", metavar="NAME=CDF_CSV",
                        help="curve for the multi-pattern panel")
    parser.add_argument("--rmin", type=float, default=20000.0, help="requirement marker (bits/period)")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        panels = []
        single = _parse_named(args.single, "--single")
        multi = _parse_named(args.multi, "--multi")
        if single:
            panels.append(("single RU pattern", single))
        if multi:
            panels.append(("multiple RU patterns", multi))
        plot_cdf(panels, args.rmin, Path(args.out))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
