"""Average minimum throughput versus station count, one line per policy.

Standalone script: point it at one sweep directory per policy (as written by
the simulator CLI when --stations is repeated), e.g.

    ofdma-plot-scaling --input wmm=runs/sweep/wmm \
                       --input pf=runs/sweep/pf \
                       --out fig_scaling.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .data import read_sweep

KB = 1000.0


def plot_scaling(inputs: dict[str, Path], out_path: Path):
    """Render the per-policy sweep lines and save the figure."""
    if not inputs:
        raise ValueError("no input sweeps given")
    loaded = [(name, read_sweep(path)) for name, path in inputs.items()]
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    for name, (ks, means) in loaded:
        ax.plot(ks, [y / KB for y in means], marker="o", label=name)
    ax.set_xlabel("number of stations")
    ax.set_ylabel("average minimum throughput (kb/period)")
    ax.set_xticks(loaded[0][1][0])
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--input", action="append", metavar="NAME=SWEEP_DIR", required=True,
                        help="sweep directory for one policy")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        inputs: dict[str, Path] = {}
        for pair in args.input:
            if "=" not in pair:
                raise ValueError(f"--input expects name=path, got {pair!r}")
            name, path = pair.split("=", 1)
            inputs[name] = Path(path)
        plot_scaling(inputs, Path(args.out))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
