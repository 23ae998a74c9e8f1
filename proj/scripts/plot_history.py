#!/usr/bin/env python3
"""Plot training/validation NMSE curves from one or more history TSV files.

Each input is the `history = ...` file written by `flowgnn train`: comment
lines starting with '#', then rows of `epoch\ttrain_nmse\tval_nmse`.
"""

import argparse
import sys


def read_history(path):
    epochs, train, val = [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            epochs.append(int(fields[0]))
            train.append(float(fields[1]))
            val.append(float(fields[2]))
    return epochs, train, val


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("history", nargs="+", help="history TSV file(s)")
    parser.add_argument("-o", "--out", default="history.png", help="output image")
    parser.add_argument("--log", action="store_true", help="log-scale the NMSE axis")
    args = parser.parse_args()

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required: pip install matplotlib")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in args.history:
        epochs, train, val = read_history(path)
        label = path if len(args.history) > 1 else ""
        ax.plot(epochs, train, "--", alpha=0.6, label=f"{label} train".strip())
        ax.plot(epochs, val, label=f"{label} val".strip())
    if args.log:
        ax.set_yscale("log")
    ax.set_xlabel("epoch")
    ax.set_ylabel("NMSE")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
