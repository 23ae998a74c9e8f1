#!/usr/bin/env python3
"""Truth-versus-prediction scatter from `flowgnn eval` or `flowgnn benchmark`.

Inputs are TSV files with a `truth\tprediction` header row. Multiple files
overlay in one axes, one color per model.
"""

import argparse
import sys


def read_scatter(path):
    truth, pred = [], []
    with open(path) as fh:
        header = fh.readline()
        if "truth" not in header:
            sys.exit(f"{path}: missing truth/prediction header")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t, p = line.split("\t")
            truth.append(float(t))
            pred.append(float(p))
    return truth, pred


def r_squared(truth, pred):
    n = len(truth)
    mean = sum(truth) / n
    ss_res = sum((t - p) ** 2 for t, p in zip(truth, pred))
    ss_tot = sum((t - mean) ** 2 for t in truth)
    return 1.0 - ss_res / ss_tot if ss_tot > 0 else float("nan")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("scatter", nargs="+", help="scatter TSV file(s)")
    parser.add_argument("-o", "--out", default="scatter.png", help="output image")
    args = parser.parse_args()

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required: pip install matplotlib")

    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    lo, hi = float("inf"), float("-inf")
    for path in args.scatter:
        truth, pred = read_scatter(path)
        r2 = r_squared(truth, pred)
        ax.scatter(truth, pred, s=12, alpha=0.6, label=f"{path} (R2 {r2:.3f})")
        lo = min(lo, min(truth), min(pred))
        hi = max(hi, max(truth), max(pred))
    pad = 0.05 * (hi - lo)
    ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], "k-", lw=0.8)
    ax.set_xlim(lo - pad, hi + pad)
    ax.set_ylim(lo - pad, hi + pad)
    ax.set_xlabel("exact lift")
    ax.set_ylabel("predicted lift")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
