"""Sequences p_n for 0 <= n <= 50 behind the three classic pictures.

Writes one CSV per (r, d) family into ``--out-dir`` (default ``figure_data``)
with a column per alpha, then prints where each sequence peaks.  Plot them
with any tool; nothing here depends on a plotting library.

    python demos/figure_data.py --out-dir /tmp/figs
"""

import argparse
import csv
from fractions import Fraction
from pathlib import Path

from competing_binomials import exact_trace, verify_shape

FAMILIES = {
    # r = d = 1: monotone on either side of 1/2
    (1, 1): ["1/10", "3/10", "1/2", "7/10", "9/10"],
    # r = 3, d = 1: increasing, unimodal with a drifting peak, decreasing
    (3, 1): ["1/10", "1/6", "9/50", "1/5", "1/4", "3/10"],
    # r = 5, d = 4
    (5, 4): ["2/5", "3/5", "2/3", "17/25", "7/10", "4/5"],
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("figure_data"))
    parser.add_argument("--n-max", type=int, default=50)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    for (r, d), alphas in FAMILIES.items():
        traces = [exact_trace(Fraction(a), r, d, args.n_max) for a in alphas]
        path = args.out_dir / f"p_r{r}_d{d}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n"] + [f"alpha={a}" for a in alphas])
            for n in range(args.n_max + 1):
                w.writerow([n] + [repr(float(t.values[n])) for t in traces])
        print(f"r={r} d={d} -> {path}")
        for a, t in zip(alphas, traces):
            v = verify_shape(t)
            extra = f" (peak at n={v.mode})" if v.kind == "unimodal" else ""
            print(f"    alpha={a:>6}: {v.kind}{extra}, p_50 = {float(t.values[-1]):.6f}")


if __name__ == "__main__":
    main()
