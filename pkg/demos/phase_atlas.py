"""Walk alpha across (0, 1) for a few (r, d) and print the regime map.

For each cell the exact trace up to n = 60 is compared with the regime the
classifier predicts; tail regimes also report where the sign settled.
"""

from fractions import Fraction

from competing_binomials import (
    classify,
    conjecture_scan,
    exact_trace,
    tail_onset,
    thresholds,
    verify_shape,
)
from competing_binomials.phases import expected_shape

for r, d in ((1, 1), (3, 1), (2, 4), (5, 4), (3, 2), (5, 2), (4, 2)):
    th = thresholds(r, d)
    print(f"r={r} d={d}  thresholds " + ", ".join(f"{k}={v}" for k, v in th.items()))
    for k in range(1, 20):
        a = Fraction(k, 20)
        rep = classify(a, r, d, mode_n_max=60)
        trace = exact_trace(a, r, d, 60, rep.onset)
        want = expected_shape(rep.regime)
        if want is None:
            direction, n0 = tail_onset(trace)
            seen = f"tail sign {direction:+d} from n={n0}"
        else:
            v = verify_shape(trace)
            seen = v.kind + (f" mode {v.mode}" if v.mode is not None else "")
        label = f"{rep.family}{rep.subcase and ':' + rep.subcase}"
        print(f"   alpha={str(a):>5}  {rep.regime.value:<20} {label:<14} {seen}")
    print()

# the general-d transitional band is open; the scan below is descriptive

grid = [Fraction(k, 40) for k in range(4, 24)]
scan = conjecture_scan(4, 2, grid, 120)
print("r=4 d=2, unimodal band conjectured on (3/8, 2/5]")
for row in scan.rows:
    mode = f" mode {row.observed.mode}" if row.observed.mode is not None else ""
    print(f"   alpha={str(row.alpha):>5}  predicted {row.predicted:<10} observed {row.observed.kind}{mode}"
          f", {row.curvature.kind}")
print("coefficient signs of P^(4,2):", {str(a): s for a, s in scan.coefficient_signs[:4]})
