"""How fast the three asymptotic laws kick in.

1. sqrt(n) (p_n - 1/2) against its limit, using quadrature up to n = 10^7.
2. The exact mode near the lower critical value 1/(2r) against
   (r-1)/(4r) / eps.
3. The height of the maximum against its eps^(3/2) law.
"""

import math
from fractions import Fraction

from competing_binomials import (
    DuelParams,
    find_mode,
    limit_constant,
    max_asymptotic,
    mode_asymptotic,
    p_quadrature,
    p_trace,
)

print("sqrt(n) (p_n - 1/2) / limit")
cases = [(Fraction(3, 10), 1, 1), (Fraction(3, 10), 2, 1), (Fraction(2, 5), 3, 2), (Fraction(1, 100), 5, 5)]
print("n".rjust(10) + "".join(f"{f'({a},{r},{d})':>16}" for a, r, d in cases))
for n in (10, 100, 1000, 10**4, 10**5, 10**6, 10**7):
    ratios = [
        math.sqrt(n) * (p_quadrature(DuelParams(a, n, r, d)) - 0.5) / limit_constant(a, r, d)
        for a, r, d in cases
    ]
    print(f"{n:>10}" + "".join(f"{x:16.6f}" for x in ratios))

# the small-alpha, large-d case converges slowest: the local CLT needs
# n alpha to be large before the Gaussian picture applies

print()
print("mode and maximum near alpha = 1/(2r)")
print(f"{'r':>3} {'eps':>7} {'mode':>6} {'law':>9} {'ratio':>7} {'p_N-1/2':>11} {'law':>11} {'ratio':>7}")
for r in (2, 3, 4):
    for k in (25, 50, 100, 200, 400, 800):
        eps = Fraction(1, k)
        a = Fraction(1, 2 * r) + eps
        mode = find_mode(a, r, 5000)
        top = float(p_trace(a, r, 1, mode, mode)[0] - Fraction(1, 2))
        m_law, h_law = mode_asymptotic(a, r), max_asymptotic(a, r)
        print(
            f"{r:>3} {'1/' + str(k):>7} {mode:>6} {m_law:9.2f} {mode / m_law:7.4f} "
            f"{top:11.4e} {h_law:11.4e} {top / h_law:7.4f}"
        )
