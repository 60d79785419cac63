"""The even weight polynomial of the integral representation.

``P(x) = P_alpha^{r,d}(x)`` is built two independent ways:

* :func:`poly_via_derivatives` takes even-order derivatives of
  ``t**(j-d) * (1 - alpha + alpha*t)**r`` at ``t = -1`` (generalised Leibniz
  rule, negative powers of ``t`` allowed);
* :func:`poly_via_chebyshev` sums Chebyshev polynomials of the second kind
  against the pmf of ``S_r``.

Both return an :class:`EvenPoly` in the monomial basis of ``x**2`` with
exact rational coefficients, so they can be compared with ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .exact import DomainError, _check_alpha, binom_pmf

__all__ = [
    "ChebU",
    "EvenPoly",
    "cheb_u",
    "gen_binom",
    "poly_via_chebyshev",
    "poly_via_derivatives",
    "dueling_poly",
    "poly_at_one",
    "poly_deriv_at_one_critical",
    "count_roots",
    "locate_root",
]


@dataclass(frozen=True)
class ChebU:
    """``U_k`` with integer monomial coefficients, ``coeffs[m]`` for ``x**m``."""

    k: int
    coeffs: tuple[int, ...]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@lru_cache(maxsize=None)
def cheb_u(k: int) -> ChebU:
    """Chebyshev polynomial of the second kind via ``U_{k+1} = 2x U_k - U_{k-1}``."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        return ChebU(0, (1,))
    if k == 1:
        return ChebU(1, (0, 2))
    prev, cur = cheb_u(k - 2).coeffs, cheb_u(k - 1).coeffs
    out = [0] * (k + 1)
    for m, c in enumerate(cur):
        out[m + 1] += 2 * c
    for m, c in enumerate(prev):
        out[m] -= c
    return ChebU(k, tuple(out))


def gen_binom(n: int, k: int) -> Fraction:
    """Binomial coefficient ``prod_{m=n-k+1}^{n} m / k!``, valid for negative ``n``."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        return Fraction(1)
    prod = 1
    for m in range(n - k + 1, n + 1):
        prod *= m
    return Fraction(prod, factorial(k))


def _trim(coeffs) -> tuple[Fraction, ...]:
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class EvenPoly:
    """``sum_j coeffs[j] * x**(2j)``; trailing zeros are stripped."""

    coeffs: tuple[Fraction, ...]
    alpha: Fraction
    r: int
    d: int
    _float: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        object.__setattr__(
            self, "_float", np.array([float(c) for c in self.coeffs] or [0.0])
        )

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | None:
        """Degree in ``x``; ``None`` for the zero polynomial."""
        return None if self.is_zero else 2 * (len(self.coeffs) - 1)

    def coeff(self, j: int) -> Fraction:
        """Coefficient of ``x**(2j)``."""
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def in_y(self, y):
        """Evaluate at ``x**2 = y`` (exact for rational ``y``)."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def __call__(self, x):
        return self.in_y(x * x)

    def derivative_at(self, x) -> Fraction:
        """Exact ``dP/dx`` at ``x``."""
        x = Fraction(x)
        return sum(
            (2 * j * c * x ** (2 * j - 1) for j, c in enumerate(self.coeffs) if j),
            Fraction(0),
        )

    def eval_float_y(self, y: np.ndarray) -> np.ndarray:
        """Horner in ``y = x**2`` on floats; coefficients converted once."""
        c = self._float
        acc = np.full_like(y, c[-1], dtype=float)
        for v in c[-2::-1]:
            acc = acc * y + v
        return acc

    def signs(self) -> tuple[int, ...]:
        """Sign (-1, 0, +1) of each coefficient of ``x**(2j)``."""
        return tuple((c > 0) - (c < 0) for c in self.coeffs)


def _pmf(alpha: Fraction, r: int) -> list[Fraction]:
    return [binom_pmf(i, r, alpha) for i in range(r + 1)]


def _check_rd(r: int, d: int) -> None:
    if r < 1 or d < 1:
        raise DomainError(f"r and d must be >= 1, got r={r}, d={d}")


@lru_cache(maxsize=1024)
def poly_via_chebyshev(alpha, r: int, d: int) -> EvenPoly:
    """``sum_{i>=d} P{S_r=i} U_{2(i-d)} - sum_{i<d} P{S_r=i} U_{2(d-i-1)}``."""
    alpha = _check_alpha(alpha)
    _check_rd(r, d)
    pmf = _pmf(alpha, r)
    size = max(r - d, d - 1) + 1
    acc = [Fraction(0)] * size
    for i, w in enumerate(pmf):
        if i >= d:
            u, sign = cheb_u(2 * (i - d)), 1
        else:
            u, sign = cheb_u(2 * (d - i - 1)), -1
        # U_{2k} is even: only even monomials are nonzero
        for j, c in enumerate(u.coeffs[::2]):
            acc[j] += sign * w * c
    return EvenPoly(tuple(acc), alpha, r, d)


def _falling(e: int, m: int) -> int:
    out = 1
    for k in range(m):
        out *= e - k
    return out


@lru_cache(maxsize=1024)
def poly_via_derivatives(alpha, r: int, d: int) -> EvenPoly:
    """Coefficients from ``D_j = (d/dt)^{2j} [t^{j-d} (1-a+a t)^r]`` at ``t = -1``.

    ``P(x) = sum_{j=0}^{r+d} D_j (2x)^{2j} / (2j)!``.  The Leibniz rule splits
    ``D_j`` into derivatives of the binomial power and of the monomial
    ``t^{j-d}``, whose exponent may be negative.
    """
    alpha = _check_alpha(alpha)
    _check_rd(r, d)
    base = 1 - 2 * alpha  # value of 1 - a + a t at t = -1
    coeffs = []
    for j in range(r + d + 1):
        e = j - d
        total = Fraction(0)
        for k in range(min(2 * j, r) + 1):
            m = 2 * j - k
            # k-th derivative of (1 - a + a t)^r at t = -1
            dpow = _falling(r, k) * alpha**k * base ** (r - k)
            # m-th derivative of t^e at t = -1: e(e-1)...(e-m+1) (-1)^(e-m)
            dmono = factorial(m) * gen_binom(e, m) * (-1) ** ((e - m) % 2)
            total += comb(2 * j, k) * dpow * dmono
        coeffs.append(total * Fraction(4**j, factorial(2 * j)))
    return EvenPoly(tuple(coeffs), alpha, r, d)


def dueling_poly(alpha, r: int, d: int) -> EvenPoly:
    """Canonical construction used by the numerical routines."""
    return poly_via_chebyshev(_check_alpha(alpha), r, d)


def poly_at_one(alpha, r: int, d: int) -> Fraction:
    """``P(1) = E(2 S_r - 2d + 1) = 2 alpha r - 2d + 1``."""
    alpha = _check_alpha(alpha)
    _check_rd(r, d)
    return 2 * alpha * r - 2 * d + 1


def poly_deriv_at_one_critical(r: int, d: int) -> Fraction:
    """``P'(1)`` at the critical ``alpha = (2d-1)/(2r)``, in closed form.

    Positive whenever ``r >= 2d``.
    """
    _check_rd(r, d)
    return Fraction(
        2 * (2 * d - 1) * (1 + 4 * d * d + 3 * r + 2 * r * r - 2 * d * (2 + 3 * r)),
        3 * r * r,
    )


# -- real roots on [0, 1] -----------------------------------------------------


def _poly_rem(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    num = list(num)
    while len(num) >= len(den) and num:
        f = num[-1] / den[-1]
        shift = len(num) - len(den)
        for k, c in enumerate(den):
            num[shift + k] -= f * c
        num.pop()
        while num and num[-1] == 0:
            num.pop()
    return num


def _sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    dp = [k * c for k, c in enumerate(p)][1:]
    chain = [p, dp]
    while chain[-1]:
        rem = _poly_rem(chain[-2], chain[-1])
        chain.append([-c for c in rem])
    chain.pop()
    return chain


def _horner(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(poly: EvenPoly, lo=0, hi=1) -> int:
    """Number of distinct roots of ``poly`` in ``x`` on the interval ``(lo, hi]``.

    Requires ``0 <= lo < hi``; works in ``y = x**2`` with an exact Sturm chain.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not 0 <= lo < hi:
        raise DomainError("need 0 <= lo < hi")
    if poly.is_zero:
        raise DomainError("the zero polynomial has infinitely many roots")
    chain = _sturm_chain(list(poly.coeffs))
    ylo, yhi = lo * lo, hi * hi
    return _sign_changes([_horner(p, ylo) for p in chain]) - _sign_changes(
        [_horner(p, yhi) for p in chain]
    )


def locate_root(poly: EvenPoly, lo=0, hi=1, depth: int = 64) -> tuple[Fraction, Fraction]:
    """Bracket a sign change of ``poly`` on ``[lo, hi]`` by dyadic bisection.

    Returns an interval of width ``(hi - lo) / 2**depth`` (or a degenerate
    one if a dyadic point is an exact root).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    flo, fhi = poly(lo), poly(hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise DomainError("no sign change on the interval")
    for _ in range(depth):
        mid = (lo + hi) / 2
        fm = poly(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi
