"""Exact rational arithmetic for the competing-binomials probability.

Everything here returns :class:`fractions.Fraction` (or plain ``int``) and
never touches floating point.  Internally the sums are carried out on
integer numerators over a common power of the denominator of ``alpha``,
which keeps the cost close to that of plain big-integer arithmetic.

Notation: ``S_m`` is the number of heads in ``m`` tosses of a coin with
head probability ``alpha``; primed copies are independent.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterator, Sequence

__all__ = [
    "N_MAX_EXACT",
    "DomainError",
    "DuelParams",
    "QTable",
    "as_rational",
    "binom_pmf",
    "p_exact",
    "p_trace",
    "identity_comb2",
    "q_table",
    "diff_one_step",
    "diff_trace",
    "p_dual",
    "local_limit_identity",
]

#: Largest common toss count accepted by the exact routines.
N_MAX_EXACT = 5000


class DomainError(ValueError):
    """An argument lies outside the domain of an exact operation."""


def as_rational(value) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Strings may be ``"p/q"`` or decimals (``"0.3"``); floats go through their
    shortest decimal repr, so ``0.3`` becomes ``3/10`` and not the nearest
    binary double.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a probability")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {value!r} as a rational") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def _check_alpha(alpha) -> Fraction:
    alpha = as_rational(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def _check_n(n: int, lo: int = 0) -> int:
    if int(n) != n or n < lo:
        raise DomainError(f"n must be an integer >= {lo}, got {n}")
    n = int(n)
    if n > N_MAX_EXACT:
        raise DomainError(
            f"n={n} exceeds the exact-arithmetic limit {N_MAX_EXACT}; "
            "use the quadrature routines instead"
        )
    return n


@dataclass(frozen=True)
class DuelParams:
    """Parameters ``(alpha, n, r, d)`` of ``P{S_{n+r} >= S'_n + d}``."""

    alpha: Fraction
    n: int
    r: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        for name, lo in (("n", 0), ("r", 1), ("d", 1)):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < lo:
                raise DomainError(f"{name} must be an integer >= {lo}, got {v}")
            object.__setattr__(self, name, int(v))

    def replace(self, **changes) -> "DuelParams":
        fields = {"alpha": self.alpha, "n": self.n, "r": self.r, "d": self.d}
        fields.update(changes)
        return DuelParams(**fields)


def _split(alpha: Fraction) -> tuple[int, int, int]:
    """Return ``(a, c, b)`` with ``alpha = a/b`` and ``1 - alpha = c/b``."""
    a, b = alpha.numerator, alpha.denominator
    return a, b - a, b


def _pmf_numerators(m: int, a: int, c: int) -> list[int]:
    # P{S_m = k} * b**m
    return [comb(m, k) * a**k * c ** (m - k) for k in range(m + 1)]


def _tail_numerators(m: int, a: int, c: int) -> list[int]:
    # tails[k] = P{S_m >= k} * b**m for k = 0..m+1
    pmf = _pmf_numerators(m, a, c)
    tails = [0] * (m + 2)
    for k in range(m, -1, -1):
        tails[k] = tails[k + 1] + pmf[k]
    return tails


def binom_pmf(k: int, m: int, alpha) -> Fraction:
    """``P{S_m = k}`` as an exact fraction."""
    alpha = _check_alpha(alpha)
    if int(k) != k or int(m) != m or m < 0 or not 0 <= k <= m:
        raise DomainError(f"need 0 <= k <= m, got k={k}, m={m}")
    return comb(int(m), int(k)) * alpha**k * (1 - alpha) ** (m - k)


def p_exact(params: DuelParams) -> Fraction:
    """The double binomial sum for ``P{S_{n+r} >= S'_n + d}``.

    The inner sum over the longer player's head count is a binomial tail,
    so each outer term reuses one suffix sum.  For ``n = 0`` this is
    ``P{S_r >= d}``.
    """
    n = _check_n(params.n)
    r, d = params.r, params.d
    a, c, b = _split(params.alpha)
    m = n + r
    tails = _tail_numerators(m, a, c)
    short = _pmf_numerators(n, a, c)
    total = 0
    for i, w in enumerate(short):
        j0 = i + d
        if j0 > m:
            break
        total += w * tails[j0]
    return Fraction(total, b ** (2 * n + r))


def identity_comb2(n: int) -> int:
    """Count of outcome pairs where ``n + 1`` fair tosses beat ``n``.

    Equals ``4**n``; returned as an integer so callers can compare exactly.
    """
    n = _check_n(n)
    return sum(
        comb(n + 1, j) * comb(n, i) for i in range(n + 1) for j in range(i + 1, n + 2)
    )


@dataclass(frozen=True)
class QTable:
    """Distribution of ``S'_n - S_n``: ``entries[i + n] = P{S'_n - S_n = i}``."""

    n: int
    alpha: Fraction
    entries: tuple[Fraction, ...]

    def __getitem__(self, i: int) -> Fraction:
        if -self.n <= i <= self.n:
            return self.entries[i + self.n]
        return Fraction(0)

    def offsets(self) -> range:
        return range(-self.n, self.n + 1)

    def as_dict(self) -> dict[int, Fraction]:
        return {i: self[i] for i in self.offsets()}


class _QRows:
    """Integer rows ``q_n^{(i)} * b**(2n)`` built by the one-step recursion.

    Rows up to ``_KEEP`` are memoised for the ``_ALPHAS`` most recent alphas;
    longer runs are streamed.
    """

    _KEEP = 128
    _ALPHAS = 32

    def __init__(self):
        self._rows: OrderedDict[tuple[int, int], list[list[int]]] = OrderedDict()
        self._lock = threading.Lock()

    @staticmethod
    def step(row: Sequence[int], a: int, c: int) -> list[int]:
        ac = a * c
        same = a * a + c * c
        m = len(row)
        out = [0] * (m + 2)
        # out index j corresponds to row index j-1
        for j in range(m + 2):
            left = row[j - 2] if 0 <= j - 2 < m else 0
            mid = row[j - 1] if 0 <= j - 1 < m else 0
            right = row[j] if j < m else 0
            out[j] = ac * (left + right) + same * mid
        return out

    def iter_rows(self, alpha: Fraction) -> Iterator[list[int]]:
        a, c, _ = _split(alpha)
        key = (a, c)
        with self._lock:
            cached = list(self._rows.get(key, [[1]]))
            if key in self._rows:
                self._rows.move_to_end(key)
        yield from cached
        row = cached[-1]
        n = len(cached) - 1
        while True:
            row = self.step(row, a, c)
            n += 1
            if n <= self._KEEP:
                with self._lock:
                    rows = self._rows.setdefault(key, [[1]])
                    if len(rows) == n:
                        rows.append(row)
                    while len(self._rows) > self._ALPHAS:
                        self._rows.popitem(last=False)
            yield row

    def row(self, alpha: Fraction, n: int) -> list[int]:
        for k, row in enumerate(self.iter_rows(alpha)):
            if k == n:
                return row
        raise AssertionError("unreachable")


_QROWS = _QRows()


def q_table(n: int, alpha) -> QTable:
    """Exact law of ``S'_n - S_n`` via the one-step recursion in ``n``.

    ``q_{n+1}(i) = a(1-a)(q_n(i-1) + q_n(i+1)) + (a^2 + (1-a)^2) q_n(i)``
    starting from a point mass at 0.
    """
    alpha = _check_alpha(alpha)
    n = _check_n(n)
    row = _QROWS.row(alpha, n)
    den = alpha.denominator ** (2 * n)
    return QTable(n, alpha, tuple(Fraction(v, den) for v in row))


def _diff_from_row(row: Sequence[int], n: int, r: int, d: int, a: int, c: int) -> int:
    # numerator over b**(2n + r + 2) of p_{n+1} - p_n
    pmf = _pmf_numerators(r, a, c)

    def q(i):
        k = i + n
        return row[k] if 0 <= k < len(row) else 0

    s = sum(w * (q(i - d + 1) - q(i - d)) for i, w in enumerate(pmf))
    return a * c * s


def diff_one_step(params: DuelParams) -> Fraction:
    """``p_{n+1} - p_n`` from the law of ``S'_n - S_n``.

    Conditioning on the last toss of each player gives
    ``a(1-a) * sum_i P{S_r = i} (q_n(i-d+1) - q_n(i-d))``.
    """
    n = _check_n(params.n)
    a, c, b = _split(params.alpha)
    row = _QROWS.row(params.alpha, n)
    num = _diff_from_row(row, n, params.r, params.d, a, c)
    return Fraction(num, b ** (2 * n + params.r + 2))


def p_trace(alpha, r: int, d: int, n_to: int, n_from: int = 0) -> list[Fraction]:
    """Exact values ``p_n`` for ``n_from <= n <= n_to``.

    Uses ``p_n = sum_i q_n(i) P{S_r >= i + d}`` with the recursive rows, so a
    whole sequence costs about as much as its last term.
    """
    params = DuelParams(alpha, 0, r, d)
    n_to = _check_n(n_to)
    if n_from > n_to:
        raise DomainError("n_from must not exceed n_to")
    a, c, b = _split(params.alpha)
    tails = _tail_numerators(r, a, c)
    top = b**r

    def tail(k):
        if k <= 0:
            return top
        return tails[k] if k <= r else 0

    out = []
    for n, row in enumerate(_QROWS.iter_rows(params.alpha)):
        if n > n_to:
            break
        if n < n_from:
            continue
        # row index k <-> offset i = k - n; only i + d <= r contributes
        hi = min(len(row), r - d + n + 1)
        num = 0
        for k in range(hi):
            num += row[k] * tail(k - n + d)
        out.append(Fraction(num, b ** (2 * n + r)))
    return out


def diff_trace(alpha, r: int, d: int, n_to: int) -> list[Fraction]:
    """``[p_{n+1} - p_n for n in 0..n_to]`` computed with the difference formula."""
    params = DuelParams(alpha, 0, r, d)
    n_to = _check_n(n_to)
    a, c, b = _split(params.alpha)
    out = []
    for n, row in enumerate(_QROWS.iter_rows(params.alpha)):
        if n > n_to:
            break
        out.append(Fraction(_diff_from_row(row, n, r, d, a, c), b ** (2 * n + r + 2)))
    return out


def p_dual(params: DuelParams) -> Fraction:
    """``1 - p_n^{r, r-d+1}(1 - alpha)``; equal to ``p_exact(params)``."""
    d_dual = params.r - params.d + 1
    if d_dual < 1:
        raise DomainError(f"dual lead r-d+1 = {d_dual} < 1; need d <= r")
    return 1 - p_exact(DuelParams(1 - params.alpha, params.n, params.r, d_dual))


def local_limit_identity(n: int, alpha) -> Fraction:
    """``1/2 + (2 alpha - 1)/2 * P{S_n = S'_n}``, which equals ``p_n^{1,1}``."""
    alpha = _check_alpha(alpha)
    n = _check_n(n)
    return Fraction(1, 2) + (2 * alpha - 1) / 2 * q_table(n, alpha)[0]
