"""Floating-point evaluation through the Fourier integral representation.

With ``x = cos(t/2)`` the representation becomes

    p_n - 1/2 = 1/(2 pi) * int_0^pi phi(t)**n * P(cos(t/2)) dt,

    p_{n+1} - p_n = -2 a (1-a)/pi * int_0^pi phi(t)**n sin^2(t/2) P(cos(t/2)) dt,

where ``phi(t) = 1 - 4a(1-a) sin^2(t/2)`` is the characteristic function of
one toss difference.  The integrands are even cosine polynomials in ``t``
of known degree ``K``, free of the ``(1 - x^2)^(-1/2)`` endpoint
singularity of the ``x`` form.  The composite midpoint rule with ``m``
nodes integrates ``cos(k t)`` on ``[0, pi]`` exactly for ``k < 2m``, so
``m > K/2`` nodes leave only rounding error.  Gauss-Legendre is available
but is not exact for trigonometric polynomials and drifts by ~1e-13 at
``n`` in the hundreds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .exact import DomainError, DuelParams, as_rational
from .polynomials import dueling_poly

__all__ = [
    "QuadratureConfig",
    "KernelFns",
    "QuadratureError",
    "p_quadrature",
    "diff_quadrature",
    "q_fourier",
]

_RULES = ("gauss-legendre", "midpoint")
# log of the smallest integrand magnitude worth integrating
_LOG_FLOOR = math.log(1e-320)
_TRUNCATED_CAP = 384


class QuadratureError(ArithmeticError):
    """Two successive node counts disagree beyond the target error."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Rule and node count for the integrals on ``[0, pi]``.

    ``node_count=None`` sizes the rule from the trigonometric degree of the
    integrand.  With ``check_convergence`` the integral is recomputed with
    twice the nodes and :class:`QuadratureError` is raised on disagreement.
    """

    node_count: int | None = None
    rule: str = "midpoint"
    target_abs_error: float = 1e-13
    check_convergence: bool = True
    truncate: bool = True

    def __post_init__(self):
        if self.rule not in _RULES:
            raise ValueError(f"rule must be one of {_RULES}, got {self.rule!r}")
        if self.node_count is not None and self.node_count < 1:
            raise ValueError("node_count must be positive")
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class KernelFns:
    """``phi(t) = 1 - 4a(1-a) sin^2(t/2)`` and ``Q(x) = 1 - 4a(1-a)(1 - x^2)``."""

    alpha: float

    @property
    def spread(self) -> float:
        return 4.0 * self.alpha * (1.0 - self.alpha)

    def phi(self, t):
        s = np.sin(np.asarray(t, dtype=float) / 2.0)
        return 1.0 - self.spread * s * s

    def Q(self, x):
        x = np.asarray(x, dtype=float)
        return 1.0 - self.spread * (1.0 - x * x)

    def phi_pow(self, t, n: int):
        # exp(n log1p(.)) keeps a few ulp of relative error where pow(phi, n)
        # would amplify the rounding of phi by a factor n
        s = np.sin(np.asarray(t, dtype=float) / 2.0)
        with np.errstate(divide="ignore"):
            return np.exp(n * np.log1p(-self.spread * s * s))


@lru_cache(maxsize=64)
def _gl_nodes(m: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(m)
    return x, w


def _nodes(rule: str, m: int, upper: float) -> tuple[np.ndarray, np.ndarray]:
    if rule == "gauss-legendre":
        x, w = _gl_nodes(m)
        half = upper / 2.0
        return half * (x + 1.0), half * w
    h = upper / m
    return (np.arange(m) + 0.5) * h, np.full(m, h)


def _cutoff(alpha: float, n: int) -> float:
    """Smallest ``t*`` with ``phi(t)**n < 1e-320`` on ``[t*, pi]``, else ``pi``."""
    if n == 0:
        return math.pi
    spread = 4.0 * alpha * (1.0 - alpha)
    target = -math.expm1(_LOG_FLOOR / n) / spread
    if target >= 1.0:
        return math.pi
    return 2.0 * math.asin(math.sqrt(target))


def _auto_nodes(rule: str, degree: int, upper: float) -> int:
    """Node count for an integrand of trigonometric degree at most ``degree``."""
    if rule == "midpoint":
        base = degree // 2 + 9
    else:
        base = degree + 32
    if upper >= math.pi:
        return base
    # after the cutoff the integrand is a bump spanning a fixed number of its
    # own widths, so the node count saturates; round up to share cached rules
    m = min(int(math.ceil(base * upper / math.pi)) + 32, _TRUNCATED_CAP)
    return -(-m // 32) * 32


def _integrate(integrand, n, degree, alpha, scale, cfg: QuadratureConfig) -> float:
    """``scale * int integrand``; the convergence test is on the scaled value.

    Disagreement below the rounding floor of the weighted sum is accepted.
    """
    upper = _cutoff(alpha, n) if cfg.truncate else math.pi
    m = cfg.node_count or _auto_nodes(cfg.rule, degree, upper)

    def run(k):
        t, w = _nodes(cfg.rule, k, upper)
        terms = w * integrand(t)
        return scale * math.fsum(terms), abs(scale) * float(np.abs(terms).sum())

    value, mass = run(m)
    if cfg.check_convergence:
        other, _ = run(2 * m)
        tol = max(cfg.target_abs_error, 64 * np.finfo(float).eps * mass)
        if abs(other - value) > tol:
            raise QuadratureError(
                f"quadrature not converged: {value!r} with {m} nodes vs "
                f"{other!r} with {2 * m} nodes"
            )
    return value


def _poly_and_kernel(params: DuelParams):
    poly = dueling_poly(params.alpha, params.r, params.d)
    return poly, KernelFns(float(params.alpha))


def _weight(poly, t):
    # P(cos(t/2)) with cos^2(t/2) = (1 + cos t)/2
    return poly.eval_float_y(0.5 * (1.0 + np.cos(t)))


def p_quadrature(params: DuelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``p_n`` from the integral representation (double precision)."""
    poly, kern = _poly_and_kernel(params)
    n = params.n
    if poly.is_zero:
        return 0.5

    def f(t):
        return kern.phi_pow(t, n) * _weight(poly, t)

    # n + r + d bounds the degree n + max(r-d, d-1) with room to spare
    deg = n + params.r + params.d
    return 0.5 + _integrate(f, n, deg, kern.alpha, 1.0 / (2.0 * math.pi), cfg)


def diff_quadrature(params: DuelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``p_{n+1} - p_n`` from the difference integral (double precision)."""
    poly, kern = _poly_and_kernel(params)
    n = params.n
    if poly.is_zero:
        return 0.0

    def f(t):
        s = np.sin(0.5 * t)
        return kern.phi_pow(t, n) * s * s * _weight(poly, t)

    deg = n + params.r + params.d
    a = kern.alpha
    return _integrate(f, n, deg, a, -2.0 * a * (1.0 - a) / math.pi, cfg)


def q_fourier(n: int, k: int, alpha, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``P{S'_n - S_n = k} = (1/pi) int_0^pi phi(t)**n cos(k t) dt``.

    Offsets with ``|k| > n`` are allowed and integrate to (numerically) zero.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    a = float(as_rational(alpha))
    if not 0.0 < a < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    kern = KernelFns(a)
    k = abs(int(k))

    def f(t):
        return kern.phi_pow(t, n) * np.cos(k * t)

    return _integrate(f, n, n + k, a, 1.0 / math.pi, cfg)
