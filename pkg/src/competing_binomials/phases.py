"""Monotonicity regimes of ``n -> p_n^{r,d}`` and the laws near the transition.

:func:`classify` maps ``(alpha, r, d)`` to a :class:`Regime` using three
critical values of ``alpha``::

    1/(2r)  <=  (2d-1)/(2r)     and     d/(r+1)

The sequence tools (:func:`verify_shape`, :func:`convexity_scan`,
:func:`tail_onset`) look only at a computed :class:`SequenceTrace`, so the
regime predictions can be checked against exact data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import (
    DomainError,
    DuelParams,
    _QROWS,
    _check_alpha,
    _diff_from_row,
    _split,
    as_rational,
    p_trace,
)
from .polynomials import dueling_poly
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, p_quadrature

__all__ = [
    "Regime",
    "PhaseReport",
    "SequenceTrace",
    "ShapeVerdict",
    "ModeBeyondRange",
    "UnimodalityViolation",
    "thresholds",
    "classify",
    "find_mode",
    "limit_constant",
    "mode_asymptotic",
    "max_asymptotic",
    "exact_trace",
    "quadrature_trace",
    "verify_shape",
    "convexity_scan",
    "tail_onset",
    "expected_shape",
    "conjecture_scan",
    "ConjectureReport",
    "ConjectureRow",
]


class ModeBeyondRange(RuntimeError):
    """The sequence was still non-decreasing at the end of the scan."""


class UnimodalityViolation(RuntimeError):
    """A paranoid mode scan met an increase after the first decrease."""


class Regime(str, Enum):
    INCREASING_ALL = "IncreasingAll"
    DECREASING_ALL = "DecreasingAll"
    CONSTANT_HALF = "ConstantHalf"
    UNIMODAL = "Unimodal"
    INCREASING_TAIL = "IncreasingTail"
    DECREASING_TAIL = "DecreasingTail"
    DEGENERATE_INCREASING = "DegenerateIncreasing"

    @property
    def for_all_n(self) -> bool:
        """True when the claim covers every ``n >= 0``, not only large ``n``."""
        return self not in (Regime.INCREASING_TAIL, Regime.DECREASING_TAIL)

    @property
    def tail_direction(self) -> int:
        """Eventual sign of ``p_{n+1} - p_n``."""
        if self is Regime.CONSTANT_HALF:
            return 0
        if self in (Regime.DECREASING_ALL, Regime.DECREASING_TAIL, Regime.UNIMODAL):
            return -1
        return 1


def thresholds(r: int, d: int) -> dict[str, Fraction]:
    """The critical values of ``alpha`` for given ``r`` and ``d``."""
    return {
        "1/(2r)": Fraction(1, 2 * r),
        "(2d-1)/(2r)": Fraction(2 * d - 1, 2 * r),
        "d/(r+1)": Fraction(d, r + 1),
    }


@dataclass(frozen=True)
class PhaseReport:
    """Regime of ``p_n^{r,d}`` in ``n`` together with the case that decided it.

    ``family`` names the relation between ``r`` and ``d`` and ``subcase`` the
    ``alpha`` band within it (``a`` lowest).  ``refined`` marks ``d = 1``,
    where the sharper all-``n`` statements replace the large-``n`` ones.
    ``onset`` is the first ``n`` an all-``n`` claim covers: when ``r < d``
    the event is impossible (``p_n = 0``) until ``n + r >= d``, so strict
    increase starts at ``n = d - r - 1``.
    """

    alpha: Fraction
    r: int
    d: int
    regime: Regime
    family: str
    subcase: str
    thresholds: dict[str, Fraction]
    refined: bool = False
    mode: int | None = None
    note: str = ""
    onset: int = 0

    @property
    def dual(self) -> tuple[Fraction, int, int] | None:
        """Parameters of the mirror sequence ``1 - p_n^{r, r-d+1}(1 - alpha)``."""
        if self.d > self.r:
            return None
        return (1 - self.alpha, self.r, self.r - self.d + 1)

    def to_dict(self) -> dict:
        dual = self.dual
        return {
            "alpha": str(self.alpha),
            "r": self.r,
            "d": self.d,
            "regime": self.regime.value,
            "for_all_n": self.regime.for_all_n,
            "mode": self.mode,
            "family": self.family,
            "subcase": self.subcase,
            "refined_d1": self.refined,
            "thresholds": {k: str(v) for k, v in self.thresholds.items()},
            "dual": None if dual is None else {"alpha": str(dual[0]), "r": dual[1], "d": dual[2]},
            "onset": self.onset,
            "note": self.note,
        }


def classify(alpha, r: int, d: int, *, locate_mode: bool = True, mode_n_max: int = 500) -> PhaseReport:
    """Regime of ``n -> p_n^{r,d}`` from the case tables.

    Boundaries are inclusive exactly as in the case tables; ``alpha`` is
    made exact first so membership is decidable.  For the unimodal band the
    mode is located by an exact scan up to ``mode_n_max`` (``mode=None`` and
    a note if it lies further out).
    """
    alpha = _check_alpha(alpha)
    DuelParams(alpha, 0, r, d)
    th = thresholds(r, d)
    low, mid, high = th["1/(2r)"], th["(2d-1)/(2r)"], th["d/(r+1)"]

    def report(regime, family, subcase, refined=False, mode=None, note="", onset=0):
        return PhaseReport(alpha, r, d, regime, family, subcase, th, refined, mode, note, onset)

    if r <= d - 1:
        return report(
            Regime.DEGENERATE_INCREASING,
            "r<=d-1",
            "",
            note=f"p_n = 0 for n < {d - r}",
            onset=d - r - 1,
        )

    if r <= 2 * d - 2:
        if alpha < high:
            return report(Regime.INCREASING_ALL, "d<=r<=2d-2", "a")
        if alpha < mid:
            return report(Regime.INCREASING_TAIL, "d<=r<=2d-2", "b")
        return report(Regime.DECREASING_TAIL, "d<=r<=2d-2", "c")

    if r == 2 * d - 1:
        half = Fraction(1, 2)
        refined = d == 1
        if alpha < half:
            return report(Regime.INCREASING_ALL, "r=2d-1", "a", refined)
        if alpha == half:
            return report(Regime.CONSTANT_HALF, "r=2d-1", "b", refined)
        return report(Regime.DECREASING_ALL, "r=2d-1", "c", refined)

    # r >= 2d
    if d == 1:
        if alpha <= low:
            return report(Regime.INCREASING_ALL, "r>=2d", "a", True)
        if alpha <= high:
            mode, note = None, ""
            if locate_mode:
                try:
                    mode = find_mode(alpha, r, mode_n_max)
                except ModeBeyondRange:
                    note = f"mode lies beyond n={mode_n_max}"
            return report(Regime.UNIMODAL, "r>=2d", "b", True, mode, note)
        return report(Regime.DECREASING_ALL, "r>=2d", "c", True)
    if alpha <= mid:
        return report(Regime.INCREASING_TAIL, "r>=2d", "a")
    if alpha <= high:
        return report(Regime.DECREASING_TAIL, "r>=2d", "b")
    return report(Regime.DECREASING_ALL, "r>=2d", "c")


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _diff_signs(alpha: Fraction, r: int, d: int) -> Iterable[tuple[int, int]]:
    """Yield ``(n, sign(p_{n+1} - p_n))`` exactly, without building fractions."""
    a, c, _ = _split(alpha)
    for n, row in enumerate(_QROWS.iter_rows(alpha)):
        yield n, _sign(_diff_from_row(row, n, r, d, a, c))


def find_mode(alpha, r: int, n_max: int, *, d: int = 1, paranoid: bool = False) -> int:
    """Exact mode ``N``: the first ``n`` with ``p_{n+1} < p_n``.

    With ``d = 1`` the sequence is known to be unimodal in the band
    ``1/(2r) < alpha <= 1/(r+1)`` and the scan stops at ``N``.  ``paranoid``
    keeps scanning to ``n_max`` and raises :class:`UnimodalityViolation` if
    the sequence ever rises again (use it for ``d >= 2``).
    """
    alpha = _check_alpha(alpha)
    if d == 1:
        if r < 2 or not Fraction(1, 2 * r) < alpha <= Fraction(1, r + 1):
            raise DomainError(
                f"p_n^{{{r},1}} is not in its unimodal band at alpha={alpha}"
            )
    mode = None
    previous = None
    for n, s in _diff_signs(alpha, r, d):
        if n > n_max:
            break
        if mode is None:
            if s < 0:
                if n == 0:
                    raise UnimodalityViolation("sequence decreases from n=0; no mode >= 1")
                mode = n
                if not paranoid:
                    return mode
            elif paranoid and previous == 0:
                raise UnimodalityViolation(f"flat step at n={n - 1} is not followed by a decrease")
        elif s >= 0:
            raise UnimodalityViolation(f"p rises again at n={n} after mode {mode}")
        previous = s
    if mode is None:
        raise ModeBeyondRange(f"no decrease found for n <= {n_max}")
    return mode


def limit_constant(alpha, r: int, d: int) -> float:
    """``lim sqrt(n) (p_n - 1/2) = (2 alpha r - 2d + 1) / (4 sqrt(pi alpha (1-alpha)))``."""
    a = float(_check_alpha(alpha))
    return (2 * a * r - 2 * d + 1) / (4.0 * math.sqrt(math.pi * a * (1 - a)))


def _excess(alpha, r: int) -> float:
    alpha = _check_alpha(alpha)
    if r < 2:
        raise DomainError("the transition laws need r >= 2")
    return float(alpha - Fraction(1, 2 * r))


def mode_asymptotic(alpha, r: int) -> float:
    """Leading-order mode ``(r-1)/(4r) / (alpha - 1/(2r))``."""
    eps = _excess(alpha, r)
    if eps <= 0:
        raise DomainError("mode law needs alpha > 1/(2r)")
    return (r - 1) / (4.0 * r) / eps


def max_asymptotic(alpha, r: int) -> float:
    """Leading-order height of the maximum above 1/2.

    ``4/3 * sqrt(r^5 / (pi (2r-1)(r-1))) * (alpha - 1/(2r))**1.5``; zero at the
    critical point itself.
    """
    eps = _excess(alpha, r)
    if eps < 0:
        raise DomainError("maximum law needs alpha >= 1/(2r)")
    return 4.0 / 3.0 * math.sqrt(r**5 / (math.pi * (2 * r - 1) * (r - 1))) * eps**1.5


# -- traces and shapes --------------------------------------------------------


@dataclass(frozen=True)
class SequenceTrace:
    """Values ``p_n`` on consecutive ``n`` plus how they were computed."""

    alpha: Fraction
    r: int
    d: int
    points: tuple[tuple[int, object], ...]
    method: str
    precision: str = ""

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("trace n values must be strictly increasing")
        if any(not 0 <= v <= 1 for _, v in self.points):
            raise ValueError("trace values must lie in [0, 1]")

    @property
    def ns(self) -> list[int]:
        return [n for n, _ in self.points]

    @property
    def values(self) -> list:
        return [v for _, v in self.points]

    def diffs(self) -> list:
        v = self.values
        return [b - a for a, b in zip(v, v[1:])]

    def second_diffs(self) -> list:
        d = self.diffs()
        return [b - a for a, b in zip(d, d[1:])]


def exact_trace(alpha, r: int, d: int, n_to: int, n_from: int = 0) -> SequenceTrace:
    alpha = as_rational(alpha)
    vals = p_trace(alpha, r, d, n_to, n_from)
    pts = tuple(zip(range(n_from, n_to + 1), vals))
    return SequenceTrace(alpha, r, d, pts, "exact", "exact rational")


def quadrature_trace(
    alpha, r: int, d: int, n_to: int, n_from: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> SequenceTrace:
    alpha = as_rational(alpha)
    pts = tuple(
        (n, p_quadrature(DuelParams(alpha, n, r, d), cfg)) for n in range(n_from, n_to + 1)
    )
    return SequenceTrace(
        alpha, r, d, pts, "quadrature", f"double precision, target {cfg.target_abs_error:g}"
    )


@dataclass(frozen=True)
class ShapeVerdict:
    """Detected shape of a trace.

    ``kind`` is one of ``increasing``, ``decreasing``, ``constant``,
    ``unimodal``, ``other`` for :func:`verify_shape`, and ``concave``,
    ``convex``, ``affine``, ``other`` for :func:`convexity_scan`.  ``mode``
    and ``violation`` are trace ``n`` values, not list positions.
    """

    kind: str
    mode: int | None = None
    violation: int | None = None
    strict: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "violation": self.violation,
            "strict": self.strict,
            "note": self.note,
        }


def _note(trace: SequenceTrace) -> str:
    if trace.method == "exact":
        return "exact comparisons"
    return "floating-point comparisons; ties below rounding are not resolved"


def verify_shape(trace: SequenceTrace) -> ShapeVerdict:
    """Classify a trace as strictly monotone, constant or unimodal.

    Unimodal means ``a_0 < ... < a_{N-1} <= a_N > a_{N+1} > ...`` with
    ``N >= 1``; a flat step is allowed only right before the mode.
    """
    if len(trace.points) < 3:
        raise ValueError("need at least 3 points")
    ns = trace.ns
    signs = [_sign(x) for x in trace.diffs()]
    note = _note(trace)
    strict = trace.method == "exact"
    if all(s == 0 for s in signs):
        return ShapeVerdict("constant", strict=strict, note=note)
    if all(s > 0 for s in signs):
        return ShapeVerdict("increasing", strict=strict, note=note)
    if all(s < 0 for s in signs):
        return ShapeVerdict("decreasing", strict=strict, note=note)

    k = next(i for i, s in enumerate(signs) if s <= 0)
    if signs[k] == 0:
        mode_pos = k + 1
        rest = signs[k + 1:]
    else:
        mode_pos = k
        rest = signs[k:]
    if mode_pos == 0:
        # decreasing from the first step, but not strictly throughout
        bad = next(i for i, s in enumerate(signs) if s >= 0)
        return ShapeVerdict("other", violation=ns[bad], strict=strict, note=note)
    for offset, s in enumerate(rest):
        if s >= 0:
            pos = mode_pos + offset
            return ShapeVerdict("other", violation=ns[pos], strict=strict, note=note)
    return ShapeVerdict("unimodal", mode=ns[mode_pos], strict=strict, note=note)


def convexity_scan(trace: SequenceTrace) -> ShapeVerdict:
    """Sign pattern of second differences: concave, convex, affine or other."""
    if len(trace.points) < 3:
        raise ValueError("need at least 3 points")
    signs = [_sign(x) for x in trace.second_diffs()]
    ns = trace.ns
    note = _note(trace)
    strict = trace.method == "exact"
    for kind, want in (("affine", 0), ("concave", -1), ("convex", 1)):
        if all(s == want for s in signs):
            return ShapeVerdict(kind, strict=strict, note=note)
    first = signs[0]
    bad = next(i for i, s in enumerate(signs) if s != first)
    return ShapeVerdict("other", violation=ns[bad], strict=strict, note=note)


def tail_onset(trace: SequenceTrace) -> tuple[int, int]:
    """``(direction, n0)``: sign of the last difference and where it settled.

    ``n0`` is the smallest trace ``n`` such that every difference
    ``p_{m+1} - p_m`` with ``m >= n0`` has that sign.
    """
    signs = [_sign(x) for x in trace.diffs()]
    if not signs:
        raise ValueError("need at least 2 points")
    last = signs[-1]
    k = len(signs) - 1
    while k > 0 and signs[k - 1] == last:
        k -= 1
    return last, trace.ns[k]


def expected_shape(regime: Regime) -> str | None:
    """Shape an all-``n`` regime predicts for a trace starting at its onset."""
    return {
        Regime.INCREASING_ALL: "increasing",
        Regime.DEGENERATE_INCREASING: "increasing",
        Regime.DECREASING_ALL: "decreasing",
        Regime.CONSTANT_HALF: "constant",
        Regime.UNIMODAL: "unimodal",
    }.get(regime)


# -- empirical scans beyond the proved cases ----------------------------------


@dataclass(frozen=True)
class ConjectureRow:
    alpha: Fraction
    predicted: str
    observed: ShapeVerdict
    curvature: ShapeVerdict
    tail: tuple[int, int]
    proved_regime: Regime
    agrees_with_proved: bool

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "predicted": self.predicted,
            "observed": self.observed.to_dict(),
            "curvature": self.curvature.to_dict(),
            "tail_direction": self.tail[0],
            "tail_n0": self.tail[1],
            "proved_regime": self.proved_regime.value,
            "agrees_with_proved": self.agrees_with_proved,
        }


@dataclass(frozen=True)
class ConjectureReport:
    """Descriptive scan output; nothing here is asserted."""

    r: int
    d: int
    n_max: int
    rows: tuple[ConjectureRow, ...]
    coefficient_signs: tuple[tuple[Fraction, tuple[int, ...]], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "n_max": self.n_max,
            "thresholds": {k: str(v) for k, v in thresholds(self.r, self.d).items()},
            "rows": [row.to_dict() for row in self.rows],
            "coefficient_signs": [
                {"alpha": str(a), "signs": list(s)} for a, s in self.coefficient_signs
            ],
        }


def _predicted_band(alpha: Fraction, r: int, d: int) -> str:
    th = thresholds(r, d)
    if r < 2 * d:
        return "n/a"
    if alpha <= th["(2d-1)/(2r)"]:
        return "increasing"
    if alpha <= th["d/(r+1)"]:
        return "unimodal"
    return "decreasing"


def _agrees(report: PhaseReport, observed: ShapeVerdict, tail: tuple[int, int]) -> bool:
    want = expected_shape(report.regime)
    if want == "unimodal" and report.mode is None:
        # mode beyond the scanned range: only the rising part is visible
        return observed.kind == "increasing"
    if want is not None:
        if observed.kind != want:
            return False
        return report.mode is None or observed.mode == report.mode
    return tail[0] == report.regime.tail_direction


def conjecture_scan(r: int, d: int, alpha_grid: Sequence, n_max: int) -> ConjectureReport:
    """Exact traces for each ``alpha``: shape, curvature, tail and poly signs.

    ``predicted`` is the conjectured band for ``r >= 2d``: increasing up to
    ``(2d-1)/(2r)``, unimodal up to ``d/(r+1)``, decreasing above.
    """
    rows = []
    signs = []
    for alpha in alpha_grid:
        alpha = as_rational(alpha)
        trace = exact_trace(alpha, r, d, n_max)
        observed = verify_shape(trace)
        tail = tail_onset(trace)
        report = classify(alpha, r, d, mode_n_max=n_max)
        claimed = observed
        if report.onset:
            claimed = verify_shape(exact_trace(alpha, r, d, n_max, report.onset))
        rows.append(
            ConjectureRow(
                alpha,
                _predicted_band(alpha, r, d),
                observed,
                convexity_scan(trace),
                tail,
                report.regime,
                _agrees(report, claimed, tail),
            )
        )
        signs.append((alpha, dueling_poly(alpha, r, d).signs()))
    return ConjectureReport(r, d, n_max, tuple(rows), tuple(signs))
