"""Exact and numerical tools for the competing-binomials probability p_n^{r,d}.

``p_n^{r,d} = P{S_{n+r} >= S'_n + d}`` where ``S_m`` and ``S'_m`` count heads in
``m`` independent tosses of the same coin with head probability ``alpha``.
"""

from .exact import (
    N_MAX_EXACT,
    DomainError,
    DuelParams,
    QTable,
    as_rational,
    binom_pmf,
    diff_one_step,
    diff_trace,
    identity_comb2,
    local_limit_identity,
    p_dual,
    p_exact,
    p_trace,
    q_table,
)
from .montecarlo import Estimate, SimConfig, mc_double_exp, mc_duel
from .phases import (
    ModeBeyondRange,
    PhaseReport,
    Regime,
    SequenceTrace,
    ShapeVerdict,
    UnimodalityViolation,
    classify,
    conjecture_scan,
    convexity_scan,
    exact_trace,
    find_mode,
    limit_constant,
    max_asymptotic,
    mode_asymptotic,
    quadrature_trace,
    tail_onset,
    thresholds,
    verify_shape,
)
from .polynomials import (
    ChebU,
    EvenPoly,
    cheb_u,
    count_roots,
    dueling_poly,
    locate_root,
    poly_at_one,
    poly_deriv_at_one_critical,
    poly_via_chebyshev,
    poly_via_derivatives,
)
from .quadrature import (
    KernelFns,
    QuadratureConfig,
    QuadratureError,
    diff_quadrature,
    p_quadrature,
    q_fourier,
)

__version__ = "0.1.0"
