import math
from fractions import Fraction as F

import numpy as np
import pytest

from competing_binomials.exact import DomainError, DuelParams, diff_one_step, p_exact, q_table
from competing_binomials.phases import limit_constant
from competing_binomials.quadrature import (
    KernelFns,
    QuadratureConfig,
    QuadratureError,
    _auto_nodes,
    _cutoff,
    diff_quadrature,
    p_quadrature,
    q_fourier,
)


class TestKernel:
    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.77])
    def test_identity(self, alpha):
        k = KernelFns(alpha)
        t = np.linspace(0, np.pi, 1000)
        assert np.max(np.abs(k.Q(np.cos(t / 2)) - k.phi(t))) <= 1e-15

    def test_q_shape(self):
        k = KernelFns(0.3)
        x = np.linspace(0, 1, 101)
        assert np.all(np.diff(k.Q(x)) > 0)
        assert k.Q(1.0) == 1.0
        assert k.Q(0.0) == pytest.approx((1 - 0.6) ** 2, abs=1e-16)

    def test_power_matches_naive(self):
        k = KernelFns(0.2)
        t = np.linspace(0, np.pi, 50)
        assert np.allclose(k.phi_pow(t, 7), k.phi(t) ** 7, rtol=1e-14, atol=0)


class TestConfig:
    def test_defaults(self):
        cfg = QuadratureConfig()
        assert cfg.rule == "midpoint" and cfg.target_abs_error == 1e-13

    @pytest.mark.parametrize(
        "kw", [dict(rule="simpson"), dict(node_count=0), dict(target_abs_error=0.0)]
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            QuadratureConfig(**kw)

    @pytest.mark.parametrize("n, r, d", [(0, 1, 1), (40, 5, 5), (1000, 3, 2)])
    def test_auto_size_bound(self, n, r, d):
        # at least (n + r + d)/2 + 8 nodes on the full interval
        assert _auto_nodes("midpoint", n + r + d, math.pi) >= (n + r + d) / 2 + 8

    def test_cutoff(self):
        assert _cutoff(0.3, 0) == math.pi
        assert _cutoff(0.3, 100) == math.pi
        t = _cutoff(0.3, 10**5)
        assert t < 0.2
        assert float(KernelFns(0.3).phi(t)) ** 10**5 == pytest.approx(1e-320, rel=1e-6)


class TestPQuadrature:
    def test_fair(self):
        assert p_quadrature(DuelParams(F(1, 2), 25, 1, 1)) == pytest.approx(0.5, abs=1e-14)

    def test_small_example(self):
        assert p_quadrature(DuelParams(F(3, 10), 1, 1, 1)) == pytest.approx(0.384, abs=1e-12)

    def test_against_exact(self):
        p = DuelParams(F(7, 10), 20, 2, 3)
        assert abs(p_quadrature(p) - float(p_exact(p))) <= 1e-12

    @pytest.mark.parametrize("rule", ["midpoint", "gauss-legendre"])
    def test_rules_agree(self, rule):
        p = DuelParams(F(2, 5), 30, 4, 2)
        assert abs(p_quadrature(p, QuadratureConfig(rule=rule)) - float(p_exact(p))) <= 1e-12

    def test_untruncated_large_n(self):
        p = DuelParams(F(3, 10), 20000, 2, 1)
        full = QuadratureConfig(truncate=False)
        assert p_quadrature(p) == pytest.approx(p_quadrature(p, full), abs=1e-15)

    def test_nonconvergence_reported(self):
        cfg = QuadratureConfig(node_count=4)
        with pytest.raises(QuadratureError):
            p_quadrature(DuelParams(F(3, 10), 60, 2, 1), cfg)

    def test_sqrt_law(self):
        a, r, d = F(3, 10), 2, 1
        n = 10**6
        v = math.sqrt(n) * (p_quadrature(DuelParams(a, n, r, d)) - 0.5)
        assert v / limit_constant(a, r, d) == pytest.approx(1, abs=1e-4)


class TestDiffQuadrature:
    def test_fair_zero(self):
        assert abs(diff_quadrature(DuelParams(F(1, 2), 10, 1, 1))) <= 1e-14

    def test_small(self):
        p = DuelParams(F(3, 10), 5, 1, 1)
        v = diff_quadrature(p)
        assert v > 0
        assert abs(v - float(diff_one_step(p))) <= 1e-12

    def test_unimodal_sign(self):
        # alpha = 1/5 is in the unimodal band for r = 3; by n = 30 it decreases
        p = DuelParams(F(1, 5), 30, 3, 1)
        assert diff_quadrature(p) < 0 and diff_one_step(p) < 0


class TestQFourier:
    def test_values(self):
        assert q_fourier(1, 0, 0.3) == pytest.approx(0.58, abs=1e-13)
        assert q_fourier(2, 0, 0.5) == pytest.approx(0.375, abs=1e-13)
        assert abs(q_fourier(5, 6, 0.5)) <= 1e-13

    def test_against_table(self):
        q = q_table(40, F(3, 10))
        for k in range(-41, 42):
            assert q_fourier(40, k, F(3, 10)) == pytest.approx(float(q[k]), abs=1e-12)

    def test_symmetry(self):
        assert q_fourier(17, 5, 0.2) == q_fourier(17, -5, 0.2)

    @pytest.mark.parametrize("args", [(-1, 0, 0.3), (3, 0, 1.0), (3, 0, 0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            q_fourier(*args)
