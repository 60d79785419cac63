import math
from fractions import Fraction as F

import pytest

from competing_binomials.exact import DomainError, DuelParams, p_exact, p_trace
from competing_binomials.phases import (
    ModeBeyondRange,
    Regime,
    SequenceTrace,
    UnimodalityViolation,
    classify,
    conjecture_scan,
    convexity_scan,
    exact_trace,
    expected_shape,
    find_mode,
    limit_constant,
    max_asymptotic,
    mode_asymptotic,
    quadrature_trace,
    tail_onset,
    thresholds,
    verify_shape,
)


def trace_of(values, method="exact"):
    return SequenceTrace(F(1, 2), 1, 1, tuple(enumerate(values)), method)


class TestThresholds:
    def test_values(self):
        assert thresholds(5, 2) == {"1/(2r)": F(1, 10), "(2d-1)/(2r)": F(3, 10), "d/(r+1)": F(1, 3)}


class TestClassify:
    def test_constant(self):
        rep = classify(F(1, 2), 1, 1)
        assert rep.regime is Regime.CONSTANT_HALF and rep.refined

    def test_unimodal(self):
        rep = classify(F(1, 5), 3, 1)
        assert rep.regime is Regime.UNIMODAL
        assert rep.mode is not None and rep.mode >= 1

    def test_middle_family_subcase_a(self):
        rep = classify(F(2, 5), 5, 4)
        assert rep.regime is Regime.INCREASING_ALL
        assert (rep.family, rep.subcase) == ("d<=r<=2d-2", "a")

    def test_r_2d_minus_1_fair_is_constant(self):
        assert classify(F(1, 2), 3, 2).regime is Regime.CONSTANT_HALF

    def test_duality_note(self):
        rep = classify(F(3, 5), 5, 4)
        assert rep.dual == (F(2, 5), 5, 2)
        assert rep.to_dict()["dual"] == {"alpha": "2/5", "r": 5, "d": 2}

    @pytest.mark.parametrize(
        "alpha, r, want",
        [
            (F(1, 6), 3, Regime.INCREASING_ALL),
            (F(1, 4), 3, Regime.UNIMODAL),
            (F(1, 4) + F(1, 10**9), 3, Regime.DECREASING_ALL),
            (F(1, 6) + F(1, 10**9), 3, Regime.UNIMODAL),
        ],
    )
    def test_d1_boundaries_inclusive(self, alpha, r, want):
        assert classify(alpha, r, 1, locate_mode=False).regime is want

    @pytest.mark.parametrize(
        "alpha, want",
        [(F(3, 10), Regime.INCREASING_TAIL), (F(3, 10) + F(1, 10**6), Regime.DECREASING_TAIL),
         (F(1, 3), Regime.DECREASING_TAIL), (F(1, 3) + F(1, 10**6), Regime.DECREASING_ALL)],
    )
    def test_r_ge_2d_boundaries(self, alpha, want):
        assert classify(alpha, 5, 2).regime is want

    def test_degenerate(self):
        rep = classify(F(3, 10), 2, 4)
        assert rep.regime is Regime.DEGENERATE_INCREASING
        assert rep.onset == 1
        assert p_exact(DuelParams(F(3, 10), 1, 2, 4)) == 0
        assert p_exact(DuelParams(F(3, 10), 2, 2, 4)) > 0

    def test_mode_beyond_range_noted(self):
        rep = classify(F(1, 4) + F(1, 1000), 2, 1, mode_n_max=5)
        assert rep.mode is None and "beyond" in rep.note

    def test_accepts_decimal_string(self):
        assert classify("0.2", 3, 1).alpha == F(1, 5)

    def test_to_dict_is_json_ready(self):
        d = classify(F(1, 5), 3, 1).to_dict()
        assert d["regime"] == "Unimodal" and d["thresholds"]["d/(r+1)"] == "1/4"

    @pytest.mark.parametrize("args", [(F(0), 1, 1), (F(1, 2), 0, 1), (F(1, 2), 1, 0)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            classify(*args)


class TestFindMode:
    def test_mode_at_least_one(self):
        assert find_mode(F(1, 4), 3, 50) >= 1

    def test_is_argmax(self):
        a = F(1, 4) - F(1, 1000)
        mode = find_mode(a, 3, 500)
        vals = p_trace(a, 3, 1, mode + 10)
        assert max(range(len(vals)), key=lambda i: (vals[i], i)) == mode

    def test_near_critical(self):
        mode = find_mode(F(1, 6) + F(1, 400), 3, 200)
        assert 0.8 <= mode / (200 / 3) <= 1.2

    def test_flat_top(self):
        # alpha = 1/(r+1): p_0 = p_1, so the mode is n = 1
        a = F(1, 4)
        assert p_trace(a, 3, 1, 1) == [p_exact(DuelParams(a, 0, 3, 1))] * 2
        assert find_mode(a, 3, 10) == 1

    def test_beyond_range(self):
        with pytest.raises(ModeBeyondRange):
            find_mode(F(1, 4) + F(1, 1000), 2, 5)

    def test_outside_band(self):
        with pytest.raises(DomainError):
            find_mode(F(1, 10), 3, 50)

    def test_paranoid(self):
        assert find_mode(F(1, 5), 3, 100, paranoid=True) == find_mode(F(1, 5), 3, 100)

    def test_paranoid_general_d(self):
        assert find_mode(F(39, 100), 4, 80, d=2, paranoid=True) >= 1

    def test_violation_from_start(self):
        with pytest.raises(UnimodalityViolation):
            find_mode(F(7, 10), 4, 20, d=2)


class TestAsymptotics:
    def test_limit_constant(self):
        assert limit_constant(F(1, 2), 1, 1) == 0
        assert limit_constant(F(1, 6), 3, 1) == 0
        want = (0.6 - 1) / (4 * math.sqrt(math.pi) * math.sqrt(0.21))
        assert limit_constant(F(3, 10), 1, 1) == pytest.approx(want, rel=1e-14)
        assert want == pytest.approx(-0.12312, abs=1e-5)

    def test_mode_law(self):
        assert mode_asymptotic(F(1, 4) + F(1, 100), 2) == pytest.approx(12.5)
        assert mode_asymptotic(F(1, 6) + F(1, 400), 3) == pytest.approx(200 / 3)
        assert mode_asymptotic(F(1, 4) + F(1, 10**9), 2) > 1e7

    def test_max_law(self):
        assert max_asymptotic(F(1, 6), 3) == 0
        want = 4 / 3 * math.sqrt(243 / (10 * math.pi)) * 1e-3
        assert max_asymptotic(F(1, 6) + F(1, 100), 3) == pytest.approx(want)
        assert max_asymptotic(F(26, 100), 2) > 0

    @pytest.mark.parametrize("fn", [mode_asymptotic, max_asymptotic])
    def test_domain(self, fn):
        with pytest.raises(DomainError):
            fn(F(1, 10), 3)
        with pytest.raises(DomainError):
            fn(F(1, 3), 1)

    def test_mode_law_rejects_critical(self):
        with pytest.raises(DomainError):
            mode_asymptotic(F(1, 6), 3)


class TestTraces:
    def test_validation(self):
        with pytest.raises(ValueError):
            SequenceTrace(F(1, 2), 1, 1, ((0, F(1, 2)), (0, F(1, 2))), "exact")
        with pytest.raises(ValueError):
            SequenceTrace(F(1, 2), 1, 1, ((0, F(3, 2)),), "exact")

    def test_exact_and_quadrature_agree(self):
        ex = exact_trace(F(3, 10), 2, 1, 30, 5)
        qu = quadrature_trace(F(3, 10), 2, 1, 30, 5)
        assert ex.ns == qu.ns == list(range(5, 31))
        assert max(abs(float(a) - b) for a, b in zip(ex.values, qu.values)) <= 1e-12

    def test_differences(self):
        tr = trace_of([F(0), F(1, 4), F(1, 3), F(1, 3)])
        assert tr.diffs() == [F(1, 4), F(1, 12), 0]
        assert tr.second_diffs() == [F(-1, 6), F(-1, 12)]


class TestVerifyShape:
    def test_increasing(self):
        assert verify_shape(exact_trace(F(3, 10), 1, 1, 60)).kind == "increasing"

    def test_unimodal_interior(self):
        v = verify_shape(exact_trace(F(1, 5), 3, 1, 60))
        assert v.kind == "unimodal" and 1 <= v.mode < 60

    def test_constant(self):
        assert verify_shape(trace_of([F(1, 2)] * 5)).kind == "constant"

    def test_flat_then_down(self):
        v = verify_shape(trace_of([F(1, 5), F(1, 2), F(1, 2), F(1, 3)]))
        assert (v.kind, v.mode) == ("unimodal", 2)

    def test_flat_at_start_is_mode_one(self):
        v = verify_shape(trace_of([F(1, 2), F(1, 2), F(1, 3), F(1, 4)]))
        assert (v.kind, v.mode) == ("unimodal", 1)

    @pytest.mark.parametrize(
        "values, at",
        [
            ([F(1, 5), F(1, 2), F(1, 3), F(2, 5)], 2),
            ([F(1, 2), F(1, 3), F(1, 3), F(1, 4)], 1),
            ([F(1, 5), F(1, 2), F(1, 2), F(1, 2)], 2),
        ],
    )
    def test_other(self, values, at):
        v = verify_shape(trace_of(values))
        assert (v.kind, v.violation) == ("other", at)

    def test_float_trace_not_strict(self):
        assert verify_shape(trace_of([0.1, 0.2, 0.3], "quadrature")).strict is False

    def test_too_short(self):
        with pytest.raises(ValueError):
            verify_shape(trace_of([F(1, 2)] * 2))


class TestConvexity:
    def test_two_player(self):
        assert convexity_scan(exact_trace(F(3, 10), 1, 1, 100)).kind == "concave"
        assert convexity_scan(exact_trace(F(7, 10), 1, 1, 100)).kind == "convex"
        assert convexity_scan(exact_trace(F(1, 2), 1, 1, 10)).kind == "affine"

    def test_below_critical_is_concave(self):
        assert convexity_scan(exact_trace(F(1, 10), 3, 1, 100)).kind == "concave"

    def test_other(self):
        v = convexity_scan(trace_of([F(0), F(1, 2), F(3, 4), F(1)]))
        assert (v.kind, v.violation) == ("other", 1)


class TestTailOnset:
    def test_increasing_tail(self):
        direction, n0 = tail_onset(exact_trace(F(17, 25), 5, 4, 60))
        assert direction == 1 and 0 < n0 <= 40
        assert classify(F(17, 25), 5, 4).regime.tail_direction == 1

    def test_constant(self):
        assert tail_onset(trace_of([F(1, 2)] * 4)) == (0, 0)

    def test_expected_shape(self):
        assert expected_shape(Regime.INCREASING_TAIL) is None
        assert expected_shape(Regime.UNIMODAL) == "unimodal"


class TestConjectureScan:
    def test_r4_d2(self):
        grid = [F(1, 5), F(39, 100), F(3, 5)]
        rep = conjecture_scan(4, 2, grid, 80)
        kinds = [(row.predicted, row.observed.kind) for row in rep.rows]
        assert kinds == [("increasing", "increasing"), ("unimodal", "unimodal"), ("decreasing", "decreasing")]
        assert all(row.agrees_with_proved for row in rep.rows)
        assert [a for a, _ in rep.coefficient_signs] == grid
        assert rep.to_dict()["thresholds"]["(2d-1)/(2r)"] == "3/8"

    def test_r2_d1_matches_classify(self):
        grid = [F(k, 20) for k in range(1, 20)]
        rep = conjecture_scan(2, 1, grid, 60)
        assert all(row.agrees_with_proved for row in rep.rows)
