"""Closed-form minimum MSEs, optimal weights, efficiency and dominance."""

from __future__ import annotations

import math

import numpy as np
import pytest

from medaux import (
    DegenerateOptimumError,
    DegeneratePivotWarning,
    DomainError,
    EstimatorSpec,
    InfiniteEfficiencyWarning,
    MedianParams,
    UnknownEstimatorError,
    analytic_bias,
    dominance_checks,
    error_moments,
    min_mse_difference,
    min_mse_ss1,
    min_mse_ss2,
    min_mse_ss3,
    min_mse_ss4,
    min_mse_tm,
    min_mse_tmq,
    pre,
    quadratic_weights,
    resolve_weights,
    table_rows,
    tm_min_from_weights,
    tm_mse_at,
)
from medaux import preset
from medaux.mse import TABLE_ALL_IDS

from conftest import draw_params


def _flat_params() -> MedianParams:
    """Valid params with coinciding medians (degenerate pivot R = 1)."""
    return MedianParams.from_primitives(1000, 100, 80.0, 80.0, 0.01, 0.012, 0.3)


class TestMinMseDifference:
    def test_reference_values(self, pop1, pop2):
        assert abs(min_mse_difference(pop1) - 552636.13) / 552636.13 < 5e-4
        assert abs(min_mse_difference(pop2) - 508766.02) / 508766.02 < 5e-4

    def test_perfect_concordance_vanishes(self):
        for rho in (-1.0, 1.0):
            p = MedianParams.from_primitives(100, 10, 50.0, 40.0, 0.01, 0.01, rho)
            assert min_mse_difference(p) == 0.0

    def test_strictly_decreasing_in_concordance(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            base = draw_params(rng)
            lo, hi = sorted(abs(rng.uniform(-0.99, 0.99, size=2)))
            if lo == hi:
                continue
            mk = lambda rho: MedianParams.from_primitives(
                base.N, base.n, base.median_y, base.median_x,
                base.fy_at_median, base.fx_at_median, rho,
            )
            assert min_mse_difference(mk(hi)) < min_mse_difference(mk(lo))


class TestShrinkageMinima:
    def test_ss2_reference_values(self, pop1, pop2):
        assert abs(min_mse_ss2(pop1) - 489395.24) / 489395.24 < 5e-4
        assert abs(min_mse_ss2(pop2) - 454675.78) / 454675.78 < 5e-4

    def test_ss3_reference_values(self, pop1, pop2):
        assert abs(min_mse_ss3(pop1) - 3229.34) / 3229.34 < 5e-4
        assert abs(min_mse_ss3(pop2) - 51355.17) / 51355.17 < 5e-4

    def test_ss1_reference_values_with_wider_tolerance(self, pop1, pop2):
        # input rounding in the published table leaves ~0.8% drift
        assert abs(min_mse_ss1(pop1) - 485969.06) / 485969.06 < 1e-2
        assert abs(min_mse_ss1(pop2) - 495484.97) / 495484.97 < 1e-2

    def test_ss4_reference_values_at_unit_exponent(self, pop1, pop2):
        assert abs(min_mse_ss4(pop1, delta=1.0) - 480458.97) / 480458.97 < 5e-4
        assert abs(min_mse_ss4(pop2, delta=1.0) - 454616.15) / 454616.15 < 5e-4

    def test_unit_exponent_recovered_by_root_find(self, pop1):
        """Bisection on delta against the published value lands at 1."""
        target = 480458.97
        lo, hi = 0.5, 1.5  # min_mse_ss4 is strictly decreasing in delta here
        for _ in range(80):
            mid = (lo + hi) / 2
            if min_mse_ss4(pop1, delta=mid) > target:
                lo = mid
            else:
                hi = mid
        assert abs((lo + hi) / 2 - 1.0) < 0.01

    def test_ss4_precondition(self, pop1):
        with pytest.raises(DomainError):
            min_mse_ss4(pop1, delta=10.0)

    def test_ss3_degenerate_pivot_warns_and_returns_zero(self):
        with pytest.warns(DegeneratePivotWarning):
            assert min_mse_ss3(_flat_params()) == 0.0

    def test_ss2_below_difference_bound(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            p = draw_params(rng)
            if min_mse_difference(p) > 0:
                assert min_mse_ss2(p) < min_mse_difference(p)


class TestQuadraticWeights:
    def test_pop1_constants(self, pop1):
        qw = quadratic_weights(pop1, alpha=1.0, eta=1.0, lam=0.0)
        assert abs(qw.A - 1651542) / 1651542 < 5e-4
        assert abs(qw.B - 565442) / 565442 < 5e-4
        assert abs(qw.C - (-787104)) / 787104 < 5e-4

    def test_zero_gap_zero_weights(self):
        qw = quadratic_weights(_flat_params(), alpha=1.0, eta=0.0, lam=1.0)
        assert qw.w1_opt == 0.0 and qw.w2_opt == 0.0

    def test_B_is_auxiliary_median_variance(self, pop1):
        qw = quadratic_weights(pop1, alpha=0.3, eta=2.0, lam=0.4)
        m = error_moments(pop1)
        assert math.isclose(qw.B, pop1.median_x**2 * m.var_e1, rel_tol=1e-15)

    def test_grid_never_beats_closed_form(self):
        """Coarse-plus-refined grid search over (w1, w2) never undercuts the
        closed-form minimum by more than 1e-6 relative."""
        rng = np.random.default_rng(4)
        for _ in range(200):
            p = draw_params(rng)
            alpha = float(rng.uniform(-2, 2))
            eta = float(rng.uniform(-2, 2))
            lam = float(rng.uniform(0.1, 3.0))
            qw = quadratic_weights(p, alpha=alpha, eta=eta, lam=lam)
            assert qw.A >= p.median_gap**2
            assert qw.B > 0
            closed = tm_min_from_weights(p, alpha=alpha, eta=eta, lam=lam)
            w = np.linspace(-2.0, 2.0, 101)
            w1, w2 = np.meshgrid(w, w, indexing="ij")
            for _ in range(4):
                grid = tm_mse_at(p, w1, w2, alpha=alpha, eta=eta, lam=lam)
                i, j = np.unravel_index(np.argmin(grid), grid.shape)
                c1, c2 = w1[i, j], w2[i, j]
                span = (w1.max() - w1.min()) / 10
                w1, w2 = np.meshgrid(
                    np.linspace(c1 - span, c1 + span, 41),
                    np.linspace(c2 - span, c2 + span, 41),
                    indexing="ij",
                )
            best = float(grid.min())
            assert best >= closed - 1e-6 * max(abs(closed), 1e-12)

    def test_degenerate_optimum_detected(self):
        # zero gap plus perfect concordance collapses A*B - C^2 to zero
        p = MedianParams.from_primitives(100, 10, 50.0, 50.0, 0.01, 0.01, 1.0)
        with pytest.raises(DegenerateOptimumError):
            quadratic_weights(p, alpha=p.k_c, eta=0.0, lam=1.0)


class TestTwoWeightClassMinimum:
    def test_reference_values(self, pop1, pop2):
        assert abs(min_mse_tm(pop1) - 3229.34) / 3229.34 < 5e-4
        assert abs(min_mse_tm(pop2) - 51355.17) / 51355.17 < 5e-4

    def test_equals_convex_shrinkage_minimum(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            p = draw_params(rng)
            tm, ss3 = min_mse_tm(p), min_mse_ss3(p)
            assert abs(tm - ss3) <= 1e-12 * max(abs(ss3), 1e-300)

    def test_independent_of_class_scalars(self, pop1, pop2):
        """The weight-elimination route evaluated at 50 random scalar triples
        returns one value, matching the closed form to 1e-9 relative."""
        rng = np.random.default_rng(6)
        for p in (pop1, pop2):
            reference = min_mse_tm(p)
            values = []
            for _ in range(50):
                alpha = float(rng.uniform(-2, 2))
                eta = float(rng.uniform(-2, 2))
                lam = float(rng.uniform(0.1, 3.0))
                values.append(tm_min_from_weights(p, alpha=alpha, eta=eta, lam=lam))
            spread = (max(values) - min(values)) / reference
            assert spread < 1e-9
            assert abs(values[0] - reference) / reference < 1e-9

    def test_degenerate_pivot(self):
        with pytest.warns(DegeneratePivotWarning):
            assert min_mse_tm(_flat_params()) == 0.0


class TestSingleWeightClassMinimum:
    def test_pop1_preset7(self, pop1):
        got = min_mse_tmq(pop1, alpha=0.0, eta=pop1.median_x, lam=pop1.rho_c)
        # frozen from direct b^2 W/(b^2+W) arithmetic; published table prints 3232.56
        assert abs(got - 3232.26) < 0.05
        assert abs(got - 3232.56) / 3232.56 < 0.015

    def test_pop1_preset4(self, pop1):
        got = min_mse_tmq(pop1, alpha=1.0, eta=1.0, lam=0.0)
        # frozen from direct arithmetic; published table prints 3267.43
        assert abs(got - 3242.61) < 0.05
        assert abs(got - 3267.43) / 3267.43 < 0.015

    def test_slope_minimised_at_concordance_ratio(self):
        """Grid search over the total slope confirms the optimum at k_c."""
        rng = np.random.default_rng(7)
        for _ in range(25):
            p = draw_params(rng)
            grid = np.linspace(p.k_c - 0.5, p.k_c + 0.5, 10001)
            values = np.array(
                [min_mse_tmq(p, alpha=float(a), eta=0.0, lam=1.0) for a in grid]
            )
            assert abs(grid[int(np.argmin(values))] - p.k_c) <= 1e-4 + 1e-12

    def test_zero_gap_returns_zero(self):
        with pytest.warns(DegeneratePivotWarning):
            assert min_mse_tmq(_flat_params(), alpha=1.0, eta=0.0, lam=1.0) == 0.0

    def test_matches_single_weight_grid(self, pop1):
        closed = min_mse_tmq(pop1, alpha=1.0, eta=1.0, lam=1.0)
        w1 = np.linspace(-2, 2, 4001)
        coarse = tm_mse_at(pop1, w1, 0.0, alpha=1.0, eta=1.0, lam=1.0)
        c = w1[int(np.argmin(coarse))]
        w1 = np.linspace(c - 2e-3, c + 2e-3, 401)
        refined = tm_mse_at(pop1, w1, 0.0, alpha=1.0, eta=1.0, lam=1.0)
        assert float(refined.min()) >= closed - 1e-9 * closed
        assert abs(float(refined.min()) - closed) / closed < 1e-6


class TestAnalyticBias:
    def test_exact_weights_unbiased(self, pop1):
        spec = EstimatorSpec(
            family="ratio_exp", w1=1.0, w2=0.0, alpha=0.0, eta=0.0, lam=1.0
        )
        assert analytic_bias(spec, pop1) == 0.0

    def test_convex_shrinkage_unbiased_at_unit_weight(self, pop1):
        spec = EstimatorSpec(family="shrink_convex", d1=1.0, d2=0.37)
        assert analytic_bias(spec, pop1) == 0.0

    def test_ratio_bias_value(self, pop1):
        got = analytic_bias(EstimatorSpec(family="ratio"), pop1)
        expected = pop1.median_y * pop1.gamma * (
            pop1.cv_x**2 - pop1.rho_c * pop1.cv_y * pop1.cv_x
        )
        assert math.isclose(got, expected, rel_tol=1e-12)
        assert abs(got - 246.83) < 0.01

    def test_free_weights_rejected(self, pop1):
        with pytest.raises(DomainError):
            analytic_bias(preset("M_d", pop1), pop1)


class TestPre:
    def test_equal_is_hundred(self):
        assert pre(565443.57, 565443.57) == 100.0

    def test_division(self):
        assert math.isclose(pre(3229.34, 565443.57), 100 * 565443.57 / 3229.34)

    def test_zero_mse_flagged(self):
        with pytest.warns(InfiniteEfficiencyWarning):
            assert pre(0.0, 1.0) == math.inf


class TestDominance:
    def test_both_populations_pass_all_checks(self, pop1, pop2):
        for p in (pop1, pop2):
            results = dominance_checks(p)
            assert all(r.satisfied for r in results)

    def test_margins_match_table_differences(self, pop1):
        results = {r.name: r for r in dominance_checks(pop1)}
        expected = min_mse_difference(pop1) - min_mse_tm(pop1)
        assert math.isclose(
            results["tm_vs_difference"].margin, expected, rel_tol=1e-12
        )

    def test_degenerate_pivot_flagged(self):
        p = _flat_params()
        results = {r.name: r for r in dominance_checks(p)}
        check = results["tm_vs_difference"]
        assert check.note.startswith("degenerate pivot")
        # the two-weight side collapses to zero, so the margin is the bound itself
        assert math.isclose(check.margin, min_mse_difference(p), rel_tol=1e-12)

    def test_preset_scalars_accepted(self, pop1):
        spec = preset("t_mq7", pop1)
        results = dominance_checks(
            pop1, tmq_scalars=(spec.alpha, spec.eta, spec.lam)
        )
        assert all(r.satisfied for r in results)


class TestTableRows:
    def test_all_row_set(self, pop1):
        rows = table_rows(pop1)
        assert tuple(r.estimator for r in rows) == TABLE_ALL_IDS

    def test_two_weight_and_convex_rows_agree(self, pop2):
        rows = {r.estimator: r for r in table_rows(pop2, ["t_m", "M_d3"])}
        assert rows["t_m"].analytic_mse == rows["M_d3"].analytic_mse

    def test_baseline_row_pre_is_hundred(self, pop1):
        row = table_rows(pop1, ["M_y"])[0]
        assert row.pre_vs_sample_median == 100.0
        assert row.analytic_bias == 0.0

    def test_unknown_estimator(self, pop1):
        with pytest.raises(UnknownEstimatorError):
            table_rows(pop1, ["nope"])

    def test_classical_rows_collapse_to_difference_bound(self, pop1):
        for name in ("M_1", "M_2", "M_3", "M_4", "M_5", "M_6", "M_7", "M_lr"):
            row = table_rows(pop1, [name])[0]
            assert math.isclose(
                row.analytic_mse, min_mse_difference(pop1), rel_tol=1e-12
            )

    def test_resolved_bias_columns(self, pop1):
        rows = {r.estimator: r for r in table_rows(pop1, ["M_d2", "M_d3", "t_mq7"])}
        spec2 = resolve_weights(preset("M_d2", pop1), pop1)
        assert math.isclose(
            rows["M_d2"].analytic_bias, (spec2.d1 - 1.0) * pop1.median_y, rel_tol=1e-12
        )
        assert rows["M_d3"].analytic_bias is not None
        assert rows["t_mq7"].analytic_bias is not None
