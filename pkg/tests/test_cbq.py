"""Tests for the Confidently Bounded Quantile pipeline."""

import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from etzplan.cbq import (
    ConfidentEfficacy,
    DiscountPlan,
    Phase3Design,
    cbq_closed_form,
    cbq_monte_carlo,
    classical_sample_size,
    complete_discount_plan,
    confident_efficacy,
    min_n_for_positive_cbq,
    transition_assessment,
)
from etzplan.errors import DomainError, InfeasiblePlan
from etzplan.etz import Direction, pooled_change_sd
from etzplan.numerics import RngStream, std_normal_quantile, student_t_quantile

SIGMA_POOLED = math.sqrt(92.365)

WORKED_L = ConfidentEfficacy(value=0.26, level=0.95, df=1959, se_pooled=math.sqrt(2) * 0.32)


def design(n: int, seed: int = 7, reps: int = 10000, sigma: float = SIGMA_POOLED) -> Phase3Design:
    return Phase3Design(n_rx=n, n_c=n, sigma_pooled=sigma, seed=seed, reps=reps)


class TestDiscountPlan:
    def test_worked_example(self):
        plan = complete_discount_plan(0.80, d_phase2=0.45)
        assert plan.d_phase3 == pytest.approx(0.3421052631578949, abs=1e-9)
        assert plan.d_phase3 == pytest.approx(0.3421, abs=1e-4)

    def test_boundary_plan(self):
        plan = complete_discount_plan(0.25, d_phase2=0.0)
        assert plan.d_phase3 == pytest.approx(0.0, abs=1e-12)

    def test_second_worked_example(self):
        plan = complete_discount_plan(0.76, d_phase2=0.45)
        assert plan.d_phase3 == pytest.approx(0.30, abs=1e-9)

    def test_solving_for_phase2(self):
        plan = complete_discount_plan(0.80, d_phase3=0.3421052631578949)
        assert plan.d_phase2 == pytest.approx(0.45, abs=1e-9)

    def test_infeasible_combinations(self):
        with pytest.raises(InfeasiblePlan):
            complete_discount_plan(0.90, d_phase2=0.0)
        with pytest.raises(InfeasiblePlan):
            complete_discount_plan(0.20, d_phase2=0.0)

    def test_requires_exactly_one_known(self):
        with pytest.raises(DomainError):
            complete_discount_plan(0.8)
        with pytest.raises(DomainError):
            complete_discount_plan(0.8, d_phase2=0.45, d_phase3=0.3421)

    def test_inconsistent_plan_rejected(self):
        with pytest.raises(DomainError):
            DiscountPlan(gamma=0.8, d_phase2=0.45, d_phase3=0.30)

    @given(st.floats(0.3, 0.95), st.data())
    @settings(max_examples=150)
    def test_product_invariant(self, gamma, data):
        lo = max(0.0, gamma - 0.5) + 1e-6
        hi = min(0.5 - 1e-9, 2 * gamma - 0.5) - 1e-6
        assume(lo < hi)
        d2 = data.draw(st.floats(lo, hi))
        plan = complete_discount_plan(gamma, d_phase2=d2)
        assert (plan.d_phase2 + 0.5) * (plan.d_phase3 + 0.5) == pytest.approx(gamma, abs=1e-9)


class TestConfidentEfficacy:
    def test_worked_example(self):
        L = confident_efficacy(1.0, 0.32, 0.32, 981, 980, 0.45)
        assert L.se_pooled == pytest.approx(0.45254833995939045, abs=1e-12)
        assert L.df == 1959
        assert L.level == pytest.approx(0.95)
        assert L.value == pytest.approx(0.255272048398, abs=1e-9)
        assert L.value == pytest.approx(0.26, abs=0.01)

    def test_zero_discount_returns_estimate(self):
        L = confident_efficacy(1.0, 0.32, 0.32, 981, 980, 0.0)
        assert L.value == 1.0

    def test_vanishing_se(self):
        L = confident_efficacy(1.0, 1e-13, 1e-13, 981, 980, 0.45)
        assert L.value == pytest.approx(1.0, abs=1e-9)

    def test_lower_is_better_flips_sign(self):
        flipped = confident_efficacy(-1.0, 0.32, 0.32, 981, 980, 0.45, Direction.LowerIsBetter)
        straight = confident_efficacy(1.0, 0.32, 0.32, 981, 980, 0.45)
        assert flipped.value == straight.value

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            confident_efficacy(1.0, 0.0, 0.32, 981, 980, 0.45)
        with pytest.raises(DomainError):
            confident_efficacy(1.0, 0.32, 0.32, 1, 980, 0.45)
        with pytest.raises(DomainError):
            confident_efficacy(1.0, 0.32, 0.32, 981, 980, 0.5)

    def test_calibration(self):
        # The limit undershoots the truth with frequency level (up to the
        # t-vs-normal gap, far below Monte-Carlo resolution here).
        n = 10**5
        theta = 1.0
        se = 0.45254833995939045
        t_mult = student_t_quantile(0.95, 1959)
        estimates = theta + se * RngStream(404, 0).normals(n)
        covered = (estimates - t_mult * se <= theta).mean()
        assert abs(covered - 0.95) < 3 * math.sqrt(0.95 * 0.05 / n)


class TestCbqClosedForm:
    def test_worked_negative_case(self):
        value = cbq_closed_form(WORKED_L, design(1000), 0.30)
        assert value == pytest.approx(-0.1017307252, abs=1e-9)
        assert value == pytest.approx(-0.10, abs=0.01)

    def test_doubled_arms_turn_positive(self):
        value = cbq_closed_form(WORKED_L, design(2000), 0.30)
        assert value == pytest.approx(0.004217751254, abs=1e-9)
        assert value > 0

    def test_zero_discount_is_identity(self):
        assert cbq_closed_form(WORKED_L, design(1000), 0.0) == WORKED_L.value

    def test_huge_arms_recover_limit(self):
        assert cbq_closed_form(WORKED_L, design(10**9), 0.30) == pytest.approx(
            WORKED_L.value, abs=1e-3
        )

    def test_monotonicity(self):
        base = cbq_closed_form(WORKED_L, design(1000), 0.30)
        assert cbq_closed_form(WORKED_L, design(1001), 0.30) > base
        assert cbq_closed_form(WORKED_L, design(1000), 0.31) < base
        assert cbq_closed_form(WORKED_L, design(1000, sigma=SIGMA_POOLED + 1), 0.30) < base
        wider = Phase3Design(n_rx=1000, n_c=1001, sigma_pooled=SIGMA_POOLED, seed=7)
        assert cbq_closed_form(WORKED_L, wider, 0.30) > base


class TestCbqMonteCarlo:
    def test_agrees_with_closed_form(self):
        d = design(1000, seed=99, reps=10**6)
        mc, _ = cbq_monte_carlo(WORKED_L, d, 0.30)
        closed = cbq_closed_form(WORKED_L, d, 0.30)
        scale = SIGMA_POOLED * math.sqrt(2 / 1000)
        z = std_normal_quantile(0.80)
        density = math.exp(-z * z / 2) / math.sqrt(2 * math.pi) / scale
        se_quantile = math.sqrt(0.2 * 0.8 / d.reps) / density
        assert abs(mc - closed) < 3 * se_quantile

    def test_degenerate_sigma(self):
        d = Phase3Design(n_rx=1000, n_c=1000, sigma_pooled=0.0, seed=1, reps=2000)
        mc, histogram = cbq_monte_carlo(WORKED_L, d, 0.30)
        assert mc == WORKED_L.value
        assert sum(count for _, count in histogram) == 2000

    def test_fixed_seed_reproduces_exactly(self):
        first = cbq_monte_carlo(WORKED_L, design(1000, seed=5), 0.30)
        second = cbq_monte_carlo(WORKED_L, design(1000, seed=5), 0.30)
        assert first == second
        different = cbq_monte_carlo(WORKED_L, design(1000, seed=6), 0.30)
        assert different[0] != first[0]

    def test_histogram_shape(self):
        _, histogram = cbq_monte_carlo(WORKED_L, design(1000, reps=5000), 0.30)
        assert len(histogram) == 50
        assert sum(count for _, count in histogram) == 5000
        centers = [c for c, _ in histogram]
        assert all(b > a for a, b in zip(centers, centers[1:]))

    def test_conditional_calibration(self):
        # Fresh predictive draws exceed the closed-form CBQ with frequency
        # d3 + 50%.
        d = design(1000, reps=10000)
        closed = cbq_closed_form(WORKED_L, d, 0.30)
        n = 10**5
        scale = SIGMA_POOLED * math.sqrt(2 / 1000)
        draws = WORKED_L.value + scale * RngStream(505, 0).normals(n)
        freq = (draws >= closed).mean()
        assert abs(freq - 0.80) < 3 * math.sqrt(0.8 * 0.2 / n)


class TestMinN:
    def test_worked_example(self):
        # The analytic crossing sits at 1935.77, so 1936 is the smallest
        # integer with a positive bound; verified both sides.
        n = min_n_for_positive_cbq(WORKED_L, 9.611, 0.30)
        assert n == 1936
        below = cbq_closed_form(WORKED_L, design(1935, sigma=9.611), 0.30)
        at = cbq_closed_form(WORKED_L, design(1936, sigma=9.611), 0.30)
        assert below < 0 < at

    def test_floor_at_two(self):
        z = std_normal_quantile(0.80)
        L = ConfidentEfficacy(value=z * math.sqrt(2), level=0.95, df=10, se_pooled=1.0)
        assert min_n_for_positive_cbq(L, 1.0, 0.30) == 2

    def test_nonpositive_limit_is_infeasible(self):
        bad = ConfidentEfficacy(value=-0.1, level=0.95, df=10, se_pooled=1.0)
        with pytest.raises(InfeasiblePlan):
            min_n_for_positive_cbq(bad, 9.611, 0.30)

    def test_zero_discount_needs_only_floor(self):
        assert min_n_for_positive_cbq(WORKED_L, 9.611, 0.0) == 2

    def test_allocation_ratio(self):
        n = min_n_for_positive_cbq(WORKED_L, 9.611, 0.30, allocation_ratio=2.0)
        z = std_normal_quantile(0.80)

        def value(m: int) -> float:
            return WORKED_L.value - z * 9.611 * math.sqrt(1 / m + 1 / round(2.0 * m))

        assert value(n) > 0 >= value(n - 1)
        assert n < 1936

    @given(
        st.floats(0.05, 5),
        st.floats(0.1, 20),
        st.floats(0.01, 0.49),
        st.sampled_from([0.5, 1.0, 2.0]),
    )
    @settings(max_examples=100)
    def test_minimality(self, limit, sigma, d3, ratio):
        L = ConfidentEfficacy(value=limit, level=0.95, df=100, se_pooled=1.0)
        n = min_n_for_positive_cbq(L, sigma, d3, allocation_ratio=ratio)
        z = std_normal_quantile(d3 + 0.5)

        def value(m: int) -> float:
            n_c = round(ratio * m)
            if n_c < 2:
                return -math.inf
            return limit - z * sigma * math.sqrt(1 / m + 1 / n_c)

        assert n >= 2
        assert value(n) > 0
        if n > 2:
            assert value(n - 1) <= 0


class TestClassicalSampleSize:
    def test_standard_power(self):
        assert classical_sample_size(0.05, 0.1, 1.0, 1.0) == 22

    def test_coin_flip_power(self):
        assert classical_sample_size(0.05, 0.5, 1.0, 1.0) == 8

    def test_scaling_law(self):
        assert classical_sample_size(0.05, 0.1, 2.0, 1.0) == 85  # ceil(4 * 21.015)

    def test_rejects_zero_delta(self):
        with pytest.raises(DomainError):
            classical_sample_size(0.05, 0.1, 1.0, 0.0)


class TestTransitionAssessment:
    def test_published_pipeline_at_1000(self, expedition3_study, iadl_etz):
        plan = complete_discount_plan(0.76, d_phase2=0.45)
        d = Phase3Design(
            n_rx=1000, n_c=1000, sigma_pooled=pooled_change_sd(iadl_etz), seed=2026
        )
        report = transition_assessment(expedition3_study, iadl_etz, plan, d)
        assert report.confident_efficacy.value == pytest.approx(0.255272048398, abs=1e-9)
        assert report.cbq == pytest.approx(-0.1064586768, abs=1e-9)
        assert report.cbq == pytest.approx(-0.10, abs=0.01)
        assert not report.transition_recommended
        assert len(report.quantile_histogram) == 50

    def test_doubling_arms_still_misses_narrowly(self, expedition3_study, iadl_etz):
        # With the unrounded limit 0.2553 the doubled design lands just below
        # zero (-0.0005); only the rounded 0.26 makes it positive.
        plan = complete_discount_plan(0.76, d_phase2=0.45)
        d = Phase3Design(
            n_rx=2000, n_c=2000, sigma_pooled=pooled_change_sd(iadl_etz), seed=2026
        )
        report = transition_assessment(expedition3_study, iadl_etz, plan, d)
        assert report.cbq == pytest.approx(-0.000510200348, abs=1e-9)
        assert not report.transition_recommended

    def test_no_discount_passes_through_estimate(self, expedition3_study, iadl_etz):
        plan = DiscountPlan(gamma=0.25, d_phase2=0.0, d_phase3=0.0)
        d = Phase3Design(
            n_rx=1000, n_c=1000, sigma_pooled=pooled_change_sd(iadl_etz), seed=1
        )
        report = transition_assessment(expedition3_study, iadl_etz, plan, d)
        assert report.cbq == 1.0
        assert report.transition_recommended

    def test_sigma_consistency_enforced(self, expedition3_study, iadl_etz):
        plan = complete_discount_plan(0.76, d_phase2=0.45)
        with pytest.raises(DomainError):
            transition_assessment(
                expedition3_study,
                iadl_etz,
                plan,
                Phase3Design(n_rx=1000, n_c=1000, sigma_pooled=9.611, seed=1),
            )

    def test_monte_carlo_value_reported(self, expedition3_study, iadl_etz):
        plan = complete_discount_plan(0.76, d_phase2=0.45)
        d = Phase3Design(
            n_rx=1000, n_c=1000, sigma_pooled=pooled_change_sd(iadl_etz), seed=3, reps=10**5
        )
        report = transition_assessment(expedition3_study, iadl_etz, plan, d)
        assert report.cbq_monte_carlo == pytest.approx(report.cbq, abs=0.02)

    def test_deterministic_across_runs(self, expedition3_study, iadl_etz):
        plan = complete_discount_plan(0.76, d_phase2=0.45)
        d = Phase3Design(
            n_rx=1000, n_c=1000, sigma_pooled=pooled_change_sd(iadl_etz), seed=9
        )
        first = transition_assessment(expedition3_study, iadl_etz, plan, d)
        second = transition_assessment(expedition3_study, iadl_etz, plan, d)
        assert first == second
