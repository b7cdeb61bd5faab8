"""Tests for the numerical kernel.

Reference constants were computed independently with mpmath at 40-digit
precision (quantiles by root-finding on the exact CDFs, the bivariate CDF
from closed-form orthant identities) and frozen here.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etzplan.errors import BracketError, DomainError
from etzplan.numerics import (
    RngStream,
    bvn_cdf,
    rng_normal,
    solve_root,
    std_normal_cdf,
    std_normal_quantile,
    student_t_quantile,
)

Z_975 = 1.9599639845400545
Z_95 = 1.6448536269514722
Z_80 = 0.8416212335729143
T_95_1959 = 1.6456318272409132
T_975_1 = 12.706204736174705


class TestStdNormalQuantile:
    def test_median(self):
        assert std_normal_quantile(0.5) == 0.0

    def test_two_sided_97_5(self):
        assert std_normal_quantile(0.975) == pytest.approx(Z_975, abs=1e-10)
        assert std_normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_level_80(self):
        assert std_normal_quantile(0.80) == pytest.approx(Z_80, abs=1e-10)
        assert std_normal_quantile(0.80) == pytest.approx(0.841621, abs=1e-6)

    def test_cdf_inverse_consistency(self):
        for p in [1e-8, 0.01, 0.3, 0.5, 0.77, 0.99, 1 - 1e-9]:
            assert std_normal_cdf(std_normal_quantile(p)) == pytest.approx(p, abs=1e-10)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.7, float("nan")])
    def test_rejects_bad_levels(self, p):
        with pytest.raises(DomainError):
            std_normal_quantile(p)

    @given(st.floats(-6, 6))
    def test_quantile_inverts_cdf(self, x):
        assert std_normal_quantile(std_normal_cdf(x)) == pytest.approx(x, abs=1e-8)


class TestStudentTQuantile:
    def test_median_is_zero(self):
        for df in (1, 7, 1959):
            assert student_t_quantile(0.5, df) == 0.0

    def test_large_df_value(self):
        assert student_t_quantile(0.95, 1959) == pytest.approx(1.64567, abs=1e-4)
        assert student_t_quantile(0.95, 1959) == pytest.approx(T_95_1959, abs=1e-8)

    def test_cauchy_case_closed_form(self):
        # df=1 has the closed form tan(pi*(p - 1/2))
        assert student_t_quantile(0.975, 1) == pytest.approx(T_975_1, abs=1e-6)
        assert student_t_quantile(0.975, 1) == pytest.approx(12.7062, abs=1e-4)

    def test_converges_to_normal(self):
        for p in (0.6, 0.95, 0.99):
            assert student_t_quantile(p, 10**6) == pytest.approx(
                std_normal_quantile(p), abs=1e-4
            )

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            student_t_quantile(0.95, 0)
        with pytest.raises(DomainError):
            student_t_quantile(1.0, 10)


class TestBvnCdf:
    def test_independent_origin(self):
        assert bvn_cdf(0, 0, 0) == pytest.approx(0.25, abs=1e-12)

    def test_orthant_closed_form(self):
        # P(X<=0, Y<=0) = 1/4 + asin(rho)/(2*pi)
        assert bvn_cdf(0, 0, 0.5) == pytest.approx(1 / 3, abs=1e-7)
        for rho in [-0.999, -0.95, -0.6, 0.2, 0.8, 0.93, 0.999]:
            expected = 0.25 + math.asin(rho) / (2 * math.pi)
            assert bvn_cdf(0, 0, rho) == pytest.approx(expected, abs=1e-7)

    def test_marginalization(self):
        for k in (-1.5, 0.2, 2.0):
            assert bvn_cdf(math.inf, k, 0.7) == pytest.approx(std_normal_cdf(k), abs=1e-12)
            assert bvn_cdf(k, math.inf, 0.7) == pytest.approx(std_normal_cdf(k), abs=1e-12)
            assert bvn_cdf(-math.inf, k, 0.7) == 0.0

    def test_independence_factorizes(self):
        for h in (-2.1, 0.0, 0.9):
            for k in (-0.4, 1.3):
                assert bvn_cdf(h, k, 0.0) == pytest.approx(
                    std_normal_cdf(h) * std_normal_cdf(k), abs=1e-7
                )

    def test_degenerate_correlations(self):
        assert bvn_cdf(0.7, 1.4, 1.0) == pytest.approx(std_normal_cdf(0.7), abs=1e-12)
        assert bvn_cdf(0.7, -0.7, -1.0) == pytest.approx(0.0, abs=1e-12)
        assert bvn_cdf(1.0, -0.5, -1.0) == pytest.approx(
            std_normal_cdf(1.0) + std_normal_cdf(-0.5) - 1.0, abs=1e-12
        )

    def test_marginal_identity_across_branches(self):
        # P(X<=h, Y<=k; rho) + P(X<=h, Y<=-k; -rho) = Phi(h) exactly
        for rho in (-0.99, -0.5, 0.3, 0.94):
            for h in (-2.5, 0.0, 1.1):
                for k in (-1.8, 0.6, 3.0):
                    total = bvn_cdf(h, k, rho) + bvn_cdf(h, -k, -rho)
                    assert total == pytest.approx(std_normal_cdf(h), abs=1e-7)

    @given(
        st.floats(-4, 4),
        st.floats(-4, 4),
        st.floats(-0.999, 0.999),
    )
    @settings(max_examples=200)
    def test_symmetric_in_arguments(self, h, k, rho):
        assert bvn_cdf(h, k, rho) == pytest.approx(bvn_cdf(k, h, rho), abs=1e-12)

    @pytest.mark.parametrize("rho", [1.2, -1.01, float("nan")])
    def test_rejects_bad_rho(self, rho):
        with pytest.raises(DomainError):
            bvn_cdf(0, 0, rho)


class TestSolveRoot:
    def test_linear(self):
        assert solve_root(lambda x: x - 1, 0, 2, 1e-12) == pytest.approx(1.0, abs=1e-12)

    def test_quantile_oracle(self):
        root = solve_root(lambda x: std_normal_cdf(x) - 0.95, 0, 3, 1e-10)
        assert root == pytest.approx(1.644854, abs=1e-6)
        assert root == pytest.approx(Z_95, abs=1e-9)

    def test_sqrt_two(self):
        assert solve_root(lambda x: x * x - 2, 1, 2, 1e-12) == pytest.approx(
            math.sqrt(2), abs=1e-10
        )

    def test_no_sign_change_raises(self):
        with pytest.raises(BracketError):
            solve_root(lambda x: x * x + 1, -1, 1, 1e-9)

    def test_bad_bracket_or_tol(self):
        with pytest.raises(DomainError):
            solve_root(lambda x: x, 2, 1, 1e-9)
        with pytest.raises(DomainError):
            solve_root(lambda x: x, -1, 1, 0.0)


class TestRngStream:
    def test_sd_zero_returns_mean_exactly(self):
        assert rng_normal(RngStream(1, 2), 7.25, 0.0) == 7.25

    def test_replay_is_identical(self):
        first = RngStream(seed=3, stream_id=0)
        second = RngStream(seed=3, stream_id=0)
        seq1 = [rng_normal(first, 0, 1) for _ in range(64)]
        seq2 = [rng_normal(second, 0, 1) for _ in range(64)]
        assert seq1 == seq2

    def test_vector_draws_match_scalar_draws(self):
        block = RngStream(11, 5).normals(16, 2.0, 3.0)
        scalar = RngStream(11, 5)
        assert [rng_normal(scalar, 2.0, 3.0) for _ in range(16)] == list(block)

    def test_moments_within_clt_bounds(self):
        draws = RngStream(3, 0).normals(10**6)
        assert abs(draws.mean()) < 0.004  # 4 / sqrt(1e6)
        assert abs(draws.var() - 1.0) < 4 * math.sqrt(2 / 10**6)

    def test_distinct_streams_uncorrelated(self):
        n = 10**5
        streams = [RngStream(17, sid).normals(n) for sid in (0, 1, 2, 9)]
        for i in range(len(streams)):
            for j in range(i + 1, len(streams)):
                r = np.corrcoef(streams[i], streams[j])[0, 1]
                assert abs(r) < 0.01
        lag1 = np.corrcoef(streams[0][:-1], streams[0][1:])[0, 1]
        assert abs(lag1) < 0.01

    def test_derive_is_deterministic_and_distinct(self):
        parent = RngStream(5, 1)
        assert parent.derive(4, 2).normals(8).tolist() == RngStream(5, 1).derive(4, 2).normals(
            8
        ).tolist()
        assert parent.derive(4, 2).stream_id != parent.derive(4, 3).stream_id

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            RngStream(-1, 0)
        with pytest.raises(DomainError):
            rng_normal(RngStream(0, 0), 0.0, -1.0)
