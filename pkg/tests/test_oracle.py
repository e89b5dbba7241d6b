import math

import numpy as np
import pytest

from src.models.records import OstPhysics
from src.models.report import ExperimentConfig
from src.oracle.check import OracleComparison, run_oracle_check
from src.oracle.ensemble import average_over_ensemble
from src.oracle.exact import (
    exact_binary_ost_moments,
    exact_ost_pmf,
    exact_scm_moments,
    exact_tp_variance,
    exact_tt_variance,
    ost_pmf_moments,
)
from src.quantum.sampling import overlap, sample_pair
from src.strategies.joint import run_ost
from src.strategies.separable import run_tp, run_tt
from src.utils.errors import ConfigurationError, DomainError, EnumerationBoundError

GAMMA = 0.965
GRID = [round(0.1 * i, 10) for i in range(11)]


class TestExactTomography:
    @pytest.mark.parametrize("exact_fn", [exact_tt_variance, exact_tp_variance])
    def test_pole_aligned_pairs_have_zero_variance(self, exact_fn, zero_zero_pair, zero_one_pair):
        for n in (3, 6, 12):
            assert exact_fn(zero_zero_pair, n).variance == pytest.approx(0.0, abs=1e-15)
            assert exact_fn(zero_one_pair, n).variance == pytest.approx(0.0, abs=1e-15)

    def test_enumeration_bounds(self, zero_zero_pair):
        with pytest.raises(EnumerationBoundError):
            exact_tt_variance(zero_zero_pair, 15)
        with pytest.raises(EnumerationBoundError):
            exact_tp_variance(zero_zero_pair, 33)
        assert exact_tt_variance(zero_zero_pair, 12).support_size == 125 ** 2
        assert exact_tp_variance(zero_zero_pair, 30).support_size == 11 ** 3 * 31

    def test_probabilities_are_normalized(self, rng):
        pair = sample_pair(0.3, rng)
        assert exact_tt_variance(pair, 9).total_probability == pytest.approx(1.0, abs=1e-10)
        assert exact_tp_variance(pair, 9).total_probability == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("exact_fn,run_fn", [(exact_tt_variance, run_tt), (exact_tp_variance, run_tp)])
    def test_single_pair_matches_monte_carlo(self, rng, exact_fn, run_fn):
        pair = sample_pair(0.5, rng)
        exact = exact_fn(pair, 6)
        squared = np.array([(run_fn(pair, 6, rng).estimate - pair.c) ** 2 for _ in range(20000)])
        stderr = squared.std(ddof=1) / np.sqrt(len(squared))
        assert abs(squared.mean() - exact.variance) < 4 * stderr


class TestExactOst:
    def test_point_mass_for_identical_states(self):
        pmf = exact_ost_pmf(1.0, 1.0, 20)
        assert pmf[0] == (0, pytest.approx(1.0))
        assert all(p == 0.0 for _, p in pmf[1:])

    @pytest.mark.parametrize("c", [0.0, 0.3, 0.7, 1.0])
    @pytest.mark.parametrize("n", [2, 10, 900])
    def test_pmf_is_normalized(self, c, n):
        pmf = exact_ost_pmf(c, GAMMA, n)
        assert len(pmf) == n + 1
        assert math.fsum(p for _, p in pmf) == pytest.approx(1.0, abs=1e-10)

    def test_support_satisfies_copy_accounting(self):
        n = 20
        for k_f, p in exact_ost_pmf(0.4, GAMMA, n):
            k_p = (n - k_f) // 2 if k_f % 2 == 0 else (n - k_f + 1) // 2
            assert p > 0
            assert k_f + 2 * k_p == (n if k_f % 2 == 0 else n + 1)

    def test_rejects_odd_or_huge_budget(self):
        with pytest.raises(DomainError):
            exact_ost_pmf(0.5, 1.0, 11)
        with pytest.raises(EnumerationBoundError):
            exact_ost_pmf(0.5, 1.0, 10002)

    @pytest.mark.parametrize("c", GRID)
    def test_moments_at_default_scale(self, c):
        n = 900
        moments = ost_pmf_moments(exact_ost_pmf(c, GAMMA, n), c, GAMMA, n)
        theory = (3 - GAMMA * c) * (1 - GAMMA ** 2 * c ** 2) / (2 * GAMMA ** 2)
        assert moments.mean == pytest.approx(c, abs=5e-3)
        # c が 1 に近いと分散が小さく O(1/N) の補正が相対的に大きい
        assert n * moments.variance == pytest.approx(theory, rel=0.01 if c <= 0.8 else 0.03)

    def test_perfect_visibility_half_overlap(self):
        n = 900
        moments = ost_pmf_moments(exact_ost_pmf(0.5, 1.0, n), 0.5, 1.0, n)
        assert n * moments.variance == pytest.approx(0.9375, rel=0.01)

    def test_monte_carlo_agrees_with_pmf(self, rng):
        c, n = 0.5, 900
        moments = ost_pmf_moments(exact_ost_pmf(c, GAMMA, n), c, GAMMA, n)
        pair = sample_pair(c, rng)
        estimates = np.array([run_ost(pair, n, OstPhysics(gamma=GAMMA), rng).estimate for _ in range(5000)])
        stderr = estimates.std(ddof=1) / np.sqrt(len(estimates))
        assert abs(estimates.mean() - moments.mean) < 3 * stderr * math.sqrt(2)


class TestExactScm:
    def test_closed_form(self):
        assert exact_scm_moments(0.0, 4).variance == 0.25
        assert exact_scm_moments(1.0, 100).variance == 0.0
        assert exact_scm_moments(0.5, 900).variance == pytest.approx(8.333333e-4, rel=1e-6)

    @pytest.mark.parametrize("c", GRID)
    def test_variance_identity(self, c):
        result = exact_scm_moments(c, 37)
        assert result.mean == c
        assert result.variance * 37 + c ** 2 == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("c", [0.0, 0.35, 0.9])
    def test_binary_ost_is_exactly_unbiased(self, c):
        physics = OstPhysics(gamma=0.9, eta=0.4, ppnrd=False)
        for n in (1, 7, 20):
            result = exact_binary_ost_moments(c, n, physics)
            assert result.mean == pytest.approx(c, abs=1e-12)
            assert result.total_probability == pytest.approx(1.0, abs=1e-10)


class TestEnsemble:
    def test_constant_function(self, rng):
        mean, stderr = average_over_ensemble(lambda pair: 0.25, 0.5, 100, rng)
        assert mean == 0.25
        assert stderr == 0.0

    def test_overlap_is_fixed(self, rng):
        mean, stderr = average_over_ensemble(lambda pair: overlap(pair.psi, pair.phi), 0.3, 200, rng)
        assert mean == pytest.approx(0.3, abs=1e-12)
        assert stderr < 1e-12

    def test_requires_enough_samples(self, rng):
        with pytest.raises(ConfigurationError):
            average_over_ensemble(lambda pair: 0.0, 0.5, 99, rng)

    def test_result_is_independent_of_worker_count(self):
        def point_fn(pair):
            return exact_tp_variance(pair, 9).variance

        serial = average_over_ensemble(point_fn, 0.5, 150, np.random.default_rng(4), workers=1)
        parallel = average_over_ensemble(point_fn, 0.5, 150, np.random.default_rng(4), workers=4)
        assert serial == parallel

    def test_tp_ensemble_approaches_theory(self):
        n = 30
        mean, stderr = average_over_ensemble(
            lambda pair: exact_tp_variance(pair, n).variance, 0.5, 200, np.random.default_rng(8)
        )
        # 漸近式からのずれは O(1/N)
        assert n * mean == pytest.approx((2 * 11 / 8 + 1) * 0.25, rel=0.3)
        assert stderr > 0


class TestOracleCheck:
    def test_comparison_verdict(self):
        assert OracleComparison("a", 1.0, 0.1, 1.25, 0.0).passed
        assert not OracleComparison("b", 1.0, 0.1, 1.35, 0.0).passed

    def test_reduced_oracle_check_passes(self):
        comparisons = run_oracle_check(
            ExperimentConfig(), overlaps=(0.5,), per_basis=(2,), samples=100, repeats=5, single_runs=4000,
        )
        assert len(comparisons) == 2 + 6
        failed = [c.describe() for c in comparisons if not c.passed]
        assert not failed

    @pytest.mark.slow
    def test_full_oracle_check_passes(self):
        comparisons = run_oracle_check(ExperimentConfig())
        assert all(c.passed for c in comparisons), [c.describe() for c in comparisons if not c.passed]
