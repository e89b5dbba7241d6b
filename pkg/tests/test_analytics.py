import numpy as np
import pytest

from src.analytics.fisher import fisher_information, tp_fisher_information
from src.analytics.ost import (
    corrected_ost_estimator,
    homi_fail_probability,
    ost_binary_variance,
)
from src.analytics.planning import copy_overhead, crossover
from src.analytics.variance import (
    decompose_separable,
    highdim_variance,
    limited_copy_mse,
    optimal_joint_kappa,
    scaled_variance,
    theory_variance,
)
from src.models.records import OstPhysics, Strategy, TheoryParams
from src.utils.errors import DomainError, NoCrossoverError

KAPPA = 11 / 8
GRID = [round(0.1 * i, 10) for i in range(11)]


class TestTheoryVariance:
    def test_table_values_at_half_overlap(self):
        n = 900
        assert theory_variance("TT", 0.5, n) == pytest.approx(4 * KAPPA * 0.25 / n)
        assert theory_variance("TP", 0.5, n) == pytest.approx((2 * KAPPA + 1) * 0.25 / n)
        assert theory_variance("SCM", 0.5, n) == pytest.approx(8.333333e-4, rel=1e-6)
        assert theory_variance("OST", 0.5, n) == pytest.approx(0.9375 / n)

    def test_ost_with_imperfect_visibility(self):
        params = TheoryParams(gamma=0.965)
        expected = (3 - 0.965 * 0.3) * (1 - 0.965 ** 2 * 0.09) / (2 * 0.965 ** 2)
        assert scaled_variance("OST", 0.3, params) == pytest.approx(expected)

    def test_scaled_variance_is_independent_of_n(self):
        for strategy in ("TT", "TP", "SCM", "OST"):
            assert 300 * theory_variance(strategy, 0.3, 300) == pytest.approx(
                900 * theory_variance(strategy, 0.3, 900)
            )

    def test_scm_at_zero_overlap(self):
        assert scaled_variance("scm", 0.0) == 1.0

    def test_known_state_strategies(self):
        v_tomo, v_proj = decompose_separable(0.3, 1, TheoryParams())
        assert scaled_variance("KNOWN_PROJ", 0.3) == pytest.approx(0.21)
        assert scaled_variance("KNOWN_TOMO", 0.3) == pytest.approx(v_tomo)
        assert scaled_variance("TP", 0.3) == pytest.approx(v_tomo + v_proj)
        assert scaled_variance("TT", 0.3) == pytest.approx(2 * v_tomo)

    @pytest.mark.parametrize("gamma", [0.8, 0.965, 1.0])
    def test_ost_splits_into_visibility_and_swap_terms(self, gamma):
        n = 900
        params = TheoryParams(gamma=gamma)
        for c in GRID:
            factored = (3 - gamma * c) / 2 * ((1 - gamma ** 2) / (n * gamma ** 2) + (1 - c ** 2) / n)
            assert theory_variance("OST", c, n, params) == pytest.approx(factored, abs=1e-12)

    def test_ideal_ost_never_beats_scm(self):
        for c in np.linspace(0, 1, 101)[:-1]:
            assert scaled_variance("OST", c) >= scaled_variance("SCM", c)

    def test_tomography_term_shrinks_with_dimension(self):
        for c in GRID:
            tomo_2, proj_2 = decompose_separable(c, 900, TheoryParams())
            tomo_12, proj_12 = decompose_separable(c, 900, TheoryParams(dim=12))
            assert tomo_12 == pytest.approx(tomo_2 / 11, rel=1e-12, abs=1e-18)
            assert proj_12 == proj_2

    def test_adaptive_has_no_closed_form(self):
        with pytest.raises(DomainError):
            theory_variance(Strategy.ADAPTIVE, 0.5, 900)

    def test_rejects_invalid_arguments(self):
        with pytest.raises(DomainError):
            theory_variance("SCM", 1.5, 900)
        with pytest.raises(DomainError):
            theory_variance("SCM", 0.5, 0)
        with pytest.raises(DomainError):
            theory_variance("XYZ", 0.5, 900)


class TestHighDimension:
    def test_optimal_joint_kappa(self):
        assert optimal_joint_kappa(2) == 1.0
        assert optimal_joint_kappa(5) == 4.0
        with pytest.raises(DomainError):
            optimal_joint_kappa(1)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_limited_copy_converges_to_asymptotic(self, d):
        c, n = 0.5, 1000 * d
        kappa_d = optimal_joint_kappa(d)
        assert limited_copy_mse("TP", c, n, d) == pytest.approx(3 * c * (1 - c) / n, rel=0.01)
        assert limited_copy_mse("TT", c, n, d) == pytest.approx(
            highdim_variance("TT", c, n, d, kappa_d), rel=0.01
        )

    def test_highdim_matches_qubit_formula(self):
        assert highdim_variance("TP", 0.4, 900, 2, KAPPA) == pytest.approx(theory_variance("TP", 0.4, 900))
        assert highdim_variance("TT", 0.4, 900, 2, KAPPA) == pytest.approx(theory_variance("TT", 0.4, 900))

    def test_only_separable_strategies(self):
        with pytest.raises(DomainError):
            highdim_variance("SCM", 0.5, 900, 3, 2.0)
        with pytest.raises(DomainError):
            limited_copy_mse("OST", 0.5, 900, 3)


class TestOstModel:
    def test_balanced_perfect_fail_probability(self):
        physics = OstPhysics(gamma=1.0, eta=0.5)
        for c in GRID:
            assert homi_fail_probability(c, physics) == pytest.approx((1 - c) / 2)

    def test_corrected_estimator_inverts_fail_probability(self):
        physics = OstPhysics(gamma=0.9, eta=0.3, ppnrd=False)
        for c in (0.0, 0.25, 0.8):
            n = 1000
            k_f = homi_fail_probability(c, physics) * n
            # 期待値を代入すると c に戻る（推定量は k_f について線形）
            assert corrected_ost_estimator(0, n, physics) - k_f / n / (2 * 0.3 * 0.7 * 0.9) == pytest.approx(c)

    def test_binary_variance_reduces_to_scm(self):
        physics = OstPhysics(gamma=1.0, eta=0.5, ppnrd=False)
        for c in GRID:
            assert ost_binary_variance(c, 900, physics) == pytest.approx(theory_variance("SCM", c, 900), abs=1e-15)

    def test_estimator_rejects_bad_counts(self):
        with pytest.raises(DomainError):
            corrected_ost_estimator(11, 10, OstPhysics())


class TestPlanning:
    def test_tp_scm_crossover(self):
        assert crossover("tp", "scm") == pytest.approx(4 / 11, abs=1e-9)

    def test_tt_scm_crossover(self):
        assert crossover("TT", "SCM") == pytest.approx(2 / 9, abs=1e-9)

    def test_identical_curves_do_not_cross(self):
        with pytest.raises(NoCrossoverError):
            crossover("SCM", "SCM_QUDIT")

    def test_copy_overhead(self):
        assert copy_overhead("SCM", 0.5, 0.01, 0.05) == 150000
        assert copy_overhead("SCM", 1.0, 0.01, 0.05) == 0

    def test_copy_overhead_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            copy_overhead("SCM", 0.5, 0.0, 0.05)
        with pytest.raises(DomainError):
            copy_overhead("SCM", 0.5, 0.01, 1.0)


class TestFisherInformation:
    @pytest.mark.parametrize("strategy", ["SCM", "OST"])
    def test_reciprocity_with_variance(self, strategy):
        params = TheoryParams(gamma=0.965)
        for c in GRID[:-1]:
            n = 900
            product = n * fisher_information(strategy, c, n, params) * theory_variance(strategy, c, n, params)
            assert product == pytest.approx(1.0, abs=1e-12)

    def test_tt_and_known_projection(self):
        assert fisher_information("TT", 0.5, 900) == pytest.approx(1 / (4 * KAPPA * 0.25))
        assert fisher_information("KNOWN_PROJ", 0.5, 900) == pytest.approx(4.0)

    def test_tp_numerical_fisher_information(self):
        value = tp_fisher_information(0.5, 300, KAPPA, np.random.default_rng(7), samples=20000)
        assert value == pytest.approx(1 / (3.75 * 0.25), rel=0.03)

    def test_domain(self):
        with pytest.raises(DomainError):
            fisher_information("TT", 0.0, 900)
        with pytest.raises(DomainError):
            fisher_information("SCM", 1.0, 900)

    @pytest.mark.slow
    def test_tp_fisher_information_at_default_scale(self):
        assert fisher_information("TP", 0.5, 900) == pytest.approx(1 / (3.75 * 0.25), rel=0.03)
