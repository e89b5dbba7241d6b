import math
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np
from scipy.stats import binom

from ..analytics.ost import corrected_ost_estimator, homi_fail_probability
from ..harness.seeding import oracle_stream
from ..models.records import OstPhysics
from ..models.report import ExperimentConfig
from ..models.state import FixedOverlapPair
from ..quantum.sampling import sample_pair
from ..strategies.base_strategy import BaseStrategy
from ..strategies.joint import OpticalSwapTest, SchurCollectiveMeasurement
from ..strategies.separable import TomographyProjection, TomographyTomography
from ..utils.config import Config
from ..utils.logger import setup_logger
from .ensemble import average_over_ensemble
from .exact import exact_ost_pmf, exact_tp_variance, exact_tt_variance

logger = setup_logger("oracle.check")


@dataclass(frozen=True)
class OracleComparison:
    """1つの比較結果"""
    name: str
    exact: float
    exact_stderr: float
    monte_carlo: float
    monte_carlo_stderr: float
    sigma: float = Config.ORACLE_SIGMA

    @property
    def combined_stderr(self) -> float:
        return math.hypot(self.exact_stderr, self.monte_carlo_stderr)

    @property
    def passed(self) -> bool:
        return abs(self.exact - self.monte_carlo) <= self.sigma * self.combined_stderr

    def describe(self) -> str:
        status = "ok" if self.passed else "FAIL"
        return (
            f"{self.name}: exact={self.exact:.6g} (+/- {self.exact_stderr:.2g}) "
            f"mc={self.monte_carlo:.6g} (+/- {self.monte_carlo_stderr:.2g}) [{status}]"
        )


def _mc_squared_error(strategy: BaseStrategy, n: int, repeats: int,
                      rng: np.random.Generator) -> Callable[[FixedOverlapPair], float]:
    def point_fn(pair: FixedOverlapPair) -> float:
        estimates = np.array([strategy.run(pair, n, rng).estimate for _ in range(repeats)])
        return float(np.mean((estimates - pair.c) ** 2))
    return point_fn


def compare_ensemble(name: str, exact_fn: Callable[[FixedOverlapPair], float],
                     strategy: BaseStrategy, c: float, n: int, seed: int, check_index: int,
                     samples: int = Config.ORACLE_SAMPLES,
                     repeats: int = Config.ORACLE_REPEATS) -> OracleComparison:
    """同じ (U, φ) のサンプルで厳密な分散とモンテカルロの二乗誤差を平均して比較"""
    # ペア用ストリームを同じシードで2本作り、両側で同一のペア列を使う
    exact_mean, exact_se = average_over_ensemble(
        exact_fn, c, samples, oracle_stream(seed, check_index, 0), sampler=sample_pair
    )
    mc_fn = _mc_squared_error(strategy, n, repeats, oracle_stream(seed, check_index, 1))
    mc_mean, mc_se = average_over_ensemble(
        mc_fn, c, samples, oracle_stream(seed, check_index, 0), sampler=sample_pair, workers=1
    )
    return OracleComparison(name, exact_mean, exact_se, mc_mean, mc_se)


def _distribution_comparisons(name: str, values: np.ndarray, probabilities: np.ndarray,
                              c: float, samples: np.ndarray) -> List[OracleComparison]:
    """推定値の平均と c まわりの二乗誤差を、厳密分布とサンプルで比較

    厳密側の標準誤差は同じ試行回数で抽出した場合の値とする。
    """
    size = len(samples)
    comparisons = []
    for label, exact_values, sample_values in (
        ("mean", values, samples),
        ("mse", (values - c) ** 2, (samples - c) ** 2),
    ):
        exact = math.fsum(probabilities * exact_values)
        exact_sd = math.sqrt(max(math.fsum(probabilities * (exact_values - exact) ** 2), 0.0))
        comparisons.append(OracleComparison(
            f"{name} {label}",
            exact,
            exact_sd / math.sqrt(size),
            float(np.mean(sample_values)),
            float(np.std(sample_values, ddof=1) / math.sqrt(size)),
        ))
    return comparisons


def _sample_estimates(strategy: BaseStrategy, c: float, n: int, runs: int,
                      rng: np.random.Generator) -> np.ndarray:
    pair = sample_pair(c, rng)
    return np.array([strategy.run(pair, n, rng).estimate for _ in range(runs)])


def run_oracle_check(config: ExperimentConfig,
                     overlaps: Sequence[float] = Config.ORACLE_OVERLAPS,
                     per_basis: Sequence[int] = Config.ORACLE_PER_BASIS,
                     samples: int = Config.ORACLE_SAMPLES,
                     repeats: int = Config.ORACLE_REPEATS,
                     single_runs: int = Config.ORACLE_SINGLE_RUNS,
                     n_single: int = Config.ORACLE_COPIES) -> List[OracleComparison]:
    """TT / TP のアンサンブル分散、SCM・OST の推定量分布を厳密値と比較"""
    seed = config.seed
    comparisons: List[OracleComparison] = []
    check_index = 0

    tt, tp, scm = TomographyTomography(), TomographyProjection(), SchurCollectiveMeasurement()
    for n_per in per_basis:
        n = 3 * n_per
        for c in overlaps:
            logger.info(f"Comparing TT/TP ensemble variance at N'={n_per}, c={c:g}")
            comparisons.append(compare_ensemble(
                f"TT N'={n_per} c={c:g}", lambda p, n=n: exact_tt_variance(p, n).variance,
                tt, c, n, seed, check_index, samples, repeats,
            ))
            comparisons.append(compare_ensemble(
                f"TP N'={n_per} c={c:g}", lambda p, n=n: exact_tp_variance(p, n).variance,
                tp, c, n, seed, check_index + 1, samples, repeats,
            ))
            check_index += 2

    k = np.arange(n_single + 1)
    ppnrd = OpticalSwapTest(OstPhysics(gamma=config.gamma, eta=0.5, ppnrd=True))
    binary_physics = OstPhysics(gamma=config.gamma, eta=config.eta, ppnrd=False)
    binary = OpticalSwapTest(binary_physics)

    for c in overlaps:
        logger.info(f"Comparing SCM / OST estimator distributions at c={c:g}, N={n_single}")
        scm_samples = _sample_estimates(scm, c, n_single, single_runs, oracle_stream(seed, check_index, 0))
        comparisons.extend(_distribution_comparisons(
            f"SCM c={c:g}", 1 - 2 * k / n_single, binom.pmf(k, n_single, (1 - c) / 2), c, scm_samples,
        ))

        pmf = exact_ost_pmf(c, config.gamma, n_single)
        ost_values = np.array([(1 - 2 * k_f / n_single) / config.gamma for k_f, _ in pmf])
        ost_samples = _sample_estimates(ppnrd, c, n_single, single_runs, oracle_stream(seed, check_index, 1))
        comparisons.extend(_distribution_comparisons(
            f"OST-PPNRD c={c:g}", ost_values, np.array([p for _, p in pmf]), c, ost_samples,
        ))

        binary_values = np.array([corrected_ost_estimator(int(k_f), n_single, binary_physics) for k_f in k])
        p_f = homi_fail_probability(c, binary_physics)
        binary_samples = _sample_estimates(binary, c, n_single, single_runs, oracle_stream(seed, check_index, 2))
        comparisons.extend(_distribution_comparisons(
            f"OST-binary c={c:g}", binary_values,
            binom.pmf(k, n_single, p_f), c, binary_samples,
        ))
        check_index += 1

    failed = [comparison for comparison in comparisons if not comparison.passed]
    logger.info(f"Oracle check: {len(comparisons) - len(failed)}/{len(comparisons)} comparisons passed")
    return comparisons
