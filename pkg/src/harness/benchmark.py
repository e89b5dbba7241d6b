from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..models.records import Strategy
from ..models.report import ExperimentConfig, RunStatistics, VariancePoint, VarianceReport
from ..quantum.sampling import overlap
from ..strategies.base_strategy import BaseStrategy
from ..strategies.registry import build_strategy
from ..utils.config import Config
from ..utils.errors import ConfigurationError
from ..utils.logger import BenchmarkStats, setup_logger
from .bootstrap import bootstrap_runs
from .seeding import bootstrap_stream, pair_stream, run_stream

logger = setup_logger("harness.benchmark")


def process_estimates(estimates: np.ndarray) -> RunStatistics:
    """推定値 c̃_m^{j,r}（形状 [R, M, n]）から ṽ, δṽ, c̄, δc̄ を計算

    ṽʳ_m は j についての不偏分散、ṽʳ はその m 平均、ṽ と δṽ は r についての平均と標準偏差。
    c̄_m は (j, r) 全体の平均、c̄ と δc̄ は m についての平均と標準偏差。
    """
    estimates = np.asarray(estimates, dtype=float)
    if estimates.ndim != 3:
        raise ConfigurationError(f"estimates must have shape (R, M, n) (got {estimates.shape})")
    r_runs, m_pairs, n_repeats = estimates.shape
    if m_pairs < 2 or n_repeats < 2 or r_runs < 1:
        raise ConfigurationError(f"need R >= 1, M >= 2, n >= 2 (got {estimates.shape})")

    run_variances = estimates.var(axis=2, ddof=1).mean(axis=1)
    v_tilde = float(run_variances.mean())
    v_tilde_std = float(run_variances.std(ddof=1)) if r_runs > 1 else float("nan")

    pair_overlaps = estimates.mean(axis=(0, 2))
    c_bar = float(pair_overlaps.mean())
    c_bar_std = float(pair_overlaps.std(ddof=1))

    return RunStatistics(
        v_tilde=v_tilde,
        v_tilde_std=v_tilde_std,
        c_bar=min(max(c_bar, 0.0), 1.0),
        c_bar_std=c_bar_std,
        pair_overlaps=tuple(float(x) for x in pair_overlaps),
        run_variances=tuple(float(x) for x in run_variances),
    )


class BenchmarkRunner:
    """(戦略, 重なり) の各点を独立に評価するキャンペーン実行器"""

    def __init__(self, config: ExperimentConfig,
                 strategies: Optional[Dict[str, BaseStrategy]] = None,
                 workers: Optional[int] = None,
                 stats: Optional[BenchmarkStats] = None):
        self.config = config
        self.workers = workers or Config.THREADS
        self.stats = stats
        self.logger = logger

        overrides = {Strategy.parse(tag).value: s for tag, s in (strategies or {}).items()}
        self.strategies: List[Tuple[str, BaseStrategy]] = []
        for tag in config.strategies:
            name = Strategy.parse(tag).value
            strategy = overrides.get(name) or build_strategy(name, config)
            # 予算の不整合はキャンペーン開始前に設定エラーとして報告する
            strategy.validate_budget(config.n_copies)
            self.strategies.append((name, strategy))

    def run(self) -> VarianceReport:
        tasks = [
            (name, strategy, ci, c)
            for name, strategy in self.strategies
            for ci, c in enumerate(self.config.c_grid)
        ]
        self.logger.info(
            f"Running {len(tasks)} benchmark points with {self.workers} worker(s): "
            f"M={self.config.m_pairs}, N={self.config.n_copies}, "
            f"n={self.config.n_repeats}, R={self.config.r_runs}"
        )

        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                points = list(executor.map(lambda task: self._evaluate(*task), tasks))
        else:
            points = [self._evaluate(*task) for task in tasks]

        return VarianceReport(config=self.config, points=points)

    def _evaluate(self, name: str, strategy: BaseStrategy, ci: int, c: float) -> VariancePoint:
        try:
            point = self._run_point(name, strategy, ci, c)
            self.logger.info(f"{name} c={c:g}: Nv={point.nv:.4g} +/- {point.nv_std:.2g}")
            if self.stats is not None:
                self.stats.add_point(name, self._runs_per_point())
            return point

        except Exception as e:
            error_msg = f"Failed at {name} c={c:g}: {e}"
            self.logger.error(error_msg, exc_info=True)
            if self.stats is not None:
                self.stats.add_error(f"{name}@{c:g}", str(e))
            return VariancePoint(strategy=name, c_target=c,
                                 n_copies=self.config.n_copies, error=str(e))

    def _runs_per_point(self) -> int:
        r_effective = 1 if self.config.bootstrap else self.config.r_runs
        return r_effective * self.config.m_pairs * self.config.n_repeats

    def _run_point(self, name: str, strategy: BaseStrategy, ci: int, c: float) -> VariancePoint:
        config = self.config
        pairs = [strategy.sample_pair(c, pair_stream(config.seed, ci, m)) for m in range(config.m_pairs)]

        r_effective = 1 if config.bootstrap else config.r_runs
        estimates = np.empty((r_effective, config.m_pairs, config.n_repeats))
        branches: Counter = Counter()

        for r in range(r_effective):
            for m, pair in enumerate(pairs):
                for j in range(config.n_repeats):
                    rng = run_stream(config.seed, name, ci, m, r, j)
                    result = strategy.run(pair, config.n_copies, rng)
                    estimates[r, m, j] = result.estimate
                    if "branch" in result.counts:
                        branches[result.counts["branch"]] += 1

        if config.bootstrap:
            estimates = bootstrap_runs(estimates[0], config.r_runs,
                                       bootstrap_stream(config.seed, name, ci))

        statistics = process_estimates(estimates)
        total_branches = sum(branches.values())
        return VariancePoint(
            strategy=name,
            c_target=c,
            n_copies=config.n_copies,
            c_bar=statistics.c_bar,
            c_bar_std=statistics.c_bar_std,
            v_tilde=statistics.v_tilde,
            v_tilde_std=statistics.v_tilde_std,
            true_c_bar=float(np.mean([overlap(p.psi, p.phi) for p in pairs])),
            pair_overlaps=list(statistics.pair_overlaps),
            branch_fractions={b: count / total_branches for b, count in sorted(branches.items())},
        )


def run_benchmark(config: ExperimentConfig,
                  strategies: Optional[Dict[str, BaseStrategy]] = None,
                  workers: Optional[int] = None,
                  stats: Optional[BenchmarkStats] = None) -> VarianceReport:
    """設定のすべての (戦略, 重なり) について平均分散を求める"""
    return BenchmarkRunner(config, strategies, workers, stats).run()
