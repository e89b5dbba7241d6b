import math

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from ..models.records import EstimationRun, Strategy
from ..models.state import FixedOverlapPair
from ..utils.config import Config
from ..utils.errors import ConfigurationError, FitError
from .base_strategy import BaseStrategy
from .joint import scm_projector_probabilities
from .separable import tomography_projection


def two_step_mle(k1: int, m1: int, k2: int, m2: int) -> float:
    """SCM ステップ (k1/m1) と TP ステップ (k2/m2) の同時尤度を最大化する重なり

    SCM は Bin(k1; m1, (1-c)/2)、TP はトモグラフィ誤差を無視して Bin(k2; m2, c) とみなす。
    """
    def negative_log_likelihood(c: float) -> float:
        return -(
            xlogy(k1, (1 - c) / 2) + xlogy(m1 - k1, (1 + c) / 2)
            + xlogy(k2, c) + xlogy(m2 - k2, 1 - c)
        )

    result = minimize_scalar(
        negative_log_likelihood,
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": Config.OPTIMIZER_TOL},
    )
    if not result.success:
        raise FitError(f"two-step likelihood maximization failed: {result.message}")
    return float(result.x)


class AdaptiveStrategy(BaseStrategy):
    """αN ペアの SCM 予備推定 c̃' が c_t 未満なら残りを TP、それ以外は SCM に使う"""

    tag = Strategy.ADAPTIVE

    def __init__(self, alpha: float = Config.DEFAULT_ALPHA, c_t: float = Config.DEFAULT_C_T):
        if not 0.0 < alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1) (got {alpha})")
        self.alpha = alpha
        self.c_t = c_t
        super().__init__()

    def split(self, n: int):
        """(予備ステップのペア数, 残りのペア数, TP トモグラフィのコピー数)"""
        # α=1/30, N=900 のような丸め誤差で1つ少なくならないように許容幅を入れる
        m1 = int(math.floor(self.alpha * n + Config.OPTIMIZER_TOL))
        m2 = n - m1
        return m1, m2, 3 * (m2 // 3)

    def validate_budget(self, n: int) -> None:
        m1, m2, _ = self.split(n)
        if m1 < 1:
            raise ConfigurationError(f"adaptive pilot step needs alpha*N >= 1 (got N={n}, alpha={self.alpha})")
        if m2 < 3:
            raise ConfigurationError(f"adaptive second step needs at least 3 pairs (got {m2})")

    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        self.validate_budget(n)
        m1, m2, m_tomo = self.split(n)
        p_minus = min(max(scm_projector_probabilities(pair.psi, pair.phi)[3], 0.0), 1.0)

        k1 = int(rng.binomial(m1, p_minus))
        pilot = 1 - 2 * k1 / m1

        if pilot < self.c_t:
            # 予備ステップのコピーはトモグラフィに再利用しない
            k2, phi_counts, _ = tomography_projection(pair, m_tomo, m2, rng)
            estimate = two_step_mle(k1, m1, k2, m2)
            return self._result(
                estimate, n, branch=Strategy.TP.value, pilot=pilot,
                k1=k1, m1=m1, k2=k2, m2=m2, m_tomo=m_tomo, phi=phi_counts,
            )

        k2 = int(rng.binomial(m2, p_minus))
        estimate = 1 - 2 * (k1 + k2) / n
        return self._result(
            estimate, n, branch=Strategy.SCM.value, pilot=pilot,
            k1=k1, m1=m1, k2=k2, m2=m2,
        )


def run_adaptive(pair: FixedOverlapPair, n: int, alpha: float, c_t: float,
                 rng: np.random.Generator) -> EstimationRun:
    return AdaptiveStrategy(alpha, c_t).run(pair, n, rng)
