from typing import Tuple

import numpy as np

from ..analytics.ost import corrected_ost_estimator, homi_fail_probability, ost_detection_probabilities
from ..models.records import EstimationRun, OstPhysics, Strategy
from ..models.state import FixedOverlapPair, PureState
from ..utils.errors import ConfigurationError, DomainError
from .base_strategy import BaseStrategy


def scm_projector_probabilities(psi: PureState, phi: PureState) -> Tuple[float, float, float, float]:
    """|ψ>|φ> を {|00>, |11>, Ψ+, Ψ-} に射影したときの確率 (p1, p2, p+, p-)"""
    if psi.dim != 2 or phi.dim != 2:
        raise DomainError("SCM projector probabilities are defined for qubit pairs")
    a0, a1 = psi.amplitudes
    b0, b1 = phi.amplitudes
    p1 = abs(a0 * b0) ** 2
    p2 = abs(a1 * b1) ** 2
    p_plus = abs(a0 * b1 + a1 * b0) ** 2 / 2
    p_minus = abs(a0 * b1 - a1 * b0) ** 2 / 2
    return float(p1), float(p2), float(p_plus), float(p_minus)


def antisymmetric_probability(psi: PureState, phi: PureState) -> float:
    """反対称部分空間への射影確率 ½Σ_{i<j}|α_iβ_j - α_jβ_i|²（任意次元）"""
    if psi.dim != phi.dim:
        raise DomainError(f"dimension mismatch: {psi.dim} vs {phi.dim}")
    product = np.outer(psi.amplitudes, phi.amplitudes)
    antisym = product - product.T
    # 全 (i, j) の和は i<j の和の2倍
    return float(np.sum(np.abs(antisym) ** 2) / 4)


def _binomial_probability(p: float) -> float:
    return min(max(p, 0.0), 1.0)


class SchurCollectiveMeasurement(BaseStrategy):
    """各ペアを一重項に射影し、成功率 (1-c)/2 から推定"""

    tag = Strategy.SCM

    def _singlet_probability(self, pair: FixedOverlapPair) -> float:
        return scm_projector_probabilities(pair.psi, pair.phi)[3]

    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        self.validate_budget(n)
        k = int(rng.binomial(n, _binomial_probability(self._singlet_probability(pair))))
        return self._result(1 - 2 * k / n, n, k=k)


class QuditSchurCollectiveMeasurement(SchurCollectiveMeasurement):
    """d 次元ペアの反対称射影による SCM"""

    tag = Strategy.SCM_QUDIT

    def __init__(self, dim: int = 2):
        if dim < 2:
            raise ConfigurationError(f"dimension must be >= 2 (got {dim})")
        self.dim = dim
        super().__init__()

    def _singlet_probability(self, pair: FixedOverlapPair) -> float:
        return antisymmetric_probability(pair.psi, pair.phi)


class OpticalSwapTest(BaseStrategy):
    """2光子干渉（HOMI）による破壊的スワップテスト"""

    tag = Strategy.OST

    def __init__(self, physics: OstPhysics = OstPhysics()):
        if physics.ppnrd and physics.eta != 0.5:
            raise ConfigurationError(
                f"pseudo photon-number-resolving detection requires eta=0.5 (got {physics.eta})"
            )
        self.physics = physics
        super().__init__()

    def validate_budget(self, n: int) -> None:
        if n < 2 or n % 2 != 0:
            raise ConfigurationError(f"OST copy count must be even and >= 2 (got {n})")

    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        self.validate_budget(n)
        c = _binomial_probability(pair.c)
        if self.physics.ppnrd:
            return self._run_ppnrd(c, n, rng)

        k_f = int(rng.binomial(n, _binomial_probability(homi_fail_probability(c, self.physics))))
        estimate = corrected_ost_estimator(k_f, n, self.physics)
        return self._result(estimate, n, k_f=k_f)

    def _run_ppnrd(self, c: float, n: int, rng: np.random.Generator) -> EstimationRun:
        """検出事象を逐次に引き、消費ペア数が n に達したら止める

        fail は1ペア、pass は2ペアを消費する。残り1ペアで pass を引いた場合は n+1 となる。
        """
        _, p_fail, _ = ost_detection_probabilities(c, self.physics.gamma)
        # 1事象で最低1ペア消費するので n 回分引けば足りる
        fails = rng.random(n) < p_fail
        consumed = np.cumsum(np.where(fails, 1, 2))
        stop = int(np.searchsorted(consumed, n))

        k_f = int(np.count_nonzero(fails[:stop + 1]))
        k_p = stop + 1 - k_f
        estimate = (1 - 2 * k_f / n) / self.physics.gamma
        return self._result(estimate, int(consumed[stop]), k_f=k_f, k_p=k_p)


_SCM = SchurCollectiveMeasurement()
_SCM_QUDIT = QuditSchurCollectiveMeasurement()


def run_scm(pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
    return _SCM.run(pair, n, rng)


def run_scm_qudit(pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
    return _SCM_QUDIT.run(pair, n, rng)


def run_ost(pair: FixedOverlapPair, n: int, physics: OstPhysics,
            rng: np.random.Generator) -> EstimationRun:
    return OpticalSwapTest(physics).run(pair, n, rng)
