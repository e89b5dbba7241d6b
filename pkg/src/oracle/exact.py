import math
from typing import List, Tuple

import numpy as np
from scipy.special import gammaln, xlogy
from scipy.stats import binom

from ..analytics.ost import corrected_ost_estimator, homi_fail_probability, ost_detection_probabilities
from ..models.records import ExactResult, OstPhysics
from ..models.state import FixedOverlapPair
from ..tomography.mub import outcome_distribution, split_copies
from ..utils.config import Config
from ..utils.errors import DomainError, EnumerationBoundError
from ..utils.logger import setup_logger

logger = setup_logger("oracle.exact")


def _check_total(total: float, source: str) -> None:
    if abs(total - 1.0) > Config.PMF_SUM_TOL:
        logger.warning(f"{source}: enumerated probabilities sum to {total!r}")


def exact_tt_variance(pair: FixedOverlapPair, n: int) -> ExactResult:
    """TT の二乗誤差を両トモグラフィの全結果 (N'+1)^6 通りで厳密に和をとる"""
    n_per = split_copies(n)
    if n_per > Config.TT_MAX_PER_BASIS:
        raise EnumerationBoundError(
            f"TT enumeration needs N' <= {Config.TT_MAX_PER_BASIS} (got {n_per})"
        )

    amps_psi, prob_psi = outcome_distribution(pair.psi, n_per)
    amps_phi, prob_phi = outcome_distribution(pair.phi, n_per)
    overlaps = np.abs(amps_psi.conj() @ amps_phi.T) ** 2

    mean = float(prob_psi @ overlaps @ prob_phi)
    variance = float(prob_psi @ ((overlaps - pair.c) ** 2) @ prob_phi)
    total = float(prob_psi.sum() * prob_phi.sum())
    _check_total(total, "exact_tt_variance")
    return ExactResult(mean=mean, variance=max(variance, 0.0),
                       support_size=overlaps.size, total_probability=total)


def exact_tp_variance(pair: FixedOverlapPair, n: int) -> ExactResult:
    """TP の二乗誤差: φ のトモグラフィ結果で列挙し、射影カウント k は閉形式で和をとる

    E_k[(k/N - c)^2] = p(1-p)/N + (p-c)^2
    """
    n_per = split_copies(n)
    if n_per > Config.TP_MAX_PER_BASIS:
        raise EnumerationBoundError(
            f"TP enumeration needs N' <= {Config.TP_MAX_PER_BASIS} (got {n_per})"
        )

    amps_phi, prob_phi = outcome_distribution(pair.phi, n_per)
    p_tp = np.abs(amps_phi.conj() @ pair.psi.amplitudes) ** 2
    inner = p_tp * (1 - p_tp) / n + (p_tp - pair.c) ** 2

    total = float(prob_phi.sum())
    _check_total(total, "exact_tp_variance")
    return ExactResult(
        mean=float(prob_phi @ p_tp),
        variance=max(float(prob_phi @ inner), 0.0),
        support_size=prob_phi.size * (n + 1),
        total_probability=total,
    )


def exact_ost_pmf(c: float, gamma: float, n: int) -> List[Tuple[int, float]]:
    """PPNRD 検出での k_f の確率分布

    k_f が偶数なら k_f + 2k_p = N、奇数なら最後が pass で k_f + 2k_p = N + 1。
    """
    if n < 2 or n % 2 != 0:
        raise DomainError(f"OST PMF needs an even copy count >= 2 (got {n})")
    if n > Config.OST_PMF_MAX_COPIES:
        raise EnumerationBoundError(
            f"OST PMF enumeration needs N <= {Config.OST_PMF_MAX_COPIES} (got {n})"
        )
    if not 0.0 <= c <= 1.0 or not 0.0 < gamma <= 1.0:
        raise DomainError(f"need c in [0, 1] and gamma in (0, 1] (got c={c}, gamma={gamma})")

    p_pass, p_fail, _ = ost_detection_probabilities(c, gamma)
    k_f = np.arange(n + 1)
    odd = k_f % 2
    k_p = (n - k_f + odd) // 2
    # 奇数のときは最後の pass を除いた系列を並べる
    length = k_f + k_p - odd
    log_binom = gammaln(length + 1) - gammaln(k_f + 1) - gammaln(length - k_f + 1)
    log_prob = log_binom + xlogy(k_f, p_fail) + xlogy(k_p, p_pass)
    probabilities = np.exp(log_prob)

    _check_total(math.fsum(probabilities), "exact_ost_pmf")
    return [(int(k), float(p)) for k, p in zip(k_f, probabilities)]


def ost_pmf_moments(pmf: List[Tuple[int, float]], c: float, gamma: float, n: int) -> ExactResult:
    """(1 - 2k_f/N)/Γ の平均と c まわりの二乗誤差"""
    k_f = np.array([k for k, _ in pmf], dtype=float)
    probabilities = np.array([p for _, p in pmf])
    estimates = (1 - 2 * k_f / n) / gamma
    total = math.fsum(probabilities)
    return ExactResult(
        mean=math.fsum(probabilities * estimates),
        variance=max(math.fsum(probabilities * (estimates - c) ** 2), 0.0),
        support_size=int(np.count_nonzero(probabilities)),
        total_probability=total,
    )


def exact_binary_ost_moments(c: float, n: int, physics: OstPhysics) -> ExactResult:
    """二値検出での補正推定量の厳密なモーメント（k_f ~ Bin(N, p_f)）"""
    if n < 1:
        raise DomainError(f"copy count must be >= 1 (got {n})")
    p_f = min(max(homi_fail_probability(c, physics), 0.0), 1.0)
    k_f = np.arange(n + 1)
    probabilities = binom.pmf(k_f, n, p_f)
    estimates = np.array([corrected_ost_estimator(int(k), n, physics) for k in k_f])
    total = math.fsum(probabilities)
    _check_total(total, "exact_binary_ost_moments")
    return ExactResult(
        mean=math.fsum(probabilities * estimates),
        variance=max(math.fsum(probabilities * (estimates - c) ** 2), 0.0),
        support_size=n + 1,
        total_probability=total,
    )


def exact_scm_moments(c: float, n: int) -> ExactResult:
    """SCM 推定量 1 - 2k/N の二項分布による閉形式モーメント"""
    if n < 1:
        raise DomainError(f"copy count must be >= 1 (got {n})")
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1] (got {c})")
    return ExactResult(mean=c, variance=(1 - c ** 2) / n, support_size=n + 1, total_probability=1.0)
