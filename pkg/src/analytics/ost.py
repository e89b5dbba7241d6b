from typing import Tuple

from ..models.records import OstPhysics
from ..utils.errors import DomainError


def homi_fail_probability(c: float, physics: OstPhysics) -> float:
    """"fail"（異なるポートから出射）の確率

    p_f = 1 - 2η + 2η² - 2η(1-η)Γc。η=0.5, Γ=1 で (1-c)/2 になる。
    """
    eta, gamma = physics.eta, physics.gamma
    return 1 - 2 * eta + 2 * eta ** 2 - 2 * eta * (1 - eta) * gamma * c


def corrected_ost_estimator(k_f: int, n: int, physics: OstPhysics) -> float:
    """p_f の式を反転した不偏推定量"""
    if n < 1:
        raise DomainError(f"n must be positive (got {n})")
    if not 0 <= k_f <= n:
        raise DomainError(f"k_f={k_f} outside [0, {n}]")
    eta, gamma = physics.eta, physics.gamma
    visibility = 2 * eta * (1 - eta) * gamma
    return (1 - 2 * eta + 2 * eta ** 2) / visibility - k_f / (visibility * n)


def ost_detection_probabilities(c: float, gamma: float) -> Tuple[float, float, float]:
    """PPNRD で検出された事象の条件付き確率

    Returns:
        (p(P), p(F), 検出割合 N'/N = (3-Γc)/4)
    """
    gc = gamma * c
    p_pass = (1 + gc) / (3 - gc)
    p_fail = (2 - 2 * gc) / (3 - gc)
    return p_pass, p_fail, (3 - gc) / 4


def ost_binary_variance(c: float, n: int, physics: OstPhysics) -> float:
    """二値検出（PPNRDなし）での補正推定量の分散"""
    p_f = homi_fail_probability(c, physics)
    visibility = 2 * physics.eta * (1 - physics.eta) * physics.gamma
    return p_f * (1 - p_f) / (n * visibility ** 2)
