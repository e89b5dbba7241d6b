from typing import Tuple

from ..models.records import Strategy, TheoryParams
from ..utils.errors import DomainError

# 高次元トモグラフィの κ スケーリング（数値として組み込むのは joint のみ）
KAPPA_SCALINGS = {
    "joint": "d - 1",
    "independent": "O(d)",
    "local": "O(4^n n), d = 2^n",
}


def optimal_joint_kappa(d: int) -> float:
    """全コピーにわたる最適 joint 測定の κ = d-1"""
    if d < 2:
        raise DomainError(f"dimension must be >= 2 (got {d})")
    return float(d - 1)


def _check(c: float, n: int = 1) -> None:
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1] (got {c})")
    if n < 1:
        raise DomainError(f"copy count must be >= 1 (got {n})")


def decompose_separable(c: float, n: int, params: TheoryParams) -> Tuple[float, float]:
    """分離測定戦略の誤差を (トモグラフィ寄与, 射影寄与) に分解"""
    _check(c, n)
    v_tomo = 2 * params.kappa * c * (1 - c) / ((params.dim - 1) * n)
    v_proj = c * (1 - c) / n
    return v_tomo, v_proj


def theory_variance(strategy, c: float, n: int, params: TheoryParams = TheoryParams()) -> float:
    """戦略ごとの平均分散 v(c, N)"""
    strategy = Strategy.parse(strategy)
    _check(c, n)

    if strategy in (Strategy.TT, Strategy.TP, Strategy.KNOWN_TOMO, Strategy.KNOWN_PROJ):
        v_tomo, v_proj = decompose_separable(c, n, params)
        return {
            Strategy.TT: 2 * v_tomo,
            Strategy.TP: v_tomo + v_proj,
            Strategy.KNOWN_TOMO: v_tomo,
            Strategy.KNOWN_PROJ: v_proj,
        }[strategy]

    if strategy in (Strategy.SCM, Strategy.SCM_QUDIT):
        return (1 - c ** 2) / n

    if strategy is Strategy.OST:
        g = params.gamma
        return (3 - g * c) * (1 - g ** 2 * c ** 2) / (2 * n * g ** 2)

    raise DomainError(f"no closed-form variance for strategy {strategy.value}")


def scaled_variance(strategy, c: float, params: TheoryParams = TheoryParams()) -> float:
    """N に依存しないスケール平均分散 f_s(c) = N·v_s(c, N)"""
    return theory_variance(strategy, c, 1, params)


def highdim_variance(strategy, c: float, n: int, d: int, kappa_d: float) -> float:
    """d 次元（十分コピー数）での TT / TP の平均分散"""
    strategy = Strategy.parse(strategy)
    if strategy not in (Strategy.TT, Strategy.TP):
        raise DomainError(f"high-dimensional formula covers TT and TP only (got {strategy.value})")
    if d < 2 or kappa_d <= 0:
        raise DomainError(f"need d >= 2 and kappa_d > 0 (got d={d}, kappa_d={kappa_d})")
    _check(c, n)

    if strategy is Strategy.TT:
        return 4 * kappa_d * c * (1 - c) / ((d - 1) * n)
    return (2 * kappa_d / (d - 1) + 1) * c * (1 - c) / n


def limited_copy_mse(strategy, c: float, n: int, d: int) -> float:
    """最適 joint トモグラフィを用いた TT / TP の厳密な平均二乗誤差"""
    strategy = Strategy.parse(strategy)
    if strategy not in (Strategy.TT, Strategy.TP):
        raise DomainError(f"limited-copy MSE covers TT and TP only (got {strategy.value})")
    if d < 2:
        raise DomainError(f"dimension must be >= 2 (got {d})")
    _check(c, n)

    N = float(n)
    if strategy is Strategy.TT:
        numerator = (2 * N + d) * (
            (c * (c * d - 2) * (d + 1) + 2) * (2 * N + d + 1) + 2 * c * (1 - c) * N ** 2
        )
        return numerator / ((N + d) ** 2 * (N + d + 1) ** 2)

    numerator = (
        c ** 2 * (d ** 2 * N + d * N - 3 * N ** 2 + N)
        + c * (3 * N ** 2 - d * N - 5 * N)
        + 3 * N + d - 1
    )
    return numerator / (N * (N + d) * (N + d + 1))
