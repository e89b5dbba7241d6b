import math

import numpy as np
from scipy.optimize import bisect

from ..models.records import Strategy, TheoryParams
from ..utils.config import Config
from ..utils.errors import DomainError, NoCrossoverError
from .variance import scaled_variance


def crossover(strategy_a, strategy_b, params: TheoryParams = TheoryParams()) -> float:
    """2戦略のスケール分散曲線が (0,1) で交わる重なり"""
    strategy_a = Strategy.parse(strategy_a)
    strategy_b = Strategy.parse(strategy_b)

    def difference(c: float) -> float:
        return scaled_variance(strategy_a, c, params) - scaled_variance(strategy_b, c, params)

    # 端点では両曲線が一致しうるので内部の格子で符号変化を探す
    grid = np.arange(1, Config.CROSSOVER_SCAN_POINTS) / Config.CROSSOVER_SCAN_POINTS
    values = np.array([difference(c) for c in grid])

    for i in range(len(grid) - 1):
        left, right = values[i], values[i + 1]
        if left * right < 0:
            return float(bisect(difference, grid[i], grid[i + 1], xtol=Config.ROOT_TOL * 1e-3))
        if left == 0 and 0 < i and values[i - 1] * right < 0:
            return float(grid[i])

    raise NoCrossoverError(
        f"{strategy_a.value} and {strategy_b.value} do not cross on (0, 1)"
    )


def copy_overhead(strategy, c: float, epsilon: float, eta_prob: float,
                  params: TheoryParams = TheoryParams()) -> int:
    """チェビシェフ不等式から必要なペア数 ⌈f_s(c)/(η ε²)⌉"""
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive (got {epsilon})")
    if not 0.0 < eta_prob < 1.0:
        raise DomainError(f"threshold probability must lie in (0, 1) (got {eta_prob})")

    required = scaled_variance(strategy, c, params) / (eta_prob * epsilon ** 2)
    # 浮動小数点の丸めで整数をわずかに超えた値を切り上げないようにする
    return int(math.ceil(required - Config.CEIL_RELATIVE_TOL * max(1.0, required)))
