from typing import Optional

import numpy as np
from scipy.stats import binom

from ..models.records import Strategy, TheoryParams
from ..utils.config import Config
from ..utils.errors import DomainError
from ..utils.logger import setup_logger

logger = setup_logger("analytics.fisher")


def tp_fisher_information(c: float, n: int, kappa: float, rng: np.random.Generator,
                          samples: int = Config.TP_FISHER_SAMPLES,
                          chunk: int = Config.TP_FISHER_CHUNK) -> float:
    """TP 戦略の FI をガウス型トモグラフィ誤差モデルでモンテカルロ評価

    t ~ Normal(0, 2κ/N) として p_tp = c + √(c(1-c))·t とおき、
    p(k|c) = E_t[Bin(k; N, p_tp)] のフィッシャー情報量を N で割って返す。
    """
    root = np.sqrt(c * (1 - c))
    slope = (1 - 2 * c) / (2 * root)
    ks = np.arange(n + 1)
    pk = np.zeros(n + 1)
    dpk = np.zeros(n + 1)

    remaining = samples
    while remaining > 0:
        size = min(chunk, remaining)
        remaining -= size
        t = rng.normal(0.0, np.sqrt(2 * kappa / n), size=size)
        p = np.clip(c + root * t, Config.PROBABILITY_CLIP, 1 - Config.PROBABILITY_CLIP)
        dp_dc = 1 + slope * t

        pmf = binom.pmf(ks[None, :], n, p[:, None])
        score = ks[None, :] / p[:, None] - (n - ks[None, :]) / (1 - p[:, None])
        pk += pmf.sum(axis=0)
        dpk += (pmf * score * dp_dc[:, None]).sum(axis=0)

    pk /= samples
    dpk /= samples
    support = pk > 0
    total = float(np.sum(dpk[support] ** 2 / pk[support]))
    return total / n


def fisher_information(strategy, c: float, n: int, params: TheoryParams = TheoryParams(),
                       rng: Optional[np.random.Generator] = None,
                       samples: int = Config.TP_FISHER_SAMPLES) -> float:
    """戦略ごとの状態ペアあたり FI"""
    strategy = Strategy.parse(strategy)

    if strategy in (Strategy.TT, Strategy.TP, Strategy.KNOWN_PROJ):
        if not 0.0 < c < 1.0:
            raise DomainError(f"{strategy.value} Fisher information needs c in (0, 1) (got {c})")
        if strategy is Strategy.TT:
            # 主要項のみ
            return 1.0 / (4 * params.kappa * c * (1 - c))
        if strategy is Strategy.KNOWN_PROJ:
            return 1.0 / (c * (1 - c))
        if rng is None:
            rng = np.random.default_rng(Config.TP_FISHER_SEED)
        value = tp_fisher_information(c, n, params.kappa, rng, samples=samples)
        logger.debug(f"TP Fisher information at c={c}, n={n}: {value:.6g}")
        return value

    if not 0.0 <= c < 1.0:
        raise DomainError(f"{strategy.value} Fisher information needs c in [0, 1) (got {c})")

    if strategy in (Strategy.SCM, Strategy.SCM_QUDIT):
        return 1.0 / (1 - c ** 2)

    if strategy is Strategy.OST:
        g = params.gamma
        denominator = (3 - g * c) * (1 - g ** 2 * c ** 2)
        if denominator == 0:
            raise DomainError(f"OST Fisher information is singular at c={c}, gamma={g}")
        return 2 * g ** 2 / denominator

    raise DomainError(f"no Fisher information model for strategy {strategy.value}")
