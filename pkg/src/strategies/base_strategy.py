from abc import ABC, abstractmethod
import logging
from typing import Dict

import numpy as np

from ..models.records import EstimationRun, Strategy
from ..models.state import FixedOverlapPair
from ..quantum.sampling import sample_pair, sample_qudit_pair
from ..utils.errors import ConfigurationError
from ..utils.logger import setup_logger


class BaseStrategy(ABC):
    """重なり推定戦略の基底クラス"""

    tag: Strategy
    dim: int = 2
    _loggers: Dict[str, logging.Logger] = {}

    def __init__(self):
        name = f"strategy.{self.tag.value.lower()}"
        # 推定は大量に実行されるのでロガーは名前ごとに1回だけ作る
        if name not in BaseStrategy._loggers:
            BaseStrategy._loggers[name] = setup_logger(name)
        self.logger = BaseStrategy._loggers[name]

    @property
    def name(self) -> str:
        return self.tag.value

    def sample_pair(self, c: float, rng: np.random.Generator) -> FixedOverlapPair:
        """この戦略で評価する重なり c のランダムペア"""
        if self.dim == 2:
            return sample_pair(c, rng)
        return sample_qudit_pair(c, self.dim, rng)

    @abstractmethod
    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        """N コピーのペアで1回推定する（各サブクラスで実装）"""
        pass

    def validate_budget(self, n: int) -> None:
        """コピー数の事前条件をチェック"""
        if n < 1:
            raise ConfigurationError(f"{self.name}: copy count must be >= 1 (got {n})")

    def _result(self, estimate: float, copies_used: int, **counts) -> EstimationRun:
        return EstimationRun(
            strategy=self.name,
            estimate=float(estimate),
            copies_used=int(copies_used),
            counts=counts,
        )
