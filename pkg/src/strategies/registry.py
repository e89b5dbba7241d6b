from typing import Callable, Dict

from ..models.records import OstPhysics, Strategy
from ..models.report import ExperimentConfig
from .adaptive import AdaptiveStrategy
from .base_strategy import BaseStrategy
from .joint import OpticalSwapTest, QuditSchurCollectiveMeasurement, SchurCollectiveMeasurement
from .separable import (
    KnownStateProjection,
    KnownStateTomography,
    TomographyProjection,
    TomographyTomography,
)

_BUILDERS: Dict[Strategy, Callable[[ExperimentConfig], BaseStrategy]] = {
    Strategy.TT: lambda config: TomographyTomography(),
    Strategy.TP: lambda config: TomographyProjection(),
    Strategy.SCM: lambda config: SchurCollectiveMeasurement(),
    Strategy.SCM_QUDIT: lambda config: QuditSchurCollectiveMeasurement(),
    Strategy.OST: lambda config: OpticalSwapTest(
        OstPhysics(gamma=config.gamma, eta=config.eta, ppnrd=config.ppnrd)
    ),
    Strategy.ADAPTIVE: lambda config: AdaptiveStrategy(config.alpha, config.c_t),
    Strategy.KNOWN_PROJ: lambda config: KnownStateProjection(),
    Strategy.KNOWN_TOMO: lambda config: KnownStateTomography(),
}


def build_strategy(tag, config: ExperimentConfig) -> BaseStrategy:
    """タグとキャンペーン設定から戦略インスタンスを作る"""
    return _BUILDERS[Strategy.parse(tag)](config)
