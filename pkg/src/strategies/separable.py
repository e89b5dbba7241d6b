from typing import Tuple

import numpy as np

from ..models.records import EstimationRun, MubCounts, Strategy
from ..models.state import FixedOverlapPair
from ..quantum.sampling import overlap
from ..tomography.mub import split_copies, tomography
from .base_strategy import BaseStrategy


def tomography_projection(pair: FixedOverlapPair, n_tomo: int, n_proj: int,
                          rng: np.random.Generator) -> Tuple[int, MubCounts, float]:
    """φ を n_tomo コピーで再構成し、ψ を n_proj 回 |φ̃> に射影する

    Returns:
        (射影成功数 k, φ のトモグラフィカウント, 射影成功確率 p_tp)
    """
    phi_estimate, counts = tomography(pair.phi, n_tomo, rng)
    p_tp = overlap(pair.psi, phi_estimate)
    k = int(rng.binomial(n_proj, p_tp))
    return k, counts, p_tp


class TomographyTomography(BaseStrategy):
    """両方の状態をトモグラフィして重なりを計算"""

    tag = Strategy.TT

    def validate_budget(self, n: int) -> None:
        split_copies(n)

    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        self.validate_budget(n)
        psi_estimate, psi_counts = tomography(pair.psi, n, rng)
        phi_estimate, phi_counts = tomography(pair.phi, n, rng)
        estimate = overlap(psi_estimate, phi_estimate)
        return self._result(estimate, n, psi=psi_counts, phi=phi_counts)


class TomographyProjection(BaseStrategy):
    """φ をトモグラフィし、ψ を推定状態へ射影"""

    tag = Strategy.TP

    def validate_budget(self, n: int) -> None:
        split_copies(n)

    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        self.validate_budget(n)
        k, phi_counts, _ = tomography_projection(pair, n, n, rng)
        return self._result(k / n, n, phi=phi_counts, k=k)


class KnownStateProjection(BaseStrategy):
    """φ が既知の場合: ψ を φ に直接射影"""

    tag = Strategy.KNOWN_PROJ

    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        self.validate_budget(n)
        k = int(rng.binomial(n, overlap(pair.psi, pair.phi)))
        return self._result(k / n, n, k=k)


class KnownStateTomography(BaseStrategy):
    """φ が既知の場合: ψ をトモグラフィして既知の φ との重なりを計算"""

    tag = Strategy.KNOWN_TOMO

    def validate_budget(self, n: int) -> None:
        split_copies(n)

    def run(self, pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
        self.validate_budget(n)
        psi_estimate, psi_counts = tomography(pair.psi, n, rng)
        return self._result(overlap(psi_estimate, pair.phi), n, psi=psi_counts)


_TT = TomographyTomography()
_TP = TomographyProjection()
_KNOWN_PROJ = KnownStateProjection()
_KNOWN_TOMO = KnownStateTomography()


def run_tt(pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
    return _TT.run(pair, n, rng)


def run_tp(pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
    return _TP.run(pair, n, rng)


def run_known_projection(pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
    return _KNOWN_PROJ.run(pair, n, rng)


def run_known_tomography(pair: FixedOverlapPair, n: int, rng: np.random.Generator) -> EstimationRun:
    return _KNOWN_TOMO.run(pair, n, rng)
