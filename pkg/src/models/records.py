from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from ..utils.config import Config
from ..utils.errors import ConfigurationError, DomainError


class Strategy(str, Enum):
    """重なり推定戦略のタグ"""
    TT = "TT"
    TP = "TP"
    SCM = "SCM"
    OST = "OST"
    ADAPTIVE = "ADAPTIVE"
    SCM_QUDIT = "SCM_QUDIT"
    KNOWN_PROJ = "KNOWN_PROJ"
    KNOWN_TOMO = "KNOWN_TOMO"

    @classmethod
    def parse(cls, value: "str | Strategy") -> "Strategy":
        """大文字小文字・ハイフンを許容してタグを解釈"""
        if isinstance(value, Strategy):
            return value
        normalized = str(value).strip().upper().replace("-", "_")
        try:
            return cls(normalized)
        except ValueError:
            raise DomainError(f"unknown strategy tag: {value!r}") from None


@dataclass(frozen=True)
class MubCounts:
    """MUB（パウリ）測定の +1 カウント"""
    n_x: int
    n_y: int
    n_z: int
    n_per_basis: int  # 基底ごとのコピー数 N'

    def __post_init__(self):
        if self.n_per_basis < 1:
            raise DomainError(f"n_per_basis must be positive (got {self.n_per_basis})")
        for name in ("n_x", "n_y", "n_z"):
            value = getattr(self, name)
            if not 0 <= value <= self.n_per_basis:
                raise DomainError(
                    f"{name}={value} outside [0, {self.n_per_basis}]"
                )


@dataclass(frozen=True)
class KappaFit:
    """スケール平均不忠実度 κ のフィット結果"""
    kappa: float
    stderr: float
    n_grid: Tuple[int, ...]
    mean_infidelity: Tuple[float, ...] = ()
    infidelity_stderr: Tuple[float, ...] = ()


@dataclass(frozen=True)
class OstPhysics:
    """光学スワップテストの不完全性パラメータ"""
    gamma: float = 1.0    # 内部モードの識別不能度 Γ
    eta: float = 0.5      # ビームスプリッタ反射率 η
    ppnrd: bool = True    # 擬似光子数識別検出

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigurationError(f"gamma must lie in (0, 1] (got {self.gamma})")
        if not 0.0 < self.eta < 1.0:
            raise ConfigurationError(f"eta must lie in (0, 1) (got {self.eta})")


@dataclass(frozen=True)
class EstimationRun:
    """1回の推定実行の結果"""
    strategy: str
    estimate: float          # 生の推定値（クランプなし）
    copies_used: int
    counts: Dict[str, Any] = field(default_factory=dict)

    def clamped(self) -> float:
        """推定値を [0, 1] に丸めた値"""
        return clamp_estimate(self.estimate)


def clamp_estimate(value: float) -> float:
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class TheoryParams:
    """解析式のパラメータ"""
    kappa: float = Config.KAPPA_MUB
    gamma: float = 1.0
    eta: float = 0.5
    dim: int = 2

    def __post_init__(self):
        if self.kappa <= 0:
            raise ConfigurationError(f"kappa must be positive (got {self.kappa})")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigurationError(f"gamma must lie in (0, 1] (got {self.gamma})")
        if not 0.0 < self.eta < 1.0:
            raise ConfigurationError(f"eta must lie in (0, 1) (got {self.eta})")
        if self.dim < 2:
            raise ConfigurationError(f"dim must be >= 2 (got {self.dim})")

    def physics(self, ppnrd: bool = True) -> OstPhysics:
        return OstPhysics(gamma=self.gamma, eta=self.eta, ppnrd=ppnrd)


@dataclass(frozen=True)
class ExactResult:
    """厳密列挙による推定量のモーメント"""
    mean: float
    variance: float       # 真の重なり c まわりの二乗誤差の期待値
    support_size: int
    total_probability: Optional[float] = None

    def __post_init__(self):
        if self.variance < 0:
            raise DomainError(f"variance must be non-negative (got {self.variance})")
