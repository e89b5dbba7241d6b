from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Tuple

from ..utils.config import Config
from ..utils.errors import ConfigurationError


@dataclass(frozen=True)
class ExperimentConfig:
    """ベンチマークキャンペーンの設定"""
    strategies: Tuple[str, ...] = Config.DEFAULT_STRATEGIES
    c_grid: Tuple[float, ...] = Config.DEFAULT_C_GRID
    m_pairs: int = Config.DEFAULT_M_PAIRS        # M: 重なりあたりのペア数
    n_copies: int = Config.DEFAULT_N_COPIES      # N: 推定あたりのコピー数
    n_repeats: int = Config.DEFAULT_N_REPEATS    # n: ペア・ランあたりの推定回数
    r_runs: int = Config.DEFAULT_R_RUNS          # R: 独立ラン数
    seed: int = Config.DEFAULT_SEED
    kappa: float = Config.DEFAULT_KAPPA
    gamma: float = Config.DEFAULT_GAMMA
    eta: float = Config.DEFAULT_ETA
    alpha: float = Config.DEFAULT_ALPHA
    c_t: float = Config.DEFAULT_C_T
    bootstrap: bool = Config.DEFAULT_BOOTSTRAP

    def __post_init__(self):
        """制約チェック（違反したキー名をメッセージに含める）"""
        checks = [
            ("m_pairs", self.m_pairs >= 2, "must be >= 2"),
            ("n_repeats", self.n_repeats >= 2, "must be >= 2"),
            ("r_runs", self.r_runs >= 1, "must be >= 1"),
            ("n_copies", self.n_copies >= 1, "must be >= 1"),
            ("seed", 0 <= self.seed < 2 ** 64, "must be a 64-bit unsigned integer"),
            ("kappa", self.kappa > 0, "must be positive"),
            ("gamma", 0.0 < self.gamma <= 1.0, "must lie in (0, 1]"),
            ("eta", 0.0 < self.eta < 1.0, "must lie in (0, 1)"),
            ("alpha", 0.0 < self.alpha < 1.0, "must lie in (0, 1)"),
            ("c_t", 0.0 <= self.c_t <= 1.0, "must lie in [0, 1]"),
            ("c_grid", len(self.c_grid) > 0, "must not be empty"),
            ("c_grid", all(0.0 <= c <= 1.0 for c in self.c_grid), "values must lie in [0, 1]"),
            ("strategies", len(self.strategies) > 0, "must not be empty"),
        ]
        for key, ok, message in checks:
            if not ok:
                raise ConfigurationError(f"{key}: {message}")

    @property
    def ppnrd(self) -> bool:
        """η=0.5 のときのみ擬似光子数識別検出を使う"""
        return self.eta == 0.5


@dataclass
class VariancePoint:
    """1つの (戦略, 目標重なり) の集計結果"""
    strategy: str
    c_target: float
    n_copies: int
    c_bar: float = float("nan")          # 推定値から求めた平均厳密重なり
    c_bar_std: float = float("nan")
    v_tilde: float = float("nan")        # 平均分散 ṽ
    v_tilde_std: float = float("nan")    # δṽ
    true_c_bar: float = float("nan")     # サンプルしたペアの真の重なりの平均
    pair_overlaps: List[float] = field(default_factory=list)  # c̄_m
    branch_fractions: Dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def nv(self) -> float:
        return self.n_copies * self.v_tilde

    @property
    def nv_std(self) -> float:
        return self.n_copies * self.v_tilde_std

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class VarianceReport:
    """ベンチマーク全体の結果"""
    config: ExperimentConfig
    points: List[VariancePoint] = field(default_factory=list)

    def for_strategy(self, strategy: str) -> List[VariancePoint]:
        return [p for p in self.points if p.strategy == strategy]

    @property
    def failed_points(self) -> List[VariancePoint]:
        return [p for p in self.points if not p.ok]


@dataclass(frozen=True)
class OutputRow:
    """CSV / JSON 出力の1行"""
    strategy: str
    c_target: float
    c_bar: float
    c_bar_std: float
    n_copies: int
    nv: float
    nv_std: float
    theory_nv: float
    seed: int

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]


@dataclass(frozen=True)
class RunStatistics:
    """推定値配列 [R, M, n] から求めた平均分散と平均厳密重なり"""
    v_tilde: float
    v_tilde_std: float          # R = 1 のときは nan
    c_bar: float
    c_bar_std: float
    pair_overlaps: Tuple[float, ...]
    run_variances: Tuple[float, ...]   # ṽʳ


@dataclass(frozen=True)
class ScaledVarianceFit:
    """Nṽ(c) = α c(1-c) + β の最小二乗フィット"""
    alpha: float
    beta: float
    r_squared: float
    n_points: int
