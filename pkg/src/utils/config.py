import logging
import os
from typing import Optional

from dotenv import load_dotenv

# .env があれば環境変数として読み込む
load_dotenv()


class Config:
    """設定管理クラス"""

    # 実行環境設定
    THREADS: int = int(os.getenv('OVERLAP_THREADS', '1'))
    LOG_LEVEL: str = os.getenv('OVERLAP_LOG_LEVEL', 'INFO')
    REPORT_DIR: Optional[str] = os.getenv('OVERLAP_REPORT_DIR')

    # 実験設定のデフォルト値
    DEFAULT_STRATEGIES = ("TT", "TP", "SCM", "OST")
    DEFAULT_C_GRID = tuple(round(0.1 * i, 10) for i in range(11))
    DEFAULT_M_PAIRS = 100
    DEFAULT_N_COPIES = 900
    DEFAULT_N_REPEATS = 20
    DEFAULT_R_RUNS = 10
    DEFAULT_SEED = 20240601
    DEFAULT_KAPPA = 11 / 8
    DEFAULT_GAMMA = 0.965
    DEFAULT_ETA = 0.5
    DEFAULT_ALPHA = 1 / 30
    DEFAULT_C_T = 4 / 11
    DEFAULT_BOOTSTRAP = False

    # MUB トモグラフィの解析値
    KAPPA_MUB = 11 / 8

    # 数値許容誤差
    CONSTRUCTION_TOL = 1e-12
    PMF_SUM_TOL = 1e-10
    ROOT_TOL = 1e-9
    OPTIMIZER_TOL = 1e-9
    PROBABILITY_CLIP = 1e-12
    CEIL_RELATIVE_TOL = 1e-12

    # 厳密列挙の上限（1コピー基底あたり N'）
    TT_MAX_PER_BASIS = 4
    TP_MAX_PER_BASIS = 10
    OST_PMF_MAX_COPIES = 10_000

    # モンテカルロ設定
    MIN_ENSEMBLE_SAMPLES = 100
    MIN_KAPPA_SAMPLES = 100
    MIN_KAPPA_COPIES = 30
    TP_FISHER_SAMPLES = 100_000
    TP_FISHER_CHUNK = 1_000
    TP_FISHER_SEED = 7
    CROSSOVER_SCAN_POINTS = 1_000
    MIN_FIT_POINTS = 5

    # oracle-check の判定
    ORACLE_SIGMA = 3.0
    ORACLE_PER_BASIS = (2, 3)
    ORACLE_OVERLAPS = (0.25, 0.5, 0.75)
    ORACLE_SAMPLES = 1_000       # アンサンブル比較のペア数
    ORACLE_REPEATS = 10          # ペアあたりのモンテカルロ推定回数
    ORACLE_SINGLE_RUNS = 20_000  # SCM / OST の単一重なり比較の試行回数
    ORACLE_COPIES = 30

    # 出力設定
    SIGNIFICANT_DIGITS = 9

    @classmethod
    def log_level(cls) -> int:
        """ログレベル名を数値に変換"""
        level = logging.getLevelName(cls.LOG_LEVEL.upper())
        return level if isinstance(level, int) else logging.INFO

    @classmethod
    def validate(cls) -> bool:
        """環境由来の設定が妥当かチェック"""
        problems = []

        if cls.THREADS < 1:
            problems.append(f"OVERLAP_THREADS must be >= 1 (got {cls.THREADS})")

        if not isinstance(logging.getLevelName(cls.LOG_LEVEL.upper()), int):
            problems.append(f"Unknown OVERLAP_LOG_LEVEL: {cls.LOG_LEVEL}")

        if problems:
            for problem in problems:
                logging.getLogger("config").error(problem)
            return False

        return True
