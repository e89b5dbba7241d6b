import logging
import sys
import threading
from datetime import datetime
from typing import Optional

from .config import Config


def setup_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """ロガーをセットアップ"""

    if level is None:
        level = Config.log_level()

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # 既存のハンドラーがある場合は削除
    if logger.handlers:
        logger.handlers.clear()

    # フォーマッター作成
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # 標準出力はデータ用なのでログは stderr へ
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    return logger


class BenchmarkStats:
    """ベンチマーク実行統計クラス"""

    def __init__(self, command: str = "benchmark"):
        self.command = command
        self.start_time = datetime.now()
        self.strategies = {}
        self.total_points = 0
        self.total_runs = 0
        self.errors = []
        self._lock = threading.Lock()

    def add_point(self, strategy: str, runs: int):
        """戦略別の完了ポイントを追加"""
        with self._lock:
            entry = self.strategies.setdefault(strategy, {"points": 0, "runs": 0})
            entry["points"] += 1
            entry["runs"] += runs
            self.total_points += 1
            self.total_runs += runs

    def add_error(self, source: str, error: str):
        """エラーを追加"""
        with self._lock:
            self.errors.append({
                "source": source,
                "error": error,
                "timestamp": datetime.now()
            })

    @property
    def failed(self) -> bool:
        return bool(self.errors)

    def get_summary(self) -> str:
        """統計サマリーを取得"""
        duration = datetime.now() - self.start_time

        summary = f"""
=== Overlap Benchmark Summary ({self.command}) ===
Duration: {duration.total_seconds():.2f} seconds
Total Points: {self.total_points}
Total Estimation Runs: {self.total_runs}

Strategy Breakdown:"""

        for strategy, stats in self.strategies.items():
            summary += f"\n  {strategy}: {stats['points']} points, {stats['runs']} runs"

        if self.errors:
            summary += f"\n\nErrors ({len(self.errors)}):"
            for error in self.errors:
                summary += f"\n  {error['source']}: {error['error']}"

        summary += "\n" + "=" * 40

        return summary
