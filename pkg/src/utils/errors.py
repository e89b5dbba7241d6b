class OverlapEstimationError(Exception):
    """パッケージ共通の基底例外"""


class DomainError(OverlapEstimationError, ValueError):
    """数学的な定義域外の入力"""


class ConfigurationError(OverlapEstimationError, ValueError):
    """設定・コピー数の制約違反"""


class ConfigParseError(ConfigurationError):
    """キャンペーン設定ファイルの解析エラー"""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class EnumerationBoundError(OverlapEstimationError):
    """厳密列挙の上限超過"""


class NoCrossoverError(OverlapEstimationError):
    """2つの分散曲線が (0,1) で交差しない"""


class FitError(OverlapEstimationError):
    """最小二乗フィットの失敗"""


class ReportWriteError(OverlapEstimationError, OSError):
    """レポート出力の I/O エラー"""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"Failed to write report to {path}: {reason}")
