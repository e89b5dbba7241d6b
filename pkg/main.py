#!/usr/bin/env python3

import sys
import os

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.cli.commands import dispatch
from src.utils.config import Config
from src.utils.errors import OverlapEstimationError
from src.utils.logger import setup_logger, BenchmarkStats


def main(argv=None) -> int:
    """重なり推定ベンチマークのエントリポイント"""
    logger = setup_logger("main")
    stats = BenchmarkStats()

    # 設定の検証
    if not Config.validate():
        logger.error("Configuration validation failed")
        return 1

    exit_code = 0
    try:
        exit_code = dispatch(argv, stats)

    except SystemExit:
        # argparse の使用法エラー（終了コード 2）はそのまま伝える
        raise

    except OverlapEstimationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        stats.add_error(stats.command, str(e))
        exit_code = 1

    except Exception as e:
        logger.error(f"Unexpected error in {stats.command}: {e}", exc_info=True)
        stats.add_error(stats.command, str(e))
        exit_code = 1

    finally:
        # 統計情報をログ出力
        if stats.total_points or stats.errors:
            logger.info(stats.get_summary())

    if stats.failed and exit_code == 0:
        exit_code = 1
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
