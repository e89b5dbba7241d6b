import numpy as np

from ..models.records import Strategy

# spawn_key の先頭要素で用途を分ける
PAIR_STREAM = 0
RUN_STREAM = 1
BOOTSTRAP_STREAM = 2
ORACLE_STREAM = 3


def strategy_code(tag) -> int:
    """キャンペーン内の並び順に依存しない戦略番号（1始まり）"""
    return list(Strategy).index(Strategy.parse(tag)) + 1


def _generator(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def pair_stream(seed: int, c_index: int, m: int) -> np.random.Generator:
    """(c, m) ごとのペア生成ストリーム（全戦略で共通）"""
    return _generator(seed, PAIR_STREAM, c_index, m)


def run_stream(seed: int, tag, c_index: int, m: int, r: int, j: int) -> np.random.Generator:
    return _generator(seed, RUN_STREAM, strategy_code(tag), c_index, m, r, j)


def bootstrap_stream(seed: int, tag, c_index: int) -> np.random.Generator:
    return _generator(seed, BOOTSTRAP_STREAM, strategy_code(tag), c_index)


def oracle_stream(seed: int, check_index: int, part: int) -> np.random.Generator:
    """oracle-check の各比較用ストリーム"""
    return _generator(seed, ORACLE_STREAM, check_index, part)
