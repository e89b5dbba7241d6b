import numpy as np

from ..utils.errors import ConfigurationError


def bootstrap_runs(single_run: np.ndarray, r_runs: int, rng: np.random.Generator) -> np.ndarray:
    """1ラン分の推定値 [M, n] をペアごとに復元抽出し、R 個の合成ラン [R, M, n] を作る"""
    single_run = np.asarray(single_run, dtype=float)
    if single_run.ndim != 2:
        raise ConfigurationError(f"single run must have shape (M, n) (got {single_run.shape})")
    m_pairs, n_repeats = single_run.shape
    if n_repeats < 2:
        raise ConfigurationError(f"bootstrap needs n >= 2 repeats per pair (got {n_repeats})")
    if r_runs < 1:
        raise ConfigurationError(f"r_runs must be >= 1 (got {r_runs})")

    indices = rng.integers(0, n_repeats, size=(r_runs, m_pairs, n_repeats))
    tiled = np.broadcast_to(single_run, (r_runs, m_pairs, n_repeats))
    return np.take_along_axis(tiled, indices, axis=2)
