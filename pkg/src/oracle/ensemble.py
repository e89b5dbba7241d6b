import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Tuple

import numpy as np

from ..models.state import FixedOverlapPair
from ..quantum.sampling import sample_pair
from ..utils.config import Config
from ..utils.errors import ConfigurationError

PairSampler = Callable[[float, np.random.Generator], FixedOverlapPair]


def average_over_ensemble(point_fn: Callable[[FixedOverlapPair], float], c: float,
                          samples: int, rng: np.random.Generator,
                          sampler: PairSampler = sample_pair,
                          workers: Optional[int] = None) -> Tuple[float, float]:
    """重なり c の固定ペア集合で point_fn を平均し (平均, 標準誤差) を返す

    ペアは rng から逐次に生成するので、評価を並列化しても結果は変わらない。
    """
    if samples < Config.MIN_ENSEMBLE_SAMPLES:
        raise ConfigurationError(
            f"ensemble average needs at least {Config.MIN_ENSEMBLE_SAMPLES} samples (got {samples})"
        )

    pairs = [sampler(c, rng) for _ in range(samples)]
    workers = workers or Config.THREADS
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            values = np.array(list(executor.map(point_fn, pairs)), dtype=float)
    else:
        values = np.array([point_fn(pair) for pair in pairs], dtype=float)

    mean = math.fsum(values) / samples
    stderr = float(np.std(values, ddof=1) / np.sqrt(samples))
    return mean, stderr
