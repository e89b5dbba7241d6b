from typing import Optional, Sequence, Union

import numpy as np

from ..models.records import Strategy
from ..models.report import ScaledVarianceFit, VariancePoint, VarianceReport
from ..utils.config import Config
from ..utils.errors import DomainError, FitError


def fit_scaled_curve(c_values: Sequence[float], nv_values: Sequence[float]) -> ScaledVarianceFit:
    """Nṽ(c) = α c(1-c) + β を最小二乗でフィット"""
    c = np.asarray(c_values, dtype=float)
    nv = np.asarray(nv_values, dtype=float)
    finite = np.isfinite(c) & np.isfinite(nv)
    c, nv = c[finite], nv[finite]

    if len(c) < Config.MIN_FIT_POINTS:
        raise FitError(f"fit needs at least {Config.MIN_FIT_POINTS} points (got {len(c)})")

    design = np.column_stack([c * (1 - c), np.ones_like(c)])
    coefficients, _, rank, _ = np.linalg.lstsq(design, nv, rcond=None)
    if rank < 2:
        raise FitError("singular design: overlaps do not vary c(1-c)")

    alpha, beta = coefficients
    residual = float(np.sum((nv - design @ coefficients) ** 2))
    total = float(np.sum((nv - nv.mean()) ** 2))
    if total == 0:
        r_squared = 1.0 if residual == 0 else 0.0
    else:
        r_squared = 1.0 - residual / total
    return ScaledVarianceFit(alpha=float(alpha), beta=float(beta),
                             r_squared=r_squared, n_points=len(c))


def fit_scaled_variance(report: Union[VarianceReport, Sequence[VariancePoint]],
                        strategy: Optional[str] = None) -> ScaledVarianceFit:
    """レポート（または点列）の成功した点を目標重なりに対してフィット"""
    tag = Strategy.parse(strategy).value if strategy is not None else None
    if isinstance(report, VarianceReport):
        points = report.points if tag is None else report.for_strategy(tag)
    else:
        points = [p for p in report if tag is None or p.strategy == tag]

    tags = {p.strategy for p in points}
    if len(tags) > 1:
        raise DomainError(f"report mixes strategies {sorted(tags)}; pass strategy=")

    points = [p for p in points if p.ok]
    return fit_scaled_curve([p.c_target for p in points], [p.nv for p in points])
