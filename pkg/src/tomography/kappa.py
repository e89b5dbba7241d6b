from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit

from ..models.records import KappaFit
from ..models.state import PureState
from ..quantum.sampling import haar_su2
from ..utils.config import Config
from ..utils.errors import ConfigurationError, FitError
from ..utils.logger import setup_logger
from .mub import mub_probabilities, reconstruct_amplitudes, split_copies

logger = setup_logger("tomography.kappa")


def tomography_infidelity(psi: PureState, n_total: int, repeats: int,
                          rng: np.random.Generator) -> np.ndarray:
    """同じ状態を repeats 回トモグラフィしたときの不忠実度 1-|<ψ|ψ̃>|^2"""
    n_per = split_copies(n_total)
    probabilities = mub_probabilities(psi)
    counts = rng.binomial(n_per, probabilities, size=(repeats, 3))
    estimates = reconstruct_amplitudes(counts[:, 0], counts[:, 1], counts[:, 2], n_per)
    fidelity = np.abs(estimates.conj() @ psi.amplitudes) ** 2
    return np.clip(1.0 - fidelity, 0.0, 1.0)


def average_infidelity(n_total: int, samples: int, repeats: int,
                       rng: np.random.Generator) -> Tuple[float, float]:
    """Haar ランダム状態で平均した不忠実度とその標準誤差"""
    per_state = np.empty(samples)
    for i in range(samples):
        psi = PureState(haar_su2(rng).matrix()[:, 0])
        per_state[i] = tomography_infidelity(psi, n_total, repeats, rng).mean()
    return float(per_state.mean()), float(per_state.std(ddof=1) / np.sqrt(samples))


def _inverse_law(n, kappa):
    return kappa / n


def estimate_kappa(n_grid: Sequence[int], samples_per_point: int, repeats: int,
                   rng: np.random.Generator) -> KappaFit:
    """1-F̄ = κ/N を最小二乗でフィットして κ を推定"""
    if samples_per_point < Config.MIN_KAPPA_SAMPLES:
        raise ConfigurationError(
            f"samples_per_point must be >= {Config.MIN_KAPPA_SAMPLES} (got {samples_per_point})"
        )
    if repeats < 1:
        raise ConfigurationError(f"repeats must be >= 1 (got {repeats})")
    if len(n_grid) == 0:
        raise ConfigurationError("n_grid must not be empty")
    for n in n_grid:
        split_copies(n)
        if n < Config.MIN_KAPPA_COPIES:
            raise ConfigurationError(
                f"copy counts must be >= {Config.MIN_KAPPA_COPIES} (got {n})"
            )

    means, errors = [], []
    for n in n_grid:
        mean, stderr = average_infidelity(n, samples_per_point, repeats, rng)
        logger.info(f"n={n}: mean infidelity {mean:.6g} ± {stderr:.2g} (n·(1-F) = {n * mean:.4f})")
        means.append(mean)
        errors.append(stderr)

    n_values = np.asarray(n_grid, dtype=float)
    sigma = np.asarray(errors)
    if np.any(sigma <= 0):
        sigma = None

    try:
        popt, pcov = curve_fit(
            _inverse_law, n_values, np.asarray(means),
            p0=[Config.KAPPA_MUB], sigma=sigma, absolute_sigma=sigma is not None,
        )
    except (RuntimeError, ValueError) as e:
        raise FitError(f"kappa fit failed: {e}") from e

    kappa = float(popt[0])
    stderr = float(np.sqrt(pcov[0, 0])) if np.isfinite(pcov[0, 0]) else float("nan")
    logger.info(f"Fitted kappa = {kappa:.4f} ± {stderr:.4f}")

    return KappaFit(
        kappa=kappa,
        stderr=stderr,
        n_grid=tuple(int(n) for n in n_grid),
        mean_infidelity=tuple(means),
        infidelity_stderr=tuple(errors),
    )
