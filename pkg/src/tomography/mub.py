from typing import Tuple

import numpy as np
from scipy.stats import binom

from ..models.records import MubCounts
from ..models.state import PureState
from ..utils.errors import ConfigurationError, DomainError

SQRT_HALF = 1 / np.sqrt(2)


def mub_probabilities(psi: PureState) -> Tuple[float, float, float]:
    """(p_x, p_y, p_z) = (|<+|ψ>|^2, |<L|ψ>|^2, |<0|ψ>|^2)"""
    if psi.dim != 2:
        raise DomainError(f"MUB tomography needs a qubit (got dim={psi.dim})")
    a, b = psi.amplitudes
    p_x = abs(SQRT_HALF * (a + b)) ** 2
    p_y = abs(SQRT_HALF * (a - 1j * b)) ** 2
    p_z = abs(a) ** 2
    return tuple(float(min(max(p, 0.0), 1.0)) for p in (p_x, p_y, p_z))


def split_copies(n_total: int) -> int:
    """総コピー数を3基底に等分（割り切れない場合はエラー）"""
    if n_total < 3 or n_total % 3 != 0:
        raise ConfigurationError(
            f"tomography copy count must be a positive multiple of 3 (got {n_total})"
        )
    return n_total // 3


def simulate_mub_counts(psi: PureState, n_total: int, rng: np.random.Generator) -> MubCounts:
    """各パウリ基底で N' = n_total/3 コピーを測定した +1 カウントを生成"""
    n_per = split_copies(n_total)
    p_x, p_y, p_z = mub_probabilities(psi)
    n_x, n_y, n_z = rng.binomial(n_per, [p_x, p_y, p_z])
    return MubCounts(n_x=int(n_x), n_y=int(n_y), n_z=int(n_z), n_per_basis=n_per)


def reconstruct_amplitudes(n_x, n_y, n_z, n_per: int) -> np.ndarray:
    """近似最尤解の振幅をベクトル化して計算（形状 (..., 2)）

    X = Y = 0 のときは |1> 成分の位相因子を +1 とする。
    """
    n_x = np.asarray(n_x, dtype=float)
    n_y = np.asarray(n_y, dtype=float)
    n_z = np.asarray(n_z, dtype=float)

    x = 2 * n_x / n_per - 1
    y = 2 * n_y / n_per - 1
    radius = np.hypot(x, y)
    degenerate = radius == 0
    safe_radius = np.where(degenerate, 1.0, radius)
    phase = np.where(degenerate, 1.0 + 0j, (x + 1j * y) / safe_radius)

    f_z = n_z / n_per
    a0 = np.sqrt(f_z).astype(complex)
    a1 = np.sqrt(np.clip(1.0 - f_z, 0.0, 1.0)) * phase
    amplitudes = np.stack([a0, a1], axis=-1)
    norms = np.linalg.norm(amplitudes, axis=-1, keepdims=True)
    return amplitudes / norms


def reconstruct(counts: MubCounts) -> PureState:
    """カウントから状態 |ψ̃> を再構成"""
    amplitudes = reconstruct_amplitudes(counts.n_x, counts.n_y, counts.n_z, counts.n_per_basis)
    return PureState(amplitudes)


def tomography(psi: PureState, n_total: int, rng: np.random.Generator) -> Tuple[PureState, MubCounts]:
    """測定と再構成をまとめて実行"""
    counts = simulate_mub_counts(psi, n_total, rng)
    return reconstruct(counts), counts


def outcome_distribution(psi: PureState, n_per: int) -> Tuple[np.ndarray, np.ndarray]:
    """全ての (n_x, n_y, n_z) に対する再構成状態と確率を列挙

    Returns:
        (amplitudes (K, 2), probabilities (K,)) with K = (N'+1)^3
    """
    p_x, p_y, p_z = mub_probabilities(psi)
    ks = np.arange(n_per + 1)
    b_x = binom.pmf(ks, n_per, p_x)
    b_y = binom.pmf(ks, n_per, p_y)
    b_z = binom.pmf(ks, n_per, p_z)

    g_x, g_y, g_z = (g.ravel() for g in np.meshgrid(ks, ks, ks, indexing="ij"))
    probabilities = b_x[g_x] * b_y[g_y] * b_z[g_z]
    amplitudes = reconstruct_amplitudes(g_x, g_y, g_z, n_per)
    return amplitudes, probabilities
