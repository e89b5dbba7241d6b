import numpy as np

from ..models.state import FixedOverlapPair, PureState, Su2Params
from ..utils.errors import DomainError


def haar_su2(rng: np.random.Generator) -> Su2Params:
    """SU(2) 上の Haar 測度からパラメータをサンプリング

    θ は密度 sin(θ)/2 に従うので逆関数法 θ = arccos(1-2u) で引く。
    β, ω は [0, 2π) 上の一様分布。
    """
    u = rng.random()
    theta = float(np.arccos(1.0 - 2.0 * u))
    beta = float(2 * np.pi * rng.random())
    omega = float(2 * np.pi * rng.random())
    return Su2Params(theta=theta, beta=beta, omega=omega)


def overlap(a: PureState, b: PureState) -> float:
    """重なり |<a|b>|^2"""
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")
    value = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(value, 1.0))


def _check_overlap(c: float) -> float:
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1] (got {c})")
    return float(c)


def pair_from_parameters(c: float, u: Su2Params, phase: float) -> FixedOverlapPair:
    """ψ = U|0>, φ = U(√c|0> + e^{iφ}√(1-c)|1>)"""
    c = _check_overlap(c)
    matrix = u.matrix()
    psi = matrix[:, 0]
    phi = matrix @ np.array([np.sqrt(c), np.exp(1j * phase) * np.sqrt(1.0 - c)])
    return FixedOverlapPair(
        psi=PureState(psi), phi=PureState(phi), c=c, phase=float(phase), u=u
    )


def sample_pair(c: float, rng: np.random.Generator) -> FixedOverlapPair:
    """重なり c の Haar ランダムな量子ビットペアをサンプリング"""
    c = _check_overlap(c)
    u = haar_su2(rng)
    phase = float(2 * np.pi * rng.random())
    return pair_from_parameters(c, u, phase)


def haar_state(dim: int, rng: np.random.Generator) -> PureState:
    """複素ガウスベクトルの正規化で Haar ランダム状態を生成"""
    if dim < 2:
        raise DomainError(f"dimension must be >= 2 (got {dim})")
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.from_unnormalized(vector)


def sample_qudit_pair(c: float, d: int, rng: np.random.Generator) -> FixedOverlapPair:
    """d 次元で重なり c のペアをサンプリング

    φ = √c ψ + √(1-c) ψ⊥ とし、ψ⊥ はガウスベクトルを ψ に対して
    グラム・シュミット直交化して得る（ψ の直交補空間上で Haar）。
    """
    c = _check_overlap(c)
    if d < 2:
        raise DomainError(f"dimension must be >= 2 (got {d})")

    psi = haar_state(d, rng)
    gaussian = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    orthogonal = gaussian - np.vdot(psi.amplitudes, gaussian) * psi.amplitudes
    orthogonal = orthogonal / np.linalg.norm(orthogonal)

    phi = np.sqrt(c) * psi.amplitudes + np.sqrt(1.0 - c) * orthogonal
    # 丸め誤差を吸収するため再正規化
    phi = phi / np.linalg.norm(phi)
    return FixedOverlapPair(psi=psi, phi=PureState(phi), c=c, phase=0.0, u=None)
