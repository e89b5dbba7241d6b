from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..utils.config import Config
from ..utils.errors import DomainError


@dataclass(frozen=True, eq=False)
class PureState:
    """純粋状態（正規化された複素振幅ベクトル）"""
    amplitudes: np.ndarray  # 複素振幅（グローバル位相は任意）

    def __post_init__(self):
        """正規化と次元のチェック"""
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size < 2:
            raise DomainError(f"state dimension must be >= 2 (got {amplitudes.size})")

        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > Config.CONSTRUCTION_TOL:
            raise DomainError(f"state is not normalized: sum |a|^2 = {norm!r}")

        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    @classmethod
    def basis(cls, index: int, dim: int = 2) -> "PureState":
        """計算基底 |index> を生成"""
        amplitudes = np.zeros(dim, dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    @classmethod
    def from_unnormalized(cls, vector) -> "PureState":
        """任意のベクトルを正規化して状態にする"""
        vector = np.asarray(vector, dtype=complex)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        return cls(vector / norm)

    def with_global_phase(self, phase: float) -> "PureState":
        return PureState(np.exp(1j * phase) * self.amplitudes)


@dataclass(frozen=True)
class Su2Params:
    """SU(2) のオイラー角パラメータ"""
    theta: float  # [0, π]
    beta: float   # [0, 2π)
    omega: float  # [0, 2π)

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise DomainError(f"theta must lie in [0, pi] (got {self.theta})")
        for name in ("beta", "omega"):
            value = getattr(self, name)
            if not 0.0 <= value < 2 * np.pi:
                raise DomainError(f"{name} must lie in [0, 2pi) (got {value})")

    def matrix(self) -> np.ndarray:
        """2×2 ユニタリ行列 U(θ, β, ω)"""
        half = self.theta / 2
        cos, sin = np.cos(half), np.sin(half)
        return np.array([
            [np.exp(1j * (self.beta - self.omega) / 2) * cos,
             -np.exp(-1j * (self.beta + self.omega) / 2) * sin],
            [np.exp(1j * (self.beta + self.omega) / 2) * sin,
             np.exp(-1j * (self.beta - self.omega) / 2) * cos],
        ], dtype=complex)


@dataclass(frozen=True, eq=False)
class FixedOverlapPair:
    """重なりが固定された状態ペア (ψ, φ)"""
    psi: PureState
    phi: PureState
    c: float                      # 目標の重なり |<ψ|φ>|^2
    phase: float = 0.0            # 相対位相 φ
    u: Optional[Su2Params] = field(default=None)  # 量子ビットの場合のみ

    def __post_init__(self):
        if self.psi.dim != self.phi.dim:
            raise DomainError(
                f"pair dimensions differ: {self.psi.dim} vs {self.phi.dim}"
            )
        if not 0.0 <= self.c <= 1.0:
            raise DomainError(f"overlap must lie in [0, 1] (got {self.c})")

        actual = abs(np.vdot(self.psi.amplitudes, self.phi.amplitudes)) ** 2
        if abs(actual - self.c) > Config.CONSTRUCTION_TOL:
            raise DomainError(
                f"pair overlap {actual!r} differs from target {self.c!r}"
            )

    @property
    def dim(self) -> int:
        return self.psi.dim
