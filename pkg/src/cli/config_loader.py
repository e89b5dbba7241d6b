import os
from fractions import Fraction
from typing import Callable, Dict, Tuple

from dotenv import dotenv_values

from ..models.records import Strategy
from ..models.report import ExperimentConfig
from ..utils.errors import ConfigParseError, ConfigurationError, DomainError

_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


def _parse_int(value: str) -> int:
    return int(value.strip())


def _parse_real(value: str) -> float:
    # "1/30" のような分数表記も受け付ける
    return float(Fraction(value.strip()))


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"expected one of true/false/1/0/yes/no, got {value!r}")


def _split(value: str) -> Tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


def _parse_strategies(value: str) -> Tuple[str, ...]:
    return tuple(Strategy.parse(item).value for item in _split(value))


def _parse_grid(value: str) -> Tuple[float, ...]:
    return tuple(_parse_real(item) for item in _split(value))


PARSERS: Dict[str, Callable[[str], object]] = {
    "strategies": _parse_strategies,
    "c_grid": _parse_grid,
    "m_pairs": _parse_int,
    "n_copies": _parse_int,
    "n_repeats": _parse_int,
    "r_runs": _parse_int,
    "seed": _parse_int,
    "kappa": _parse_real,
    "gamma": _parse_real,
    "eta": _parse_real,
    "alpha": _parse_real,
    "c_t": _parse_real,
    "bootstrap": _parse_bool,
}


def parse_config(path: str) -> ExperimentConfig:
    """設定ファイルを読み込んで検証済みの ExperimentConfig を返す

    指定のないキーはデフォルト値（M=100, N=900, n=20, R=10 ほか）になる。
    """
    if not os.path.isfile(path):
        raise ConfigurationError(f"config file not found: {path}")

    values = {}
    for key, raw in dotenv_values(path, interpolate=False).items():
        if key not in PARSERS:
            raise ConfigParseError(key, f"unknown key (allowed: {', '.join(PARSERS)})")
        if raw is None:
            raise ConfigParseError(key, "missing value")
        try:
            values[key] = PARSERS[key](raw)
        except (ValueError, ZeroDivisionError, DomainError) as e:
            raise ConfigParseError(key, f"invalid value {raw!r}: {e}") from None

    try:
        return ExperimentConfig(**values)
    except ConfigurationError as e:
        key, _, message = str(e).partition(": ")
        raise ConfigParseError(key, message) from None


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_format_value(item) for item in value)
    return str(value)


def serialize_config(config: ExperimentConfig) -> str:
    """parse_config で同一の設定に戻る key=value 形式の文字列"""
    lines = [f"{key}={_format_value(getattr(config, key))}" for key in PARSERS]
    return "\n".join(lines) + "\n"
