import csv
import io
import json
import math
import os
from typing import List

from ..analytics.ost import ost_binary_variance
from ..analytics.variance import scaled_variance
from ..models.records import Strategy, TheoryParams
from ..models.report import ExperimentConfig, OutputRow, VariancePoint, VarianceReport
from ..utils.config import Config
from ..utils.errors import ConfigurationError, ReportWriteError
from ..utils.logger import setup_logger

logger = setup_logger("cli.report")

FORMATS = ("csv", "json")
_INTEGER_FIELDS = {"n_copies", "seed"}
_TEXT_FIELDS = {"strategy"}


def theory_nv(strategy, c: float, params: TheoryParams = TheoryParams()) -> float:
    """解析式のスケール分散 Nv

    ADAPTIVE は TP と SCM の小さい方、η≠0.5 の OST は二値検出の補正推定量の分散。
    """
    strategy = Strategy.parse(strategy)

    if strategy is Strategy.ADAPTIVE:
        return min(scaled_variance(Strategy.TP, c, params), scaled_variance(Strategy.SCM, c, params))
    if strategy is Strategy.OST and params.eta != 0.5:
        return ost_binary_variance(c, 1, params.physics(ppnrd=False))
    return scaled_variance(strategy, c, params)


def theory_params(config: ExperimentConfig) -> TheoryParams:
    return TheoryParams(kappa=config.kappa, gamma=config.gamma, eta=config.eta)


def to_row(point: VariancePoint, config: ExperimentConfig) -> OutputRow:
    return OutputRow(
        strategy=point.strategy,
        c_target=point.c_target,
        c_bar=point.c_bar,
        c_bar_std=point.c_bar_std,
        n_copies=point.n_copies,
        nv=point.nv,
        nv_std=point.nv_std,
        theory_nv=theory_nv(point.strategy, point.c_target, theory_params(config)),
        seed=config.seed,
    )


def report_rows(report: VarianceReport) -> List[OutputRow]:
    return [to_row(point, report.config) for point in report.points]


def _format_real(value: float) -> str:
    return "%.*g" % (Config.SIGNIFICANT_DIGITS, value)


def _row_values(row: OutputRow) -> dict:
    values = {}
    for name in OutputRow.field_names():
        value = getattr(row, name)
        if name in _TEXT_FIELDS or name in _INTEGER_FIELDS:
            values[name] = value
        else:
            values[name] = _format_real(value)
    return values


def render_report(report: VarianceReport, fmt: str = "csv") -> str:
    """レポートを CSV または JSON 文字列にする（実数は有効数字9桁）"""
    fmt = fmt.lower()
    rows = report_rows(report)

    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=OutputRow.field_names(), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(_row_values(row))
        return buffer.getvalue()

    if fmt == "json":
        records = []
        for row in rows:
            record = _row_values(row)
            for name, value in record.items():
                if name not in _TEXT_FIELDS and name not in _INTEGER_FIELDS:
                    # 失敗した点や R = 1 の nv_std は null
                    number = float(value)
                    record[name] = None if math.isnan(number) else number
            records.append(record)
        return json.dumps(records, indent=2, allow_nan=False) + "\n"

    raise ConfigurationError(f"unknown report format {fmt!r} (expected one of {FORMATS})")


def emit_report(report: VarianceReport, fmt: str, path: str) -> None:
    """レポートをファイルへ書き出す"""
    content = render_report(report, fmt)
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(content)
    except OSError as e:
        raise ReportWriteError(path, str(e)) from e

    logger.info(f"Wrote {len(report.points)} rows to {path} ({fmt})")


def _coerce(name: str, value) -> object:
    if name in _TEXT_FIELDS:
        return str(value)
    if name in _INTEGER_FIELDS:
        return int(value)
    if value is None:
        return math.nan
    return float(value)


def read_report(path: str) -> List[OutputRow]:
    """CSV / JSON レポートを OutputRow のリストとして読み戻す"""
    with open(path, encoding="utf-8", newline="") as f:
        content = f.read()

    if path.lower().endswith(".json") or content.lstrip().startswith("["):
        records = json.loads(content)
    else:
        records = list(csv.DictReader(io.StringIO(content)))

    return [
        OutputRow(**{name: _coerce(name, record[name]) for name in OutputRow.field_names()})
        for record in records
    ]


def rows_equal(a: List[OutputRow], b: List[OutputRow]) -> bool:
    """nan を等しいとみなして行を比較"""
    if len(a) != len(b):
        return False
    for row_a, row_b in zip(a, b):
        for name in OutputRow.field_names():
            x, y = getattr(row_a, name), getattr(row_b, name)
            if isinstance(x, float) and isinstance(y, float) and math.isnan(x) and math.isnan(y):
                continue
            if x != y:
                return False
    return True
