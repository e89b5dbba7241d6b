import argparse
import dataclasses
import os
import sys
from typing import Callable, Dict, List, Optional

import numpy as np

from ..analytics.planning import copy_overhead, crossover
from ..harness.benchmark import run_benchmark
from ..models.records import Strategy, TheoryParams
from ..models.report import ExperimentConfig
from ..oracle.check import run_oracle_check
from ..tomography.kappa import estimate_kappa
from ..utils.config import Config
from ..utils.logger import BenchmarkStats, setup_logger
from .config_loader import parse_config
from .report_writer import FORMATS, emit_report, render_report, theory_nv

logger = setup_logger("cli")

DEFAULT_KAPPA_GRID = "300,900,3000"


def format_number(value: float) -> str:
    """有効数字9桁に丸めて最短表記で出力（1.0, 0.363636364 など）"""
    return repr(float("%.*g" % (Config.SIGNIFICANT_DIGITS, value)))


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _add_theory_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kappa", type=float, default=Config.KAPPA_MUB, help="scaled average infidelity")
    parser.add_argument("--gamma", type=float, default=1.0, help="internal-mode indistinguishability")
    parser.add_argument("--eta", type=float, default=0.5, help="beam-splitter reflectivity")
    parser.add_argument("--dim", type=int, default=2, help="Hilbert-space dimension")


def _theory_params(args: argparse.Namespace) -> TheoryParams:
    return TheoryParams(kappa=args.kappa, gamma=args.gamma, eta=args.eta, dim=args.dim)


def _load_campaign(args: argparse.Namespace) -> ExperimentConfig:
    config = parse_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    return config


def cmd_benchmark(args: argparse.Namespace, stats: BenchmarkStats) -> int:
    config = _load_campaign(args)
    report = run_benchmark(config, workers=args.threads, stats=stats)

    if args.out:
        path = args.out
        # 相対パスは OVERLAP_REPORT_DIR 基準
        if Config.REPORT_DIR and not os.path.isabs(path):
            path = os.path.join(Config.REPORT_DIR, path)
        emit_report(report, args.format, path)
    else:
        sys.stdout.write(render_report(report, args.format))

    if report.failed_points:
        logger.error(f"{len(report.failed_points)} benchmark point(s) failed")
        return 1
    return 0


def cmd_theory(args: argparse.Namespace, stats: BenchmarkStats) -> int:
    if not 0.0 <= args.c <= 1.0:
        logger.error(f"--c must lie in [0, 1] (got {args.c})")
        return 1
    value = theory_nv(Strategy.parse(args.strategy), args.c, _theory_params(args))
    print(f"Nv = {format_number(value)}")
    print(f"v = {format_number(value / args.n)}")
    return 0


def cmd_crossover(args: argparse.Namespace, stats: BenchmarkStats) -> int:
    value = crossover(args.a, args.b, _theory_params(args))
    print(format_number(value))
    return 0


def cmd_overhead(args: argparse.Namespace, stats: BenchmarkStats) -> int:
    print(copy_overhead(args.strategy, args.c, args.eps, args.prob, _theory_params(args)))
    return 0


def cmd_oracle_check(args: argparse.Namespace, stats: BenchmarkStats) -> int:
    config = _load_campaign(args)
    comparisons = run_oracle_check(config)

    for comparison in comparisons:
        print(comparison.describe())
        if not comparison.passed:
            stats.add_error("oracle", comparison.describe())

    return 0 if all(c.passed for c in comparisons) else 1


def cmd_kappa_fit(args: argparse.Namespace, stats: BenchmarkStats) -> int:
    seed = Config.DEFAULT_SEED if args.seed is None else args.seed
    fit = estimate_kappa(args.n_grid, args.samples, args.repeats, np.random.default_rng(seed))

    for n, mean, stderr in zip(fit.n_grid, fit.mean_infidelity, fit.infidelity_stderr):
        print(f"N = {n}: 1-F = {format_number(mean)} +/- {format_number(stderr)}")
    print(f"kappa = {format_number(fit.kappa)} +/- {format_number(fit.stderr)}")
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, BenchmarkStats], int]] = {
    "benchmark": cmd_benchmark,
    "theory": cmd_theory,
    "crossover": cmd_crossover,
    "overhead": cmd_overhead,
    "oracle-check": cmd_oracle_check,
    "kappa-fit": cmd_kappa_fit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overlap-bench",
        description="Overlap estimation strategies: simulation, theory and oracle checks",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    benchmark = subparsers.add_parser("benchmark", help="run a benchmark campaign")
    benchmark.add_argument("config", help="campaign file (key=value)")
    benchmark.add_argument("--out", help="output path (stdout when omitted)")
    benchmark.add_argument("--format", choices=FORMATS, default="csv")
    benchmark.add_argument("--threads", type=_positive_int, default=None,
                           help="worker threads (default: OVERLAP_THREADS)")

    theory = subparsers.add_parser("theory", help="print the scaled average variance")
    theory.add_argument("--strategy", required=True)
    theory.add_argument("--c", type=float, required=True)
    theory.add_argument("--n", type=_positive_int, default=Config.DEFAULT_N_COPIES)
    _add_theory_params(theory)

    cross = subparsers.add_parser("crossover", help="overlap where two strategies perform equally")
    cross.add_argument("--a", required=True)
    cross.add_argument("--b", required=True)
    _add_theory_params(cross)

    overhead = subparsers.add_parser("overhead", help="pairs needed for an (epsilon, eta) guarantee")
    overhead.add_argument("--strategy", required=True)
    overhead.add_argument("--c", type=float, required=True)
    overhead.add_argument("--eps", type=float, required=True)
    overhead.add_argument("--prob", type=float, required=True)
    _add_theory_params(overhead)

    oracle = subparsers.add_parser("oracle-check", help="compare exact enumeration with Monte Carlo")
    oracle.add_argument("config", help="campaign file (key=value)")

    kappa = subparsers.add_parser("kappa-fit", help="fit the scaled average infidelity")
    kappa.add_argument("--n-grid", type=_int_list, default=_int_list(DEFAULT_KAPPA_GRID))
    kappa.add_argument("--samples", type=_positive_int, default=1000)
    kappa.add_argument("--repeats", type=_positive_int, default=20)

    for sub in (benchmark, theory, cross, overhead, oracle, kappa):
        sub.add_argument("--seed", type=int, default=None, help="master seed")

    return parser


def dispatch(argv: Optional[List[str]], stats: Optional[BenchmarkStats] = None) -> int:
    """引数を解析してサブコマンドを実行し、終了コードを返す"""
    args = build_parser().parse_args(argv)
    if stats is None:
        stats = BenchmarkStats(args.command)
    else:
        stats.command = args.command
    return COMMANDS[args.command](args, stats)
