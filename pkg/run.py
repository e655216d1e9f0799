"""
Command-line entry point.

Subcommands:
    solve <config>                        run (best of N seeds) and export every CSV
    stability --beta B --c1 C1 --c2 C2    stability verdict for one setting
    stability --scan                      verdict table over the sampled region
    bench <function> --dim D --iters T    optimizer benchmark over several seeds
    validate <config>                     parse and check a config only
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

from check_config import check_config_file
from services.bench_service import DEFAULT_BENCH_SEEDS, BenchError, bench_optimizer
from services.config_service import ConfigError, load_config
from services.experiment_service import ExperimentError, run_best_of
from services.export_service import ExportError, export_all
from solver.benchmarks import BENCHMARKS
from solver.stability import analyze, scan_region, simulate_deterministic
from solver.swarm import HyperParams, HyperParamsError

# Load environment variables from .env file if it exists
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with the validation exit code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    parser = CliParser(prog="run.py", description="EM-PSO Schrodinger solver")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Run an experiment and export its CSV files")
    solve.add_argument("config")

    stability = sub.add_parser("stability", help="Stability verdict for beta, c1, c2")
    stability.add_argument("--beta", type=float)
    stability.add_argument("--c1", type=float)
    stability.add_argument("--c2", type=float)
    stability.add_argument("--simulate", type=positive_int, metavar="STEPS",
                           help="Also iterate the deterministic recurrence from x = (1, 1, 1)")
    stability.add_argument("--scan", action="store_true",
                           help="Print the verdict table over beta in 0.05..0.95, c1+c2 in 0.1..1.9")

    bench = sub.add_parser("bench", help="Benchmark the optimizer on a test function")
    bench.add_argument("function", choices=sorted(BENCHMARKS))
    bench.add_argument("--dim", type=int, default=5)
    bench.add_argument("--iters", type=int, default=500)
    bench.add_argument("--swarm-size", type=int, default=50)
    bench.add_argument("--seeds", type=int, default=DEFAULT_BENCH_SEEDS)
    bench.add_argument("--seed", type=int, default=0)

    validate = sub.add_parser("validate", help="Parse and check a config file")
    validate.add_argument("config")
    return parser


def cmd_solve(args) -> int:
    config = load_config(args.config)
    result = run_best_of(config)
    best = result.best
    paths = export_all(best, config.out_dir)
    print(f"Best seed: {best.seed}")
    print(f"Final total loss: {best.final_total:.9f}")
    if best.energy is not None:
        print(f"Learned energy: {best.energy:.9f}")
    if best.final_loss is not None:
        print(f"Residual integral: {best.final_loss['residual_integral']:.9f}")
        print(f"Probability: {best.final_loss['probability']:.9f}")
    for path in paths:
        print(f"Wrote {path}")
    return EXIT_OK


def _print_scan() -> None:
    betas = np.round(np.arange(0.05, 0.951, 0.05), 2)
    sums = np.round(np.arange(0.1, 1.91, 0.1), 2)
    print(f"{'beta':>6} {'c1+c2':>6} {'theorem':>9} {'max|A|':>10} {'recurrence':>11}")
    for v in scan_region(betas, sums):
        verdict = "stable" if v.closed_form_stable else "unstable"
        print(f"{v.beta:6.2f} {v.c1 + v.c2:6.2f} {verdict:>9} "
              f"{v.max_amplification:10.6f} {v.recurrence_amplification:11.6f}")


def cmd_stability(args) -> int:
    if args.scan:
        _print_scan()
        return EXIT_OK

    v = analyze(args.beta, args.c1, args.c2)
    c = v.coefficients
    print("stable" if v.closed_form_stable else "unstable")
    print(f"lambda1 = {c.lambda1:.9g}, lambda2 = {c.lambda2:.9g}, lambda3 = {c.lambda3:.9g}")
    print("roots = " + ", ".join(f"{r:.6g}" for r in v.roots))
    print(f"max|A| = {v.max_amplification:.9f}")
    print(f"recurrence max|A| = {v.recurrence_amplification:.9f}")

    if args.simulate is not None:
        trajectory = simulate_deterministic(args.beta, args.c1, args.c2, 0.0, 0.0, (1.0, 1.0, 1.0), args.simulate)
        values = np.abs(trajectory.values)
        print(f"simulated {len(trajectory.values) - 3} steps: "
              f"{'diverged' if trajectory.diverged else 'bounded'}, "
              f"max|x| = {values.max():.6g}, final x = {trajectory.values[-1]:.6g}")
    return EXIT_OK


def cmd_bench(args) -> int:
    hyper = HyperParams(swarm_size=args.swarm_size, max_iters=args.iters, seed=args.seed)
    summary = bench_optimizer(args.function, args.dim, hyper, n_seeds=args.seeds)
    for seed, best, evaluations in zip(summary.seeds, summary.per_seed_best, summary.evaluations):
        print(f"seed {seed}: best = {best:.6g} ({evaluations} evaluations)")
    print(f"median best = {summary.median_best:.6g}")
    return EXIT_OK


def cmd_validate(args) -> int:
    return EXIT_OK if check_config_file(args.config) else EXIT_VALIDATION


COMMANDS = {
    "solve": cmd_solve,
    "stability": cmd_stability,
    "bench": cmd_bench,
    "validate": cmd_validate,
}


def main(argv: Optional[List[str]] = None) -> int:
    if os.getenv("DEBUG_MODE", "false").lower() == "true":
        logging.getLogger().setLevel(logging.DEBUG)

    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "stability" and not args.scan and None in (args.beta, args.c1, args.c2):
        parser.error("--beta, --c1 and --c2 are required unless --scan is given")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, HyperParamsError, BenchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ExperimentError, ExportError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as e:
        logger.error(f"Unexpected failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
