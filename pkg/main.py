# main.py
# Command-line entry point for the qudit entanglement distribution toolkit
# Ties together the verification suite, parameter sweeps and CREN evaluation of state files

import argparse
import logging
import os
import sys

from dotenv import load_dotenv

from convex_roof_optimizer import DEFAULT_BUDGET, convex_roof_upper_bound
from distribution_analyzer import RouteDisagreementError, chain_report
from entanglement_measures import negativity
from state_file_processor import StateFileProcessor
from verification_suite import SweepConfig, VerificationSuite, sweep_table, write_sweep_csv

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

METHODS = ("negativity", "convex-roof")


def parse_dims(text):
    try:
        dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension list '{text}'") from None
    if not dims:
        raise argparse.ArgumentTypeError("empty dimension list")
    return dims


def parse_fidelities(text):
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid fidelity list '{text}'") from None


def env_default(name, default, convert=str):
    """Read a default from the environment; flags still take precedence"""
    value = os.getenv(name)
    if value is None or value == "":
        return default
    try:
        return convert(value)
    except (ValueError, argparse.ArgumentTypeError):
        raise ValueError(f"invalid value {value!r} for environment variable {name}") from None


def env_flag(value):
    return value.strip().lower() in ("1", "true", "yes", "on")


def build_parser():
    """Build the argument parser with defaults taken from the environment"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", dest="dims", type=parse_dims,
                        default=env_default("QUDIT_DIMS", [2, 3, 4], parse_dims),
                        help="comma-separated qudit dimensions")
    common.add_argument("--grid", type=int, default=env_default("QUDIT_GRID", 11, int),
                        help="points per fidelity axis")
    common.add_argument("--tol", type=float, default=env_default("QUDIT_TOL", 1e-9, float))
    common.add_argument("--slow", action="store_true",
                        default=env_default("QUDIT_SLOW", False, env_flag),
                        help="enable dense simulation up to d = 6")
    common.add_argument("--seed", type=int, default=env_default("QUDIT_SEED", 0, int))
    common.add_argument("--workers", type=int, default=env_default("QUDIT_WORKERS", 1, int))
    common.add_argument("--log-level", default=env_default("QUDIT_LOG_LEVEL", "WARNING"))

    parser = argparse.ArgumentParser(
        prog="qudit-red",
        description="Entanglement distribution and dynamics bounds for qudit isotropic states",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("verify", parents=[common], help="run the property suite")

    sweep = commands.add_parser("sweep", parents=[common], help="write the bound sweep as CSV")
    sweep.add_argument("--out", default=env_default("QUDIT_OUT", "sweep.csv"))

    cren = commands.add_parser("cren", parents=[common], help="CREN of a state file")
    cren.add_argument("path")
    cren.add_argument("--method", choices=METHODS, default="negativity")
    cren.add_argument("--restarts", type=int, default=env_default("QUDIT_RESTARTS", 20, int))
    cren.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                      help="iteration cap per restart")

    chain = commands.add_parser("chain", parents=[common], help="fidelity along a repeater chain")
    chain.add_argument("--fidelities", type=parse_fidelities, required=True)

    return parser


def config_from_args(args):
    return SweepConfig(
        dims=args.dims,
        grid=args.grid,
        tol=args.tol,
        mode="slow" if args.slow else "fast",
        seed=args.seed,
        output_path=getattr(args, "out", None),
        workers=args.workers,
    )


def cmd_verify(config):
    """Run the property suite; exit 0 iff every check passes"""
    config.require_dense_dims()
    dims = ", ".join(str(d) for d in config.dims)
    print(f"Running verification suite for d = {dims} ({config.mode} mode, tol {config.tol:g})")

    results = VerificationSuite(config).run()
    for result in results:
        print(result.line())

    failed = [result.name for result in results if not result.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        return EXIT_FAILED
    print(f"All {len(results)} checks passed")
    return EXIT_OK


def cmd_sweep(config):
    """Write the bound sweep CSV"""
    try:
        table = sweep_table(config)
    except RouteDisagreementError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED

    try:
        write_sweep_csv(table, config.output_path)
    except OSError as e:
        print(f"Error: cannot write {config.output_path}: {e}", file=sys.stderr)
        return EXIT_USAGE

    negative = table[table["gap"] < -config.tol]
    print(f"Sweep written to {config.output_path} ({len(table)} rows)")
    if len(negative):
        print(f"{len(negative)} rows violate the bound beyond tol {config.tol:g}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_cren(path, method="negativity", restarts=20, seed=0, budget=DEFAULT_BUDGET, workers=1):
    """Print the requested entanglement measure of a state file"""
    processor = StateFileProcessor()
    rho, shape = processor.load_state(path)
    cut = processor.cut_for(shape)
    print(f"Loaded {cut.dA}x{cut.dB} state from {path}")

    if method == "negativity":
        print(f"negativity {negativity(rho, cut):.12g}")
        return EXIT_OK

    result = convex_roof_upper_bound(rho, cut, restarts=restarts, budget=budget,
                                     seed=seed, workers=workers)
    print(f"convex-roof {result.value:.12g} (upper bound)")
    print(f"ensemble size {result.ensemble_size}")
    print(f"restarts {result.restarts}")
    if result.budget_exhausted:
        print(f"iteration budget {budget} reached in at least one restart")
    return EXIT_OK


def cmd_chain(config, fidelities):
    """Print per-hop fidelities of a repeater chain and check the product bound"""
    if len(config.dims) != 1:
        raise ValueError("chain takes a single dimension, e.g. --d 3")
    d = config.dims[0]
    report = chain_report(fidelities, d)
    for hop, F in enumerate(report.hop_fidelities):
        print(f"hop {hop}: F = {F:.12g}")
    print(f"final CREN {report.final_cren:.12g}")
    print(f"product of link CRENs {report.product_bound:.12g}")
    return EXIT_OK if report.gap >= -config.tol else EXIT_FAILED


def main(argv=None):
    """Main function to run the toolkit from the command line"""
    # Load environment variables
    load_dotenv()

    try:
        parser = build_parser()
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (None, 0) else EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = config_from_args(args)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "sweep":
            return cmd_sweep(config)
        if args.command == "cren":
            return cmd_cren(args.path, method=args.method, restarts=args.restarts,
                            seed=args.seed, budget=args.budget, workers=args.workers)
        return cmd_chain(config, args.fidelities)
    except RouteDisagreementError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
