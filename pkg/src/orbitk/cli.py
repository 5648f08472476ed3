"""Command-line surface: orbits, catalogs, sweeps and verifiers."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Callable, Dict, Optional, Sequence

from orbitk.core.catalog import enumerate_loops, sieve_limit_for
from orbitk.core.dynamics import analyze, orbit_prefix
from orbitk.core.errors import ArithmeticOverflowError, DomainError, IterationBudgetError, ResourceLimitError
from orbitk.core.experiments import (
    find_prime_ap,
    least_k_for_periods,
    stopping_time_demo,
    sweep_loop_counts,
    verify_even_descent,
    verify_loop_prime_bound,
    verify_odd_lemma,
    verify_prime_run_bound,
    verify_primorial_lemma,
    verify_two_power_loops,
)
from orbitk.core.loader import env_threads, load_settings, log_level, long_runs_enabled
from orbitk.core.models import BOUND_MODES, FactorTable, RunConfig, VerificationReport
from orbitk.core.numtheory import build_factor_table, validate_prime_ap
from orbitk.core.report import (
    AP_FIELDS,
    LOOP_FIELDS,
    PERIOD_FIELDS,
    SWEEP_FIELDS,
    VIOLATION_FIELDS,
    ap_record,
    catalog_records,
    period_records,
    render_orbit,
    sweep_records,
    trajectory_document,
    verification_document,
    violation_records,
)
from orbitk.exporters.tables import emit, render, render_json
from orbitk.rules.expected_violations import missing_violations, unexpected_violations
from orbitk.utils.normalize import parse_ap

logger = logging.getLogger("orbitk")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2
EXIT_VIOLATION = 3

LOG_HANDLER = "orbitk-cli"

CLAIMS = ("primorial", "odd", "even", "loop-bound", "prime-run", "two-power")

# grid defaults per claim, overridden by flags
CLAIM_GRIDS: Dict[str, Dict[str, int]] = {
    "odd": {"k_min": 3, "k_max": 99, "p_max": 100_000},
    "even": {"k_min": 2, "k_max": 200, "p_max": 100_000},
    "loop-bound": {"k_min": 1, "k_max": 200},
    "prime-run": {"k_min": 1, "k_max": 20, "x_max": 2000},
    "two-power": {"n_max": 40},
}

AP_LENGTHS = range(3, 11)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=BOUND_MODES, default="safe", help="seed bound mode (default: safe)")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: $ORBITK_THREADS or 1)")
    common.add_argument("--max-steps", type=int, default=None, help="orbit iteration budget")
    common.add_argument("--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--sieve-limit", type=int, default=None, help="override the automatic factor table size")
    common.add_argument("--long", action="store_true", help="allow sweeps beyond the long-run threshold")
    common.add_argument("--log-level", default=None, help="logging level (default: $ORBITK_LOG_LEVEL or INFO)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orbitk", description="Iterated maps phi_k: orbits, loops, sweeps and lemma checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    orbit = sub.add_parser("orbit", parents=[common], help="print an orbit and its loop")
    orbit.add_argument("--x0", type=int, required=True)
    orbit.add_argument("--k", type=int, required=True)
    orbit.add_argument("--n", type=int, default=20, help="terms to print")

    loops = sub.add_parser("loops", parents=[common], help="catalog every loop of phi_k")
    loops.add_argument("--k", type=int, required=True)

    sweep_loops = sub.add_parser("sweep-loops", parents=[common], help="loop counts for a range of k")
    sweep_loops.add_argument("--k-min", type=int, default=1)
    sweep_loops.add_argument("--k-max", type=int, required=True)

    sweep_periods = sub.add_parser("sweep-periods", parents=[common], help="least k attaining each period")
    sweep_periods.add_argument("--l-max", type=int, default=50)
    sweep_periods.add_argument("--k-max", type=int, required=True)

    verify = sub.add_parser("verify", parents=[common], help="check a lemma over a grid")
    verify.add_argument("claim", choices=CLAIMS)
    verify.add_argument("--k-min", type=int, default=None)
    verify.add_argument("--k-max", type=int, default=None)
    verify.add_argument("--p-max", type=int, default=None)
    verify.add_argument("--x-max", type=int, default=None)
    verify.add_argument("--n-max", type=int, default=None)
    verify.add_argument("--s-cap", type=int, default=None)
    verify.add_argument("--ap", action="append", default=[], help="progression first,difference,length")

    find_ap = sub.add_parser("find-ap", parents=[common], help="search a prime progression and run its orbit")
    find_ap.add_argument("--length", type=int, required=True)
    find_ap.add_argument("--d-max", type=int, default=None)
    find_ap.add_argument("--first-max", type=int, default=None)
    return parser


def _configure_logging(level: str) -> None:
    root = logging.getLogger("orbitk")
    # one handler, bound to the current stderr
    for stale in [h for h in root.handlers if h.get_name() == LOG_HANDLER]:
        root.removeHandler(stale)
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(LOG_HANDLER)
    handler.setFormatter(logging.Formatter("%(asctime)s - %(levelname)s - %(message)s"))
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.INFO))


def _run_config(args: argparse.Namespace, settings: Dict[str, Any]) -> RunConfig:
    threads = args.threads if args.threads is not None else env_threads()
    if threads < 1:
        raise UsageError(f"--threads must be >= 1, got {threads}")
    max_steps = args.max_steps if args.max_steps is not None else settings["max_steps"]
    if max_steps < 1:
        raise UsageError(f"--max-steps must be >= 1, got {max_steps}")
    if args.sieve_limit is not None and args.sieve_limit < 2:
        raise UsageError(f"--sieve-limit must be >= 2, got {args.sieve_limit}")
    return RunConfig(
        command=args.command,
        k=getattr(args, "k", None),
        k_min=getattr(args, "k_min", None),
        k_max=getattr(args, "k_max", None),
        l_max=getattr(args, "l_max", None),
        x0=getattr(args, "x0", None),
        n=getattr(args, "n", 20),
        mode=args.mode,
        threads=threads,
        max_steps=max_steps,
        output_path=args.output,
        format=args.format,
        sieve_limit=args.sieve_limit,
        long=args.long or long_runs_enabled(),
    )


def _table(config: RunConfig, automatic: int, settings: Dict[str, Any]) -> FactorTable:
    limit = config.sieve_limit or automatic
    logger.info("building factor table up to %d", limit)
    return build_factor_table(limit, max_bytes=settings["sieve_max_bytes"])


def _require_positive(value: Optional[int], flag: str) -> int:
    if value is None or value < 1:
        raise UsageError(f"{flag} must be a positive integer, got {value}")
    return value


def _gate_long(config: RunConfig, k_max: int, settings: Dict[str, Any]) -> None:
    threshold = settings["long_k_threshold"]
    if k_max > threshold and not config.long:
        raise UsageError(f"k_max={k_max} exceeds {threshold}; pass --long (or set ORBITK_LONG=1) for long sweeps")


def cmd_orbit(config: RunConfig, settings: Dict[str, Any]) -> int:
    if config.x0 is None or config.x0 < 2:
        raise UsageError(f"--x0 must be >= 2, got {config.x0}")
    k = _require_positive(config.k, "--k")
    n = _require_positive(config.n, "--n")
    table = _table(config, sieve_limit_for(k, config.mode), settings)
    record = analyze(config.x0, k, table, config.max_steps)
    terms = orbit_prefix(config.x0, k, table, n)
    if config.format == "json":
        emit(render_json(trajectory_document(record, terms)), config.output_path)
    else:
        emit(render_orbit(record, terms), config.output_path)
    return EXIT_OK


def cmd_loops(config: RunConfig, settings: Dict[str, Any]) -> int:
    k = _require_positive(config.k, "--k")
    table = _table(config, sieve_limit_for(k, config.mode), settings)
    catalog = enumerate_loops(k, table, config.mode, max_steps=config.max_steps)
    logger.info("k=%d: %d loops from %d seeds", k, len(catalog.loops), catalog.seeds_processed)
    emit(render(catalog_records(catalog), LOOP_FIELDS, config.format), config.output_path)
    return EXIT_OK


def cmd_sweep_loops(config: RunConfig, settings: Dict[str, Any]) -> int:
    k_min = _require_positive(config.k_min, "--k-min")
    k_max = _require_positive(config.k_max, "--k-max")
    if k_max < k_min:
        raise UsageError(f"empty k range [{k_min}, {k_max}]")
    _gate_long(config, k_max, settings)
    table = _table(config, sieve_limit_for(k_max, config.mode), settings)
    rows = sweep_loop_counts(k_min, k_max, table, config.mode, config.threads)
    emit(render(sweep_records(rows), SWEEP_FIELDS, config.format), config.output_path)
    return EXIT_OK


def cmd_sweep_periods(config: RunConfig, settings: Dict[str, Any]) -> int:
    l_max = config.l_max if config.l_max is not None else 50
    if l_max < 2:
        raise UsageError(f"--l-max must be >= 2, got {l_max}")
    k_max = _require_positive(config.k_max, "--k-max")
    _gate_long(config, k_max, settings)
    table = _table(config, sieve_limit_for(k_max, config.mode), settings)
    rows = least_k_for_periods(l_max, k_max, table, config.mode, config.threads)
    emit(render(period_records(rows), PERIOD_FIELDS, config.format), config.output_path)
    return EXIT_OK


def _grid(args: argparse.Namespace, key: str) -> int:
    value = getattr(args, key)
    if value is None:
        value = CLAIM_GRIDS.get(args.claim, {}).get(key)
    return _require_positive(value, "--" + key.replace("_", "-"))


def _verify_report(args: argparse.Namespace, config: RunConfig, settings: Dict[str, Any]) -> VerificationReport:
    claim = args.claim
    s_cap = args.s_cap if args.s_cap is not None else settings["s_cap"]
    if claim == "primorial":
        d_max = settings["ap_difference_limit"]
        first_max = settings["ap_first_limit"]
        table = _table(config, first_max + (max(AP_LENGTHS) - 1) * d_max, settings)
        if args.ap:
            aps = [validate_prime_ap(parse_ap(text), table) for text in args.ap]
        else:
            aps = [ap for ap in (find_prime_ap(n, d_max, first_max, table) for n in AP_LENGTHS) if ap is not None]
        return verify_primorial_lemma(aps)
    if claim == "two-power":
        n_max = _grid(args, "n_max")
        if n_max > 63:
            raise UsageError(f"--n-max must be <= 63 to stay in 64-bit range, got {n_max}")
        return verify_two_power_loops(n_max, _table(config, 1000, settings))

    k_min, k_max = _grid(args, "k_min"), _grid(args, "k_max")
    if k_max < k_min:
        raise UsageError(f"empty k range [{k_min}, {k_max}]")
    if claim == "odd":
        p_max = _grid(args, "p_max")
        table = _table(config, 2 * p_max + k_max, settings)
        ks = [k for k in range(max(k_min, 3), k_max + 1) if k % 2]
        return verify_odd_lemma(ks, p_max, table, config.threads)
    if claim == "even":
        p_max = _grid(args, "p_max")
        table = _table(config, 2 * p_max + k_max, settings)
        ks = [k for k in range(max(k_min, 2), k_max + 1) if k % 2 == 0]
        return verify_even_descent(ks, p_max, table, s_cap, config.threads)
    if claim == "prime-run":
        x_max = _grid(args, "x_max")
        table = _table(config, max(sieve_limit_for(k_max), 2 * x_max), settings)
        return verify_prime_run_bound(range(k_min, k_max + 1), x_max, table, config.threads)
    _gate_long(config, k_max, settings)
    table = _table(config, sieve_limit_for(k_max), settings)
    return verify_loop_prime_bound(k_min, k_max, table, config.threads)


def cmd_verify(args: argparse.Namespace, config: RunConfig, settings: Dict[str, Any]) -> int:
    report = _verify_report(args, config, settings)
    unexpected = unexpected_violations(report)
    missing = missing_violations(report)
    logger.info(
        "%s: checked %d, %d violations (%d unexpected, %d expected but missing)",
        report.claim,
        report.checked,
        len(report.violations),
        len(unexpected),
        len(missing),
    )
    for pair in missing:
        logger.error("%s: expected violation %s was not reported", report.claim, pair)
    if config.format == "json":
        emit(render_json(verification_document(report, unexpected, missing)), config.output_path)
    else:
        emit(render(violation_records(report), VIOLATION_FIELDS, "csv"), config.output_path)
    return EXIT_VIOLATION if unexpected or missing else EXIT_OK


def cmd_find_ap(args: argparse.Namespace, config: RunConfig, settings: Dict[str, Any]) -> int:
    if args.length < 2:
        raise UsageError(f"--length must be >= 2, got {args.length}")
    d_max = args.d_max if args.d_max is not None else settings["ap_difference_limit"]
    first_max = args.first_max if args.first_max is not None else settings["ap_first_limit"]
    table = _table(config, max(first_max + (args.length - 1) * d_max, 100), settings)
    ap = find_prime_ap(args.length, d_max, first_max, table)
    records = []
    if ap is None:
        logger.warning("no progression of %d primes with difference <= %d and first <= %d", args.length, d_max, first_max)
    else:
        records.append(ap_record(ap, stopping_time_demo(ap, table, config.max_steps)))
    emit(render(records, AP_FIELDS, config.format), config.output_path)
    return EXIT_OK


COMMANDS: Dict[str, Callable[..., int]] = {
    "orbit": cmd_orbit,
    "loops": cmd_loops,
    "sweep-loops": cmd_sweep_loops,
    "sweep-periods": cmd_sweep_periods,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level or log_level())
    try:
        settings = load_settings()
        config = _run_config(args, settings)
        if config.command == "verify":
            return cmd_verify(args, config, settings)
        if config.command == "find-ap":
            return cmd_find_ap(args, config, settings)
        return COMMANDS[config.command](config, settings)
    except (UsageError, DomainError, ArithmeticOverflowError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except (ResourceLimitError, IterationBudgetError) as exc:
        logger.error("%s", exc)
        return EXIT_RESOURCE
