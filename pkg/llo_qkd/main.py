"""Command-line front end."""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError

from llo_qkd.config import settings
from llo_qkd.core.attack import conservative_budget
from llo_qkd.core.const import ALPHA_LOW_DB_PER_KM, ALPHA_STD_DB_PER_KM, ExitCode, ModelKind, PhaseNoiseMapping
from llo_qkd.core.exceptions import DomainError, InconsistentBudget, NonPhysical, ParseError, ValidationError
from llo_qkd.core.keyrate import keyrate_pipeline, max_distance
from llo_qkd.core.noise_budget import total_budget
from llo_qkd.core.params import fig2_config, load_config_file
from llo_qkd.models.schemas import AttackParams, ScenarioConfig, SweepResult, SweepSpec
from llo_qkd.services.reproduction_service import ReproductionService
from llo_qkd.services.sweep_service import SweepService
from llo_qkd.services.validation_service import ValidationService
from llo_qkd.utils import emitters

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


def _bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {value!r}")


def _fluctuation(value: str) -> float:
    bound = float(value)
    if bound < 0:
        raise argparse.ArgumentTypeError(f"fluctuation bound must be nonnegative, got {value}")
    return bound


def _load(args: argparse.Namespace) -> ScenarioConfig:
    config = load_config_file(args.config) if args.config else fig2_config()
    mapping = getattr(args, "mapping", None)
    if mapping:
        config = config.model_copy(update={"mapping": PhaseNoiseMapping(mapping)})
    return config


def _emit_sweep(result: SweepResult, args: argparse.Namespace) -> None:
    if getattr(args, "json", False):
        print(emitters.to_json(result))
        return
    if args.out:
        emitters.write_sweep_csv(result, args.out)
        print(emitters.sweep_summary(result))
    else:
        emitters.write_sweep_csv(result, sys.stdout)
        logger.info(emitters.sweep_summary(result))


# Commands
def cmd_keyrate(args: argparse.Namespace) -> int:
    config = _load(args)
    model = ModelKind(args.model) if args.model else config.model
    budget = conservative_budget(total_budget(config), args.fluctuation)
    breakdown = keyrate_pipeline(config, model, args.fluctuation)

    if args.json:
        print(emitters.to_json(emitters.keyrate_document(breakdown, budget)))
    elif args.csv:
        emitters.write_keyrate_csv(breakdown, budget, sys.stdout)
    else:
        print(emitters.keyrate_report(breakdown, budget))

    if args.max_distance:
        distance = max_distance(config, model, fluctuation=args.fluctuation)
        shown = f"{distance:.2f} km" if distance is not None else "no zero crossing in range"
        line = f"Maximum distance {model.value}: {shown}"
        if args.json or args.csv:
            logger.info(line)
        else:
            print(line)
    return ExitCode.OK


def _sweep_spec(args: argparse.Namespace, config: ScenarioConfig, models: List[ModelKind], include_attack: bool) -> SweepSpec:
    return SweepSpec(
        start_km=args.start,
        stop_km=args.stop,
        step_km=args.step,
        models=models,
        include_attack=include_attack,
        attack=AttackParams(alpha_std=config.channel.alpha_db_per_km, alpha_low=args.alpha_low),
        monitored=args.monitored,
        fluctuation=args.fluctuation,
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load(args)
    spec = _sweep_spec(args, config, [ModelKind(m) for m in args.models], args.attack)
    result = SweepService(config, spec, include_eigenvalues=args.eigenvalues).run(args.workers)
    _emit_sweep(result, args)
    return ExitCode.OK


def cmd_attack(args: argparse.Namespace) -> int:
    config = _load(args)
    spec = _sweep_spec(args, config, [ModelKind.CONVENTIONAL, ModelKind.TRUSTED], True)
    result = SweepService(config, spec).run(args.workers)
    _emit_sweep(result, args)
    if result.ordering_ok is False:
        logger.warning("Attacked key rate left the conventional/trusted envelope")
    return ExitCode.OK


def cmd_mc_validate(args: argparse.Namespace) -> int:
    if args.samples < settings.MC_MIN_SAMPLES:
        logger.error(f"At least {settings.MC_MIN_SAMPLES} samples required, got {args.samples}")
        print(f"Error: at least {settings.MC_MIN_SAMPLES} samples required", file=sys.stderr)
        return ExitCode.CONFIG

    config = _load(args)
    checks = ValidationService.run_oracles(config, args.samples, args.seed, args.workers)
    print(emitters.to_json(checks) if args.json else emitters.oracle_report(checks))
    return ExitCode.OK if all(c.passed for c in checks) else ExitCode.ORACLE_FAILURE


def cmd_reproduce_table1(args: argparse.Namespace) -> int:
    report = ReproductionService.reproduce_table1()
    print(emitters.to_json(report) if args.json else emitters.reproduction_report(report))
    return ExitCode.OK if report.passed else ExitCode.REPRODUCTION_FAILURE


def cmd_fig5(args: argparse.Namespace) -> int:
    spec = SweepSpec(start_km=args.start, stop_km=args.stop, step_km=args.step)
    result = ReproductionService.fig5_curves(spec, args.workers)
    _emit_sweep(result, args)
    return ExitCode.OK


# Parser
def _add_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", nargs="?", help="JSON scenario file (default: simulation regime at 25 km)")


def _add_range(parser: argparse.ArgumentParser, start: float, stop: float, step: float) -> None:
    parser.add_argument("--start", type=float, default=start, help="first distance (km)")
    parser.add_argument("--stop", type=float, default=stop, help="last distance (km)")
    parser.add_argument("--step", type=float, default=step, help="distance step (km)")
    parser.add_argument("--out", help="CSV output path (default: standard output)")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    parser.add_argument("--workers", type=int, default=None, help="concurrent sweep points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="llo-qkd", description=settings.PROJECT_NAME)
    sub = parser.add_subparsers(dest="command", required=True)
    models = [m.value for m in ModelKind]
    mappings = [m.value for m in PhaseNoiseMapping]

    keyrate = sub.add_parser("keyrate", help="key rate at a single operating point")
    _add_config(keyrate)
    keyrate.add_argument("--model", choices=models, help="trust model (default: from the scenario)")
    keyrate.add_argument("--mapping", choices=mappings, help="phase-noise mapping override")
    keyrate.add_argument("--fluctuation", type=_fluctuation, default=0.0,
                         help="relative reference-intensity fluctuation; calibrates the trusted noise at its upper bound")
    keyrate.add_argument("--max-distance", action="store_true", help="also report the maximum distance of the model")
    fmt = keyrate.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    keyrate.set_defaults(handler=cmd_keyrate)

    sweep = sub.add_parser("sweep", help="key rate and excess noise versus distance")
    _add_config(sweep)
    _add_range(sweep, 0.0, 100.0, 1.0)
    sweep.add_argument("--models", nargs="+", choices=models, default=[ModelKind.CONVENTIONAL.value, ModelKind.TRUSTED.value])
    sweep.add_argument("--attack", action="store_true", help="add the reference intensity attack column")
    sweep.add_argument("--alpha-low", type=float, default=ALPHA_LOW_DB_PER_KM)
    sweep.add_argument("--monitored", type=_bool, default=True)
    sweep.add_argument("--mapping", choices=mappings)
    sweep.add_argument("--fluctuation", type=_fluctuation, default=0.0)
    sweep.add_argument("--eigenvalues", action="store_true", help="append the symplectic eigenvalues")
    sweep.set_defaults(handler=cmd_sweep)

    attack = sub.add_parser("attack", help="key rate under the reference intensity attack")
    _add_config(attack)
    _add_range(attack, 0.0, 40.0, 1.0)
    attack.add_argument("--alpha-low", type=float, default=ALPHA_LOW_DB_PER_KM,
                        help=f"eavesdropper fiber loss (dB/km), at most {ALPHA_STD_DB_PER_KM}")
    attack.add_argument("--monitored", type=_bool, default=True)
    attack.add_argument("--mapping", choices=mappings)
    attack.add_argument("--fluctuation", type=_fluctuation, default=0.0)
    attack.set_defaults(handler=cmd_attack)

    validate = sub.add_parser("mc-validate", help="Monte Carlo oracles for the analytic formulas")
    _add_config(validate)
    validate.add_argument("--samples", type=int, default=settings.MC_DEFAULT_SAMPLES)
    validate.add_argument("--seed", type=int, default=settings.CVQKD_SEED)
    validate.add_argument("--workers", type=int, default=None)
    validate.add_argument("--json", action="store_true")
    validate.set_defaults(handler=cmd_mc_validate)

    table1 = sub.add_parser("reproduce-table1", help="experimental key rates at 25 km")
    table1.add_argument("--json", action="store_true")
    table1.set_defaults(handler=cmd_reproduce_table1)

    fig5 = sub.add_parser("fig5", help="key rate versus distance at the measured excess noise")
    _add_range(fig5, 0.0, 60.0, 1.0)
    fig5.set_defaults(handler=cmd_fig5)

    return parser


_EXIT_CODES: Dict[type, ExitCode] = {
    ParseError: ExitCode.CONFIG,
    ValidationError: ExitCode.CONFIG,
    PydanticValidationError: ExitCode.CONFIG,
    NonPhysical: ExitCode.NONPHYSICAL,
    InconsistentBudget: ExitCode.NONPHYSICAL,
    DomainError: ExitCode.NONPHYSICAL,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return int(handler(args))
    except tuple(_EXIT_CODES) as e:
        code = next(c for exc, c in _EXIT_CODES.items() if isinstance(e, exc))
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return int(code)
