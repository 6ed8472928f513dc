"""
ffheat command-line interface.

    ffheat run --config <path> | --preset fig1|fig2|fig3 [--output-dir DIR] [--mode M] [--solver S]
    ffheat validate --config <path>

Exit status: 0 success, 1 config error, 2 numerical failure.
"""

import argparse
import logging.handlers
import sys
from pathlib import Path
from typing import List, Optional

from src import __version__
from src.core.config import LOG_FILE, LOG_LEVEL, resolve_output_dir
from src.core.exceptions import ConfigError, FFHeatError
from src.core.models import RunMode, SolverChoice
from src.core.presets import PRESETS
from src.services.validation import validate_config
from src.services.config_loader import RunConfigLoader, apply_overrides
from src.services.experiment import EXIT_CONFIG, EXIT_NUMERICAL, run_experiment

logger = logging.getLogger(__name__)


def configure_logging(level: str = LOG_LEVEL, log_file: Path = LOG_FILE) -> None:
    """Configure root logging once per invocation."""
    log_file = Path(log_file)
    log_file.parent.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=1024*1024,  # 1MB
                backupCount=5,
                encoding='utf-8'
            ),
            logging.StreamHandler()
        ],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffheat",
        description="Fast-forward protocol simulator for the heat equation on an expanding box",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run an experiment and write CSV datasets plus a manifest")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="Path to a key=value config file")
    source.add_argument("--preset", choices=sorted(PRESETS), help="Built-in figure preset")
    run.add_argument("--output-dir", help="Output directory (overrides config and FFHEAT_OUTPUT_DIR)")
    run.add_argument("--mode", choices=[m.value for m in RunMode])
    run.add_argument("--solver", choices=[s.value for s in SolverChoice])

    validate = sub.add_parser("validate", help="Validate a config file")
    validate.add_argument("--config", required=True, help="Path to a key=value config file")
    return parser


def command_run(args: argparse.Namespace) -> int:
    try:
        loader = RunConfigLoader.from_preset(args.preset) if args.preset \
            else RunConfigLoader.from_path(args.config)
        config = apply_overrides(loader.load(), mode=args.mode, solver=args.solver)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    explicit = set(loader.explicit_keys)
    for key, value in (("mode", args.mode), ("solver", args.solver)):
        if value:
            explicit.add(key)
    output_dir = resolve_output_dir(args.output_dir, config.output.output_dir)
    logger.info(f"Running {loader.source} into {output_dir}")
    result = run_experiment(config, output_dir, explicit_keys=explicit,
                            assumed_keys=loader.assumed_keys(), source=loader.source)
    if result.error is not None:
        print(f"error: {result.error}", file=sys.stderr)
    return result.exit_code


def command_validate(args: argparse.Namespace) -> int:
    report = validate_config(args.config)
    if report['success']:
        print(f"{args.config}: valid")
        for key, value in report['details']['resolved'].items():
            print(f"  {key}={value}")
        return 0
    print(f"{args.config}: invalid at stage '{report['stage']}': {report['error']}", file=sys.stderr)
    return EXIT_CONFIG


def main(argv: Optional[List[str]] = None) -> int:
    """Console entry point."""
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        if args.command == "validate":
            return command_validate(args)
        return command_run(args)
    except FFHeatError as e:
        logger.error(f"Run failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
