"""Command-line interface: ``warpreg {simulate,register,select-ref,evaluate,replay}``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from . import __version__
from .config import RunConfig, load_run_config, resolve_config
from .data.curves import SampledCurve, common_grid
from .data.dataset_loader import curves_to_frame, load_curves, load_warps
from .data.simulate import RelativeWarp, generate
from .exceptions import ConfigError, WarpregError
from .models.evaluator import evaluate_alignment, prd_by_order
from .models.reference import ReferenceChoice, select_reference_j, select_reference_power
from .models.registration import RegistrationResult, register_set
from .utils.io import read_json, read_table, write_csv, write_json

logger = logging.getLogger("warpreg")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARTIAL = 2

AUTO_REFS = ("auto-j", "auto-power")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_ref(value: str):
    if value in AUTO_REFS:
        return value
    try:
        return int(value)
    except ValueError:
        raise ConfigError("ref", f"expected a curve index, 'auto-j' or 'auto-power', got {value!r}") from None


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON or YAML run config")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--basis-order", type=int, help="number of basis functions for the curve fits")
    parser.add_argument("--basis-kind", choices=("fourier", "bspline"))
    parser.add_argument("--lambda", dest="lam", type=float, help="warp roughness penalty")
    parser.add_argument("--warp-coeffs", type=int, help="number of warp B-spline coefficients")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="warpreg", description="Curve registration by warp differential equations.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    simulate = commands.add_parser("simulate", help="generate a synthetic curve set")
    _add_config_flags(simulate)
    simulate.add_argument("--preset", help="f1-n1, f1-n2, f2-n1 or f2-n2")
    simulate.add_argument("--out", type=Path, required=True)

    register = commands.add_parser("register", help="register every curve to a reference")
    register.add_argument("curves", type=Path)
    register.add_argument("--ref", default="auto-power", help="curve index, auto-j or auto-power")
    _add_config_flags(register)
    register.add_argument("--out", type=Path, required=True)

    select = commands.add_parser("select-ref", help="choose a reference curve")
    select.add_argument("curves", type=Path)
    select.add_argument("--method", choices=("j", "power"), default="power")
    _add_config_flags(select)
    select.add_argument("--out", type=Path, required=True)

    evaluate = commands.add_parser("evaluate", help="summarise a register run")
    evaluate.add_argument("run_dir", type=Path)
    evaluate.add_argument("--truth", type=Path, help="output directory of 'warpreg simulate'")
    evaluate.add_argument("--sweep", action="store_true", help="also re-register over the basis-order sweep")
    evaluate.add_argument("--out", type=Path, help="defaults to RUN_DIR/evaluation")

    replay = commands.add_parser("replay", help="re-run the command recorded in a manifest")
    replay.add_argument("manifest", type=Path)
    replay.add_argument("--out", type=Path, required=True)
    return parser


def _resolve(args: argparse.Namespace, section: str) -> RunConfig:
    config = load_run_config(args.config, section, getattr(args, "preset", None))
    return config.with_overrides(
        seed=args.seed,
        basis_order=args.basis_order,
        basis_kind=args.basis_kind,
        lam=args.lam,
        warp_coeffs=args.warp_coeffs,
    )


def _choose_reference(curves: List[SampledCurve], ref, config: RunConfig) -> ReferenceChoice:
    if ref == "auto-power":
        return select_reference_power(curves)
    if ref == "auto-j":
        return select_reference_j(curves, config.registration)
    if not 0 <= ref < len(curves):
        raise ConfigError("ref", f"index {ref} is out of range for {len(curves)} curves")
    return ReferenceChoice(ref, "given", np.full(len(curves), np.nan))


def run_simulate(arguments: Dict[str, Any], config: RunConfig, out: Path) -> int:
    dataset = generate(config.simulation)
    grid = config.simulation.grid
    truth = [SampledCurve(grid, warp.evaluate(grid)) for warp in dataset.true_warps]
    write_csv(curves_to_frame(dataset.curves), out / "curves.csv")
    write_csv(curves_to_frame(truth, "h"), out / "true_warps.csv")
    write_json(config.to_dict()["simulation"], out / "config.json")
    write_json(
        {"warps": [warp.to_dict() for warp in dataset.true_warps], "coeffs": dataset.coeffs.tolist()},
        out / "truth.json",
    )
    logger.info("Wrote %d curves to %s", len(dataset), out)
    return EXIT_OK


def _results_frame(results: Sequence[RegistrationResult]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "curve_id": np.arange(len(results)),
            "amplitude": [result.amplitude for result in results],
            "prd": [result.prd for result in results],
            "criterion": [result.criterion for result in results],
            "converged": [result.converged for result in results],
            "iterations": [result.report.iterations for result in results],
            "error": [result.error for result in results],
        }
    )


def run_register(arguments: Dict[str, Any], config: RunConfig, out: Path) -> int:
    curves = load_curves(arguments["curves"])
    common_grid(curves)
    choice = _choose_reference(curves, parse_ref(str(arguments["ref"])), config)
    results = register_set(curves, choice.index, config.registration)

    unit_grid = curves[choice.index].to_unit_interval().grid
    warps = [SampledCurve(unit_grid, result.warp.evaluate(unit_grid)) for result in results]
    write_csv(_results_frame(results), out / "results.csv")
    write_csv(curves_to_frame(warps, "h_hat"), out / "warps.csv")
    write_csv(curves_to_frame([result.aligned for result in results]), out / "aligned.csv")
    write_json(choice.to_dict(), out / "reference.json")

    converged = sum(result.converged for result in results)
    logger.info("Registered %d/%d curves against curve %d; results in %s", converged, len(results), choice.index, out)
    return EXIT_OK if converged == len(results) else EXIT_PARTIAL


def run_select_ref(arguments: Dict[str, Any], config: RunConfig, out: Path) -> int:
    curves = load_curves(arguments["curves"])
    if arguments["method"] == "j":
        common_grid(curves)
        choice = select_reference_j(curves, config.registration)
    else:
        choice = select_reference_power(curves)
    write_json(choice.to_dict(), out / "reference.json")
    print(choice.index)
    return EXIT_OK


def run_evaluate(arguments: Dict[str, Any], config: RunConfig, out: Path) -> int:
    run_dir = Path(arguments["run_dir"])
    manifest = read_json(run_dir / "manifest.json")
    if manifest.get("command") != "register":
        raise ConfigError("run_dir", f"{run_dir} is not the output of 'warpreg register'")
    run_config = resolve_config(manifest["config"], defaults={})
    curves = load_curves(manifest["arguments"]["curves"])
    aligned = load_curves(run_dir / "aligned.csv")
    results = read_table(run_dir / "results.csv")
    ref_index = int(read_json(run_dir / "reference.json")["index"])

    aligning = truth = None
    if arguments.get("truth"):
        aligning = [warp.inverted() for warp in load_warps(run_dir / "warps.csv", "h_hat")]
        true_warps = load_warps(Path(arguments["truth"]) / "true_warps.csv", "h")
        truth = [RelativeWarp(true_warps[ref_index], warp) for warp in true_warps]
    summary = evaluate_alignment(
        curves,
        aligned,
        results["prd"].to_numpy(float),
        run_config.registration.basis.size,
        aligning,
        truth,
    )
    write_csv(pd.DataFrame([summary.to_dict()]), out / "summary.csv")

    if arguments.get("sweep"):
        sweep = prd_by_order(
            curves,
            ref_index,
            run_config.registration,
            run_config.evaluation.orders,
            run_config.evaluation.kinds,
        )
        write_csv(sweep, out / "prd_by_order.csv")
    logger.info("Evaluation written to %s", out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[Dict[str, Any], RunConfig, Path], int]] = {
    "simulate": run_simulate,
    "register": run_register,
    "select-ref": run_select_ref,
    "evaluate": run_evaluate,
}
CONFIG_SECTIONS = {"simulate": "simulation", "register": "registration", "select-ref": "registration"}


def _arguments(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "verbose", "out", "config", "seed", "basis_order", "basis_kind", "lam", "warp_coeffs", "preset"}
    return {key: str(value.resolve()) if isinstance(value, Path) else value for key, value in sorted(vars(args).items()) if key not in skip}


def execute(command: str, arguments: Dict[str, Any], config: RunConfig, out: Path) -> int:
    """Run ``command`` into ``out`` and write its manifest."""
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    code = COMMANDS[command](arguments, config, out)
    outputs = sorted(path.name for path in out.iterdir() if path.is_file() and path.name != "manifest.json")
    write_json(
        {
            "command": command,
            "arguments": arguments,
            "config": config.to_dict(),
            "outputs": outputs,
            "seed": config.simulation.seed if command == "simulate" else config.registration.solver.seed,
            "version": __version__,
            "wall_clock_seconds": time.perf_counter() - started,
        },
        out / "manifest.json",
    )
    return code


def replay(manifest_path: Path, out: Path) -> int:
    manifest = read_json(manifest_path)
    command = manifest.get("command")
    if command not in COMMANDS:
        raise ConfigError("command", f"manifest {manifest_path} records unknown command {command!r}")
    config = resolve_config(manifest["config"], defaults={})
    return execute(command, manifest["arguments"], config, out)


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"warpreg: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _configure_logging(args.verbose)
    try:
        if args.command == "replay":
            return replay(args.manifest, args.out)
        if args.command == "evaluate":
            config = RunConfig()
            out = args.out or args.run_dir / "evaluation"
        else:
            config = _resolve(args, CONFIG_SECTIONS[args.command])
            out = args.out
            if args.command == "register":
                parse_ref(args.ref)
        return execute(args.command, _arguments(args), config, out)
    except (WarpregError, OSError, KeyError) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
