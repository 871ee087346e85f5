"""Command line interface: simulate, tomo, batch-tomo, uncertainty, dynamics.

Angles are degrees on the command line and in config files. Exit codes:
0 success, 1 usage or configuration error, 2 success with a physicality
projection, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError

from valleyqubit.config import settings
from valleyqubit.core.exceptions import StorageError, ValleyQubitError
from valleyqubit.domains.qubit.crud.report import ReportCRUD
from valleyqubit.domains.qubit.crud.scan import ScanCRUD
from valleyqubit.domains.qubit.models.qstate import pure_state
from valleyqubit.domains.qubit.schemas.run_config import (
    BatchTomoConfig,
    DynamicsConfig,
    SimulateConfig,
    TomoConfig,
    UncertaintyConfig,
)
from valleyqubit.domains.qubit.services.dynamics_service import precession, rotated_pattern, verify_integral
from valleyqubit.domains.qubit.services.plmodel_service import synthesize_scan
from valleyqubit.domains.qubit.services.tomography_service import reconstruct, reconstruct_batch
from valleyqubit.domains.qubit.services.uncertainty_service import sweep_min_slack, uncertainty_sweep
from valleyqubit.utils.files import dump_json, resolve_output
from valleyqubit.utils.logging import configure_logging, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PROJECTED = 2
EXIT_IO = 3

_NON_CONFIG_ARGS = {"command", "func", "config", "verbose", "quiet"}

scans = ScanCRUD()
reports = ReportCRUD()


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; 2 is reserved for success with projection."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    values = {}
    for key, value in vars(args).items():
        if key in _NON_CONFIG_ARGS or value is None or value == []:
            continue
        values[key] = value
    return values


def _run_simulate(args: argparse.Namespace) -> int:
    config = SimulateConfig.load(args.config, _overrides(args))
    scan = synthesize_scan(
        config.prepared(),
        config.angle_grid(),
        config.physical_params(),
        noise=config.noise_spec(),
        seed=config.seed,
    )
    csv_path, _ = config.output_paths()
    path = scans.write(scan, resolve_output(csv_path))
    print(path)
    return EXIT_OK


def _run_tomo(args: argparse.Namespace) -> int:
    config = TomoConfig.load(args.config, _overrides(args))
    scan = scans.read(config.scan)
    calibration = scans.read(config.calibration) if config.calibration is not None else None
    result = reconstruct(scan, calibration, **config.reconstruct_options())
    path = reports.write_tomography(result, resolve_output(config.out))
    print(path)
    if result.fidelity_to_target is not None:
        logger.info("Fidelity to target: %.6f", result.fidelity_to_target)
    return EXIT_PROJECTED if result.projection_applied else EXIT_OK


def _run_batch_tomo(args: argparse.Namespace) -> int:
    config = BatchTomoConfig.load(args.config, _overrides(args))
    inputs = [scans.read(p) for p in config.scans]
    calibration = scans.read(config.calibration) if config.calibration is not None else None
    results = reconstruct_batch(inputs, calibration, workers=config.workers, **config.reconstruct_options())
    outputs = [resolve_output(config.output_for(p)) for p in config.scans]
    for path in reports.write_tomography_batch(list(zip(results, outputs))):
        print(path)
    return EXIT_PROJECTED if any(r.projection_applied for r in results) else EXIT_OK


def _run_uncertainty(args: argparse.Namespace) -> int:
    config = UncertaintyConfig.load(args.config, _overrides(args))
    rho = reports.read_density_matrix(config.rho) if config.rho is not None else pure_state(config.angles())
    sweep = uncertainty_sweep(rho, math.radians(config.r_angle), config.angle_grid())
    reports.write_sweep(sweep, resolve_output(config.out))
    slack, alpha = sweep_min_slack(sweep)
    print(f"min_slack={slack:.12f} alpha_deg={math.degrees(alpha):.6g}")
    return EXIT_OK


def _run_dynamics(args: argparse.Namespace) -> int:
    config = DynamicsConfig.load(args.config, _overrides(args))
    params = config.field_params()
    result = precession(params)
    pattern = rotated_pattern(config.angle_grid(), params)
    reports.write_dynamics(pattern, result, resolve_output(config.out), resolve_output(config.summary))
    if config.verify:
        closed, numeric, diff = verify_integral(0.0, params, n_steps=config.n_steps)
        logger.info("Quadrature check at alpha=0: closed=%.12g numeric=%.12g diff=%.3g", closed, numeric, diff)
    sys.stdout.write(dump_json(result.summary()))
    return EXIT_OK


def _add_tomo_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--calibration", type=Path, default=None, help="theta=90 reference scan CSV")
    p.add_argument("--self-calibrate", dest="self_calibrate", action="store_true", default=None,
                   help="Synthesize the reference from the scan itself")
    p.add_argument("--q3", type=float, default=None, help="PL fraction (default: scan metadata)")
    p.add_argument("--compensate-decay", dest="compensate_decay", type=float, default=None, metavar="V",
                   help="Divide coherences by visibility V")
    p.add_argument("--reference-visibility", dest="reference_visibility", type=float, default=None,
                   help="Visibility of the calibration state (default: calibration metadata)")
    p.add_argument("--target", default=None, metavar="THETA,PHI", help="Pure target state in degrees")
    p.add_argument("--extrema", choices=["sample", "fit"], default=None, help="Extrema estimator")
    p.add_argument("--background", type=float, default=None, help="Background floor for self-calibration")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="valleyqubit",
        description="Valley-pseudospin qubit toolkit: PL simulation, tomography, uncertainty and precession.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="Synthesize an angle-resolved PL scan")
    ps.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    ps.add_argument("--theta", type=float, default=None, help="Polar angle in degrees")
    ps.add_argument("--phi", type=float, default=None, help="Azimuthal angle in degrees")
    ps.add_argument("--visibility", type=float, default=None, help="T2*/T1 of the emitting state")
    ps.add_argument("--t1", type=float, default=None, help="Population lifetime in seconds")
    ps.add_argument("--t2", type=float, default=None, help="Valley coherence time in seconds")
    ps.add_argument("--gamma", type=float, default=None, help="Off-diagonal suppression exponent")
    ps.add_argument("--i1", type=float, default=None, help="Unpolarized thermal intensity")
    ps.add_argument("--i2", type=float, default=None, help="Polarized thermal intensity")
    ps.add_argument("--i3", type=float, default=None, help="PL intensity")
    ps.add_argument("--temperature", type=float, default=None, help="Temperature label in kelvin")
    ps.add_argument("--grid", default=None, help="Detection angles start:stop:step in degrees")
    ps.add_argument("--noise", choices=["none", "poisson"], default=None)
    ps.add_argument("--exposure", type=float, default=None, help="Counts per unit intensity")
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--out", type=Path, default=None, help="Output directory")
    ps.add_argument("--name", default=None, help="File stem (default: scan)")
    ps.set_defaults(func=_run_simulate)

    pt = sub.add_parser("tomo", help="Reconstruct a density matrix from one scan")
    pt.add_argument("scan", type=Path, nargs="?", default=None, help="Scan CSV")
    pt.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    _add_tomo_options(pt)
    pt.add_argument("--out", type=Path, default=None, help="Result JSON path")
    pt.set_defaults(func=_run_tomo)

    pb = sub.add_parser("batch-tomo", help="Reconstruct many scans on a worker pool")
    pb.add_argument("scans", type=Path, nargs="*", help="Scan CSVs")
    pb.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    _add_tomo_options(pb)
    pb.add_argument("--out-dir", dest="out_dir", type=Path, default=None, help="Directory for <stem>.tomo.json")
    pb.add_argument("--workers", type=int, default=None)
    pb.set_defaults(func=_run_batch_tomo)

    pu = sub.add_parser("uncertainty", help="Sweep uncertainty relations over detection angles")
    pu.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    pu.add_argument("--theta", type=float, default=None, help="Pure state polar angle in degrees")
    pu.add_argument("--phi", type=float, default=None, help="Pure state azimuthal angle in degrees")
    pu.add_argument("--rho", type=Path, default=None, help="Tomography result JSON")
    pu.add_argument("--r-angle", dest="r_angle", type=float, default=None, help="Angle of R in degrees")
    pu.add_argument("--grid", default=None, help="Angles of Q start:stop:step in degrees")
    pu.add_argument("--out", type=Path, default=None, help="Sweep CSV path")
    pu.set_defaults(func=_run_uncertainty)

    pd = sub.add_parser("dynamics", help="Precession-rotated PL pattern in a magnetic field")
    pd.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    pd.add_argument("--b-field", dest="b_field", type=float, default=None, help="Field in tesla")
    pd.add_argument("--g-factor", dest="g_factor", type=float, default=None)
    pd.add_argument("--t1", type=float, default=None, help="Population lifetime in seconds")
    pd.add_argument("--t2-star", dest="t2_star", type=float, default=None, help="T2* in seconds")
    pd.add_argument("--grid", default=None, help="Detection angles start:stop:step in degrees")
    pd.add_argument("--out", type=Path, default=None, help="Pattern CSV path")
    pd.add_argument("--summary", type=Path, default=None, help="Summary JSON path")
    pd.add_argument("--verify", action="store_true", default=None, help="Cross-check by quadrature")
    pd.add_argument("--n-steps", dest="n_steps", type=int, default=None)
    pd.set_defaults(func=_run_dynamics)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        configure_logging(logging.DEBUG)
    elif args.quiet:
        configure_logging(logging.WARNING)
    else:
        configure_logging(settings.LOG_LEVEL)

    try:
        return int(args.func(args))
    except StorageError as e:
        logger.error("%s", e.message)
        return EXIT_IO
    except ValleyQubitError as e:
        logger.error("%s", e.message)
        return EXIT_CONFIG
    except ValidationError as e:
        logger.error("Invalid input: %s", e)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
