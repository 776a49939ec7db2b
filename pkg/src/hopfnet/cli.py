"""Command line entry point: ``hopfnet analyze|classify|simulate|verify|reproduce``.

Exit codes: 0 success or verification pass, 1 configuration error,
2 numerical or I/O error, 3 verification fail.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analysis import MeasurementError
from .bifurcation import BifurcationError
from .config import ConfigError, ExperimentConfig, load
from .dynamics import IntegrationError
from .experiments import EXAMPLE_IDS, example_config, format_table, run_example
from .files import atomic_write, to_json, trajectory_csv
from .pipeline import analyze, classify, simulate, verify
from .plotting import trajectory_svg
from .spectral import SpectralError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_FAIL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _use_color() -> bool:
    return sys.stdout.isatty() and "NO_COLOR" not in os.environ


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _load(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required")
    cfg = load(args.config)
    for label, g in (("communication", cfg.communication), ("belief_system", cfg.belief_system)):
        if g is not None and not g.is_signed_unweighted():
            _warn(f"{label} graph has weights outside {{-1, 0, 1}}")
    return cfg


def _emit(doc: dict, out: Path | None, name: str) -> None:
    text = to_json(doc)
    sys.stdout.write(text)
    if out is not None:
        atomic_write(out / name, text)


def _metadata(cfg: ExperimentConfig, traj) -> dict:
    return {
        "config": cfg.to_dict(),
        "seed": cfg.simulation.seed,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "integration": traj.metadata,
    }


def _write_trajectory(cfg, traj, out: Path, svg: bool, stem: str = "trajectory") -> None:
    atomic_write(out / f"{stem}.csv", trajectory_csv(traj))
    atomic_write(out / f"{stem}.meta.json", to_json(_metadata(cfg, traj)))
    if svg:
        atomic_write(out / f"{stem}_by_topic.svg", trajectory_svg(traj, "topic"))
        atomic_write(out / f"{stem}_by_agent.svg", trajectory_svg(traj, "agent"))


def cmd_analyze(args) -> int:
    cfg = _load(args)
    _emit(analyze(cfg).to_dict(), args.out, "report.json")
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = _load(args)
    _emit(classify(cfg).to_dict(), args.out, "classification.json")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    traj = simulate(cfg)
    out = args.out or Path(".")
    _write_trajectory(cfg, traj, out, args.svg)
    print(f"wrote {out / 'trajectory.csv'} ({len(traj)} samples, "
          f"{traj.states.shape[1]} state columns)")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load(args)
    res = verify(cfg)
    _emit(res.comparison.to_dict(), args.out, "comparison.json")
    if args.out is not None:
        _write_trajectory(cfg, res.trajectory, args.out, args.svg)
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_reproduce(args) -> int:
    ids = EXAMPLE_IDS if args.example == "all" else (args.example,)
    out = args.out or Path("reproduce")
    color = _use_color()
    status = EXIT_OK
    for example_id in ids:
        cfg = example_config(example_id)
        res = run_example(example_id, cfg)
        d = out / f"example_{example_id}"
        atomic_write(d / "config.json", cfg.dumps())
        atomic_write(d / "report.json", to_json(res.verification.report.to_dict()))
        atomic_write(d / "comparison.json", to_json(res.verification.comparison.to_dict()))
        atomic_write(d / "checks.json", to_json([c.to_dict() for c in res.checks]))
        _write_trajectory(cfg, res.verification.trajectory, d, args.svg)
        print(format_table(res, color=color))
        print()
        if not res.passed:
            status = EXIT_FAIL
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hopfnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hopfnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, config=True):
        if config:
            p.add_argument("--config", type=str, help="experiment config JSON")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--svg", action="store_true", help="also write SVG trajectory plots")

    for name, func, helptext in (
        ("analyze", cmd_analyze, "predict the Hopf point and oscillation pattern"),
        ("classify", cmd_classify, "classify the graph pair for oscillations"),
        ("simulate", cmd_simulate, "integrate the nonlinear dynamics to CSV"),
        ("verify", cmd_verify, "simulate and compare against the prediction"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.set_defaults(func=func)
    p = sub.add_parser("reproduce", help="run the built-in benchmark examples")
    p.add_argument("example", choices=EXAMPLE_IDS + ("all",))
    common(p, config=False)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SpectralError, IntegrationError, MeasurementError, BifurcationError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
