"""Command-line entry point emitting figure data as CSV or JSON."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from . import __version__
from .config import Settings
from .errors import USAGE_EXIT_CODE, AlphaFidelityError
from .figures import COMMAND_DESCRIPTIONS, FigureBuilder, parse_floats
from .optimize import OptimizerConfig
from .schemas import Table

logger = logging.getLogger(__name__)


def _to_payload(value: Any) -> Any:
    if is_dataclass(value):
        return _to_payload(asdict(value))
    if isinstance(value, dict):
        return {key: _to_payload(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_payload(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def render_csv(table: Table) -> str:
    buffer = io.StringIO()
    buffer.write(f"# alpha-fidelity {__version__}\n")
    buffer.write(f"# command: {table.name}\n")
    buffer.write(f"# config: {json.dumps(_to_payload(table.config), sort_keys=True)}\n")
    buffer.write(f"# columns: {','.join(table.columns)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_cell(cell) for cell in row])
    for key, value in table.summary.items():
        buffer.write(f"# {key}: {json.dumps(_to_payload(value), sort_keys=True)}\n")
    return buffer.getvalue()


def render_json(table: Table) -> str:
    document = {
        "tool": "alpha-fidelity",
        "version": __version__,
        "command": table.name,
        "config": table.config,
        "columns": table.columns,
        "rows": table.rows,
        "summary": table.summary,
    }
    return json.dumps(_to_payload(document), indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format")
    common.add_argument("--output", help="Write to this path instead of standard output")
    common.add_argument("--seed", type=int, help="Seed for quasi-random optimizer starts")
    common.add_argument("--starts", type=int, help="Number of quasi-random optimizer starts")
    common.add_argument("--log-level", help="Logging level (default from ALPHA_FID_LOG_LEVEL)")

    parser = argparse.ArgumentParser(
        prog="alpha-fid", description="Alpha-fidelity computations and figure data"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str) -> argparse.ArgumentParser:
        return commands.add_parser(name, parents=[common], help=COMMAND_DESCRIPTIONS[name])

    sub = add("state-fid")
    sub.add_argument("--rho1", required=True, help="Bloch vector x,y,z")
    sub.add_argument("--rho2", required=True, help="Bloch vector x,y,z")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--tilde", action="store_true", help="Use tr[ρ₁^α ρ₂^{1−α}]")

    sub = add("chan-fid")
    sub.add_argument("--chan1", required=True, help="Channel spec, e.g. dephasing:0.7")
    sub.add_argument("--chan2", required=True, help="Channel spec, e.g. noisy_unitary:1:0.2")
    sub.add_argument("--alpha", type=float, required=True)

    sub = add("fig2")
    sub.add_argument("--eps-grid", default="0:0.5:101", help="lo:hi:n (default: 0:0.5:101)")

    sub = add("fig3")
    sub.add_argument("--T1", type=float, default=0.25)
    sub.add_argument("--T2", type=float, default=0.75)
    sub.add_argument("--g", type=float, default=1.0)
    sub.add_argument("--omega", type=float, default=1.0)
    sub.add_argument("--omega-scan", default="2:5:31", help="Hypothesis frequencies / omega")
    sub.add_argument("--alpha-grid", help="Comma-separated alphas (default 0.05..0.80)")
    sub.add_argument("--hypotheses", default="3,3.1,3.25", help="Displayed hypotheses / omega")

    sub = add("fig4")
    sub.add_argument("--T-grid", dest="T_grid", default="0:1.5:21", help="kT/omega grid lo:hi:n")
    sub.add_argument("--g", type=float, default=1.0)
    sub.add_argument("--omega", type=float, default=1.0)
    sub.add_argument("--ntrunc", type=int, help="Oscillator truncation (default from settings)")
    sub.add_argument("--t-max", type=float, default=10.0)
    sub.add_argument("--t-points", type=int, help="Time samples (default from settings)")

    sub = add("fig5")
    sub.add_argument("--lambda", dest="lam", type=float, default=0.01)
    sub.add_argument("--F", type=float, default=0.98)
    sub.add_argument("--J", type=float, default=1.0)
    sub.add_argument("--delta", type=float, default=0.1)
    sub.add_argument("--N", type=int, default=4000)
    sub.add_argument("--t-grid", default="0:3:601")
    return parser


def _command_arguments(args: argparse.Namespace) -> Dict[str, Any]:
    command = args.command
    if command == "state-fid":
        return {"rho1": args.rho1, "rho2": args.rho2, "alpha": args.alpha, "tilde": args.tilde}
    if command == "chan-fid":
        return {"chan1": args.chan1, "chan2": args.chan2, "alpha": args.alpha}
    if command == "fig2":
        return {"eps_grid": args.eps_grid}
    if command == "fig3":
        return {
            "T1": args.T1,
            "T2": args.T2,
            "g": args.g,
            "omega": args.omega,
            "omega_scan": args.omega_scan,
            "alpha_grid": parse_floats(args.alpha_grid) if args.alpha_grid else None,
            "hypotheses": parse_floats(args.hypotheses),
        }
    if command == "fig4":
        return {
            "T_grid": args.T_grid,
            "g": args.g,
            "omega": args.omega,
            "ntrunc": args.ntrunc,
            "t_max": args.t_max,
            "t_points": args.t_points,
        }
    return {
        "lam": args.lam,
        "F": args.F,
        "J": args.J,
        "delta": args.delta,
        "N": args.N,
        "t_grid": args.t_grid,
    }


def run(args: argparse.Namespace, settings: Optional[Settings] = None) -> str:
    settings = settings or Settings.load()
    if args.seed is not None:
        settings.seed = args.seed
    if args.starts is not None:
        settings.starts = args.starts
    builder = FigureBuilder(settings, OptimizerConfig.from_settings(settings))
    table = builder.call_command(args.command, _command_arguments(args))
    table.config["seed"] = settings.seed
    return render_json(table) if args.format == "json" else render_csv(table)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        # malformed ALPHA_FID_* values surface here as ValueError
        settings = Settings.load()
        level = (args.log_level or settings.log_level).upper()
        logging.basicConfig(
            level=getattr(logging, level, logging.WARNING),
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        output = run(args, settings)
    except AlphaFidelityError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT_CODE

    if args.output:
        Path(args.output).write_text(output, encoding="utf-8")
        logger.info("wrote %s", args.output)
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    sys.exit(main())
