"""``crunch-fx`` command line front end.

Exit codes: 0 success, 2 usage or malformed config, 3 validation or I/O
failure, 4 numerical failure (bracket or convergence).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Sequence, TextIO

from . import calibration, montecarlo, pricing
from .config import FORMATS, RunConfig, parse_config
from .errors import (
    BracketError,
    ConfigFormatError,
    ConvergenceError,
    ValidationError,
)
from .export import render_svg_chart, write_trajectories_csv
from .mathutil import RandomStream
from .simulation import TimeGrid, Trajectory, brownian_increments, euler_path, exact_path

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_NUMERICAL = 4

COMMANDS = ("price", "parity", "simulate", "mc", "calibrate", "figure")

CRUNCH_NOTICE = (
    "notice: beta > 0 premiums come from the shifted-lognormal closed form and "
    "agree with Monte Carlo; published crunch-model premium tables for these "
    "inputs are not reproducible from that formula"
)


def display(x: float, places: int = 5) -> str:
    """Round half-to-even for display; never prints a negative zero."""
    q = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    if q.is_zero():
        q = abs(q)
    return f"{q:f}"


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH")
    for name in ("spot", "sigma", "rd", "rf", "beta", "strike", "maturity", "dt", "horizon"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--side", choices=("call", "put"))
    p.add_argument("--n-paths", dest="n_paths", type=int)
    p.add_argument("--seed", type=int, help="RNG seed (default 1)")
    p.add_argument("--out", dest="output_path", metavar="PATH")
    p.add_argument("--format", choices=FORMATS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="crunch-fx", description="Currency option pricing with a crunch term."
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    sub.add_parser("price", parents=[common], help="closed-form call and put premiums")
    sub.add_parser("parity", parents=[common], help="put-call parity gap")
    sub.add_parser("simulate", parents=[common], help="exact and Euler paths on one Brownian path")
    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo premium with standard error")
    mc.add_argument("--workers", type=int, default=1)
    cal = sub.add_parser("calibrate", parents=[common], help="implied sigma or beta")
    cal.add_argument("--target", type=float, required=True, help="observed premium")
    cal.add_argument("--solve", choices=("sigma", "beta"), default="sigma")
    cal.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"))
    cal.add_argument("--tol", type=float, default=calibration.DEFAULT_TOL)
    fig = sub.add_parser("figure", parents=[common], help="Euler trajectories for several betas")
    fig.add_argument(
        "--betas",
        type=lambda s: [float(b) for b in s.split(",") if b.strip()],
        help="comma-separated betas (default: 0 and the configured beta)",
    )
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    text = ""
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read config: {exc}", key="config") from None
    overrides = {
        key: getattr(args, key)
        for key in (
            "spot", "sigma", "rd", "rf", "beta", "strike", "maturity", "side",
            "n_paths", "dt", "seed", "horizon", "output_path", "format",
        )
    }
    return parse_config(text, overrides)


def _emit(cfg: RunConfig, text: str, out: TextIO) -> None:
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        out.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_price(cfg: RunConfig, out: TextIO, err: TextIO) -> None:
    params = cfg.market
    if cfg.beta > 0.0:
        err.write(CRUNCH_NOTICE + "\n")
    if cfg.format == "json":
        res = pricing.price(params, cfg.option())
        _emit(cfg, _json({"side": cfg.side, "premium": res.premium, "d1": res.d1, "d2": res.d2,
                          "discount_domestic": res.discount_domestic,
                          "discount_foreign": res.discount_foreign}), out)
        return
    lines = []
    for side in ("call", "put"):
        res = pricing.price(params, cfg.option(side))
        lines.append(f"{side:<4} {display(res.premium)}  d1={res.d1:.6f}  d2={res.d2:.6f}")
    _emit(cfg, "\n".join(lines) + "\n", out)


def cmd_parity(cfg: RunConfig, out: TextIO, err: TextIO) -> None:
    gap = pricing.parity_gap(cfg.market, cfg.strike, cfg.maturity)
    if cfg.format == "json":
        _emit(cfg, _json({"gap": gap}), out)
    else:
        _emit(cfg, f"parity gap {display(gap)}\n", out)


def simulate_pair(cfg: RunConfig) -> list[Trajectory]:
    grid = TimeGrid.build(cfg.horizon, cfg.dt)
    dw = brownian_increments(RandomStream(cfg.seed), grid)
    params = cfg.market
    return [exact_path(params, grid, dw, "exact"), euler_path(params, grid, dw, "euler")]


def _render(trajectories: list[Trajectory], fmt: str | None, title: str = "") -> str:
    buf = io.StringIO()
    if fmt == "svg":
        render_svg_chart(trajectories, buf, title=title)
    elif fmt == "json":
        doc = {"t": trajectories[0].grid.times.tolist()}
        doc.update({tr.label: tr.values.tolist() for tr in trajectories})
        buf.write(_json(doc))
    else:
        write_trajectories_csv(trajectories, buf)
    return buf.getvalue()


def cmd_simulate(cfg: RunConfig, out: TextIO, err: TextIO) -> None:
    _emit(cfg, _render(simulate_pair(cfg), cfg.format), out)


def cmd_mc(cfg: RunConfig, out: TextIO, err: TextIO, workers: int = 1) -> None:
    params, spec = cfg.market, cfg.option()
    est = montecarlo.mc_price(params, spec, cfg.n_paths, RandomStream(cfg.seed), workers=workers)
    analytic = pricing.price(params, spec).premium
    if cfg.format == "json":
        _emit(cfg, _json({"side": cfg.side, "premium": est.mean, "stderr": est.stderr,
                          "ci95_low": est.ci95_low, "ci95_high": est.ci95_high,
                          "n": est.n, "analytic": analytic}), out)
        return
    _emit(
        cfg,
        f"{cfg.side} mc {display(est.mean)}  stderr {est.stderr:.2e}  "
        f"ci95 [{display(est.ci95_low)}, {display(est.ci95_high)}]  n {est.n}\n"
        f"{cfg.side} closed form {display(analytic)}\n",
        out,
    )


def cmd_calibrate(cfg: RunConfig, out: TextIO, err: TextIO, args: argparse.Namespace) -> None:
    if args.solve == "sigma":
        solver, default = calibration.implied_sigma, calibration.DEFAULT_SIGMA_BRACKET
    else:
        solver, default = calibration.implied_beta, calibration.DEFAULT_BETA_BRACKET
    bracket = tuple(args.bracket) if args.bracket else default
    res = solver(args.target, cfg.market, cfg.option(), bracket=bracket, tol=args.tol)
    if cfg.format == "json":
        _emit(cfg, _json({"solve": args.solve, "parameter": res.parameter,
                          "residual": res.residual, "iterations": res.iterations,
                          "bracket_low": res.bracket_low, "bracket_high": res.bracket_high}), out)
    else:
        _emit(cfg, f"{args.solve} {res.parameter:.10g}  residual {res.residual:.3e}  "
                   f"iterations {res.iterations}\n", out)


def figure_trajectories(cfg: RunConfig, betas: Sequence[float]) -> list[Trajectory]:
    """One Euler path per beta, all driven by the same Brownian increments."""
    grid = TimeGrid.build(cfg.horizon, cfg.dt)
    dw = brownian_increments(RandomStream(cfg.seed), grid)
    base = cfg.market
    return [
        euler_path(pricing.MarketParams(base.spot, base.sigma, base.rd, base.rf, b), grid, dw, f"beta={b:g}")
        for b in betas
    ]


def cmd_figure(cfg: RunConfig, out: TextIO, err: TextIO, betas: Sequence[float] | None = None) -> list[Path]:
    if not betas:
        betas = [0.0, cfg.beta] if cfg.beta != 0.0 else [0.0]
    trajectories = figure_trajectories(cfg, betas)
    title = "spot trajectories, " + ", ".join(tr.label for tr in trajectories)
    if not cfg.output_path:
        out.write(_render(trajectories, "csv"))
        return []
    base = Path(cfg.output_path)
    if base.suffix in (".csv", ".svg"):
        base = base.with_suffix("")
    paths = [base.with_suffix(".csv"), base.with_suffix(".svg")]
    paths[0].write_text(_render(trajectories, "csv"))
    paths[1].write_text(_render(trajectories, "svg", title))
    for p in paths:
        err.write(f"wrote {p}\n")
    return paths


def dispatch(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        cfg = load_config(args)
        if args.command == "price":
            cmd_price(cfg, out, err)
        elif args.command == "parity":
            cmd_parity(cfg, out, err)
        elif args.command == "simulate":
            cmd_simulate(cfg, out, err)
        elif args.command == "mc":
            cmd_mc(cfg, out, err, workers=args.workers)
        elif args.command == "calibrate":
            cmd_calibrate(cfg, out, err, args)
        else:
            cmd_figure(cfg, out, err, args.betas)
    except ConfigFormatError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        where = f" [{exc.key}]" if exc.key else ""
        err.write(f"error{where}: {exc}\n")
        return EXIT_INVALID
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except (BracketError, ConvergenceError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
