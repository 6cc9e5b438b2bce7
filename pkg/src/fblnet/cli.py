"""Command-line entry point: ``fblnet analyze | validate | oracle lt``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import ConfigError, FblnetError, SeriesDivergenceError, UnsupportedError
from .interference import DEFAULT_TRUNCATION_K, lt_B_eta4, lt_B_quadrature, lt_B_series
from .params import LAMBDA_PER_KM2, MonteCarloConfig, NetworkParams, SymbolMomentModel
from .sim import mc_laplace_B_grid
from .sweep import BUNDLED, emit, load_config_with_mc, run_sweep, with_mc_overrides

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(float(text))
    if value < 1 or value != float(text):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def parse_grid(text: str) -> list[float]:
    """``a,b,c`` lists values; ``start:stop:count`` is a log-spaced grid."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            return [float(v) for v in np.geomspace(float(start), float(stop), int(count))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fblnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    config_help = f"config file, or a bundled name ({', '.join(BUNDLED)})"
    a = sub.add_parser("analyze", help="evaluate every grid point of a config")
    a.add_argument("--config", required=True, help=config_help)
    a.add_argument("--mc", action="store_true", help="also run the Monte Carlo simulator")
    a.add_argument("--seed", type=_u64, help="override the config seed")
    a.add_argument("--workers", type=_positive_int, default=1)
    a.add_argument("--samples", type=_positive_int, help="override the config sample count")
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.add_argument("--out", help="write here instead of stdout")
    a.add_argument("--timing", action="store_true", help="append a runtime_ms column")

    v = sub.add_parser("validate", help="check a config without computing anything")
    v.add_argument("--config", required=True, help=config_help)

    o = sub.add_parser("oracle", help="side-by-side cross checks")
    osub = o.add_subparsers(dest="oracle", required=True)
    lt = osub.add_parser("lt", help="Laplace transform of the interference by every route")
    lt.add_argument("--z", type=parse_grid, required=True,
                    help="z values: 'a,b,c' or log grid 'start:stop:count'")
    lt.add_argument("--lambda-per-km2", type=float, default=1.0)
    lt.add_argument("--r0", type=float, default=250.0)
    lt.add_argument("--eta", type=float, default=4.0)
    lt.add_argument("--tx-power", type=float, default=1.0)
    lt.add_argument("--symbols", choices=("gaussian_codebook", "constant_modulus"), default="gaussian_codebook")
    lt.add_argument("--K", type=_positive_int, default=DEFAULT_TRUNCATION_K, help="series truncation")
    lt.add_argument("--samples", type=_positive_int, default=100_000)
    lt.add_argument("--seed", type=_u64, default=0)
    lt.add_argument("--workers", type=_positive_int, default=1)
    lt.add_argument("--scaled", action="store_true", help="read z in units of r0^eta / tx_power")
    lt.add_argument("--no-mc", action="store_true")
    return parser


def _analyze(args) -> int:
    specs, mc = load_config_with_mc(args.config)
    cfg = with_mc_overrides(MonteCarloConfig(), mc)
    overrides = {"workers": args.workers}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["samples"] = args.samples
    cfg = with_mc_overrides(cfg, overrides)
    rows = run_sweep(specs, args.mc, cfg)
    text = emit(rows, args.format, args.out, timing=args.timing)
    if args.out is None:
        sys.stdout.write(text)
    failed = sum(1 for r in rows if r.error)
    if failed:
        print(f"fblnet: {failed} of {len(rows)} grid points failed; see the error column", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _validate(args) -> int:
    specs, _ = load_config_with_mc(args.config)
    points = sum(len(s.points) for s in specs)
    print(f"ok: {len(specs)} sweep groups, {points} grid points")
    return EXIT_OK


def _cell(fn) -> str:
    try:
        return f"{fn():.10g}"
    except SeriesDivergenceError:
        return "diverged"
    except UnsupportedError:
        return "n/a"


def _oracle_lt(args) -> int:
    try:
        params = NetworkParams(args.lambda_per_km2 * LAMBDA_PER_KM2, args.r0, args.eta, args.tx_power)
        moments = SymbolMomentModel(args.symbols)
    except FblnetError as exc:
        raise ConfigError(str(exc)) from None
    if any(z < 0 for z in args.z):
        raise ConfigError("Laplace arguments must be >= 0")
    if args.scaled:
        args.z = [z / params.serving_gain for z in args.z]
    mc = None
    if not args.no_mc:
        cfg = MonteCarloConfig(num_samples=args.samples, seed=args.seed, workers=args.workers)
        mc = mc_laplace_B_grid(args.z, params, moments, cfg)

    header = ["z", "series", "closed_form", "quadrature", "mc", "mc_stderr"]
    print("  ".join(f"{h:>16}" for h in header))
    for i, z in enumerate(args.z):
        closed = "n/a" if moments.kind != "gaussian_codebook" else _cell(lambda: lt_B_eta4(z, params))
        cells = [
            f"{z:.6g}",
            _cell(lambda: _series_value(z, params, moments, args.K)),
            closed,
            _cell(lambda: lt_B_quadrature(z, params, moments)),
            f"{mc[i].value:.10g}" if mc else "-",
            f"{mc[i].std_error:.3g}" if mc else "-",
        ]
        print("  ".join(f"{c:>16}" for c in cells))
    return EXIT_OK


def _series_value(z, params, moments, K):
    res = lt_B_series(z, params, moments, K)
    if not res.converged:
        raise SeriesDivergenceError("series did not converge", res.last_term)
    return res.value


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _analyze(args)
        if args.command == "validate":
            return _validate(args)
        return _oracle_lt(args)
    except ConfigError as exc:
        print(f"fblnet: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fblnet: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
