"""Sweep configuration, evaluation and result emission.

A config file is INI text. Section ``[fixed]`` holds values shared by every
group, ``[montecarlo]`` holds simulator settings, and every other section is
one sweep group with exactly one swept ``axis``. See ``configs/*.cfg`` for
commented examples.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Iterator

import numpy as np

from . import fbl as _fbl
from .errors import ConfigError, FblnetError
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec
from .params import (
    LAMBDA_PER_KM2,
    FblParams,
    MonteCarloConfig,
    NetworkParams,
    SinrThreshold,
    SymbolMomentModel,
    db_to_linear,
    linear_to_db,
)
from .sim import mc_avg_coding_rate, mc_outage

AXES = ("gamma0_db", "r0", "lambda_per_km2", "n", "epsilon", "T_db")
FIXED_KEYS = {
    "lambda_per_km2", "r0", "eta", "tx_power", "noise_power", "gamma0_db",
    "n", "epsilon", "T", "T_db", "rate", "symbols", "moments",
}
GRID_KEYS = {"axis", "values", "start", "stop", "count", "scale"}
MC_KEYS = {"samples", "seed", "workers", "r_max", "tail_std_tol"}
RESERVED = ("fixed", "montecarlo")
BUNDLED = ("fig2", "fig3a", "fig3b", "fig4")


@dataclass(frozen=True)
class GridPoint:
    axis_value: float
    network: NetworkParams
    fbl: FblParams
    threshold: SinrThreshold
    moments: SymbolMomentModel


@dataclass(frozen=True)
class SweepSpec:
    """One row-group: a swept axis over ``values`` with every other field fixed."""

    name: str
    axis: str
    values: tuple[float, ...]
    fixed: dict = field(hash=False)
    points: tuple[GridPoint, ...] = field(default=(), hash=False)


@dataclass
class ResultRow:
    group: str
    axis: str
    axis_value: float
    lambda_per_km2: float
    r0: float
    eta: float
    tx_power: float
    noise_power: float
    gamma0_db: float
    n: int
    epsilon: float
    T: float
    T_db: float
    rate_threshold: float
    symbols: str
    avg_capacity: float | None = None
    avg_dispersion: float | None = None
    avg_coding_rate: float | None = None
    rate_clamped: bool | None = None
    outage_lower: float | None = None
    outage_upper: float | None = None
    mc_rate: float | None = None
    mc_rate_stderr: float | None = None
    mc_outage: float | None = None
    mc_outage_stderr: float | None = None
    mc_samples: int | None = None
    mc_seed: int | None = None
    error: str = ""
    runtime_ms: float | None = None


COLUMNS = tuple(f.name for f in fields(ResultRow) if f.name != "runtime_ms")
"""CSV/JSON column order; ``runtime_ms`` is appended only when timing is requested."""


# ---------------------------------------------------------------- loading


def _float(section: str, key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r}: not a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"[{section}] {key} = {raw!r}: must be finite")
    return value


def _int(section: str, key: str, raw: str) -> int:
    value = _float(section, key, raw)
    if not value.is_integer():
        raise ConfigError(f"[{section}] {key} = {raw!r}: must be an integer")
    return int(value)


def _grid(section: str, opts: dict) -> tuple[float, ...]:
    if "values" in opts:
        if {"start", "stop", "count"} & opts.keys():
            raise ConfigError(f"[{section}] give either 'values' or 'start/stop/count', not both")
        vals = [v.strip() for v in opts["values"].split(",") if v.strip()]
        if not vals:
            raise ConfigError(f"[{section}] values is empty")
        return tuple(_float(section, "values", v) for v in vals)
    missing = {"start", "stop", "count"} - opts.keys()
    if missing:
        raise ConfigError(f"[{section}] grid needs 'values' or all of start/stop/count (missing {sorted(missing)})")
    start = _float(section, "start", opts["start"])
    stop = _float(section, "stop", opts["stop"])
    count = _int(section, "count", opts["count"])
    if count < 1:
        raise ConfigError(f"[{section}] count must be >= 1, got {count}")
    scale = opts.get("scale", "linear")
    if scale == "linear":
        grid = np.linspace(start, stop, count)
    elif scale == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError(f"[{section}] log grid needs positive start/stop")
        grid = np.geomspace(start, stop, count)
    else:
        raise ConfigError(f"[{section}] scale must be 'linear' or 'log', got {scale!r}")
    return tuple(float(v) for v in grid)


def _moments(section: str, opts: dict) -> SymbolMomentModel:
    kind = opts.get("symbols", "gaussian_codebook")
    explicit = None
    if "moments" in opts:
        explicit = tuple(_float(section, "moments", v) for v in opts["moments"].split(",") if v.strip())
    try:
        return SymbolMomentModel(kind, explicit)
    except FblnetError as exc:
        raise ConfigError(f"[{section}] symbols: {exc}") from None


def _build_point(section: str, axis: str, value: float, opts: dict, moments: SymbolMomentModel,
                 r_max: float | None = None) -> GridPoint:
    vals = {k: opts[k] for k in opts if k in FIXED_KEYS - {"symbols", "moments"}}
    num = {k: _float(section, k, v) for k, v in vals.items()}
    num[axis] = value

    # the swept axis overrides any fixed value it conflicts with
    if axis == "T_db":
        num.pop("T", None)
        num.pop("rate", None)
    if axis == "gamma0_db":
        num.pop("tx_power", None)
    thr_keys = [k for k in ("T", "T_db", "rate") if k in num]
    if len(thr_keys) != 1:
        raise ConfigError(f"[{section}] give exactly one of T, T_db, rate (found {thr_keys or 'none'})")

    for key in ("lambda_per_km2", "r0", "n", "epsilon"):
        if key not in num:
            raise ConfigError(f"[{section}] missing required key {key!r}")
    if "tx_power" not in num and "gamma0_db" not in num:
        raise ConfigError(f"[{section}] need tx_power or gamma0_db")
    if "tx_power" in num and "gamma0_db" in num:
        raise ConfigError(f"[{section}] tx_power and gamma0_db are mutually exclusive")

    eta = num.get("eta", 4.0)
    noise = num.get("noise_power", 1e-10)
    where = f"[{section}] at {axis} = {value:g}"
    if r_max is not None and not r_max > num["r0"]:
        raise ConfigError(f"{where}: montecarlo r_max ({r_max:g}) must exceed r0 ({num['r0']:g})")
    try:
        lam = num["lambda_per_km2"] * LAMBDA_PER_KM2
        if lam < 0:
            raise ConfigError(f"{where}: lambda_per_km2 must be >= 0")
        if "gamma0_db" in num:
            net = NetworkParams.from_gamma0(db_to_linear(num["gamma0_db"]), lam, num["r0"], eta, noise)
        else:
            net = NetworkParams(lam, num["r0"], eta, num["tx_power"], noise)
        n = num["n"]
        if not float(n).is_integer():
            raise ConfigError(f"{where}: n must be an integer, got {n}")
        code = FblParams(int(n), num["epsilon"])
        key = thr_keys[0]
        thr = {"T": SinrThreshold, "T_db": SinrThreshold.from_db, "rate": SinrThreshold.from_rate}[key](num[key])
    except ConfigError:
        raise
    except FblnetError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return GridPoint(value, net, code, thr, moments)


def parse_config(text: str, source: str = "<config>") -> tuple[list[SweepSpec], dict]:
    """Parse config text into validated sweep specs and Monte Carlo overrides."""
    parser = configparser.ConfigParser(default_section="\x00none", interpolation=None,
                                       inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    fixed = dict(parser["fixed"]) if parser.has_section("fixed") else {}
    unknown = set(fixed) - FIXED_KEYS
    if unknown:
        raise ConfigError(f"[fixed] unknown keys {sorted(unknown)}")

    mc: dict = {}
    if parser.has_section("montecarlo"):
        raw = dict(parser["montecarlo"])
        unknown = set(raw) - MC_KEYS
        if unknown:
            raise ConfigError(f"[montecarlo] unknown keys {sorted(unknown)}")
        for k, v in raw.items():
            mc[k] = _float("montecarlo", k, v) if k in ("r_max", "tail_std_tol") else _int("montecarlo", k, v)
        try:
            with_mc_overrides(MonteCarloConfig(), mc)
        except FblnetError as exc:
            raise ConfigError(f"[montecarlo] {exc}") from None

    specs = []
    for name in parser.sections():
        if name in RESERVED:
            continue
        own = dict(parser[name])
        unknown = set(own) - FIXED_KEYS - GRID_KEYS
        if unknown:
            raise ConfigError(f"[{name}] unknown keys {sorted(unknown)}")
        opts = {**fixed, **own}
        axis = opts.get("axis")
        if axis not in AXES:
            raise ConfigError(f"[{name}] axis must be one of {AXES}, got {axis!r}")
        values = _grid(name, opts)
        if axis == "n":
            # log grids land a rounding error away from integer blocklengths
            values = tuple(float(round(v)) if abs(v - round(v)) <= 1e-9 * abs(v) else v for v in values)
        moments = _moments(name, opts)
        points = tuple(_build_point(name, axis, v, opts, moments, mc.get("r_max")) for v in values)
        specs.append(SweepSpec(name, axis, values, {k: v for k, v in opts.items() if k in FIXED_KEYS}, points))
    return specs, mc


def bundled_config_text(name: str) -> str:
    return resources.files("fblnet").joinpath("configs", f"{name}.cfg").read_text()


def load_config(path: str | Path) -> list[SweepSpec]:
    """Load and fully validate a config file (or a bundled config name)."""
    return load_config_with_mc(path)[0]


def load_config_with_mc(path: str | Path) -> tuple[list[SweepSpec], dict]:
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        return parse_config(bundled_config_text(str(path)), source=f"<bundled {path}>")
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, source=str(p))


# ---------------------------------------------------------------- running


def _base_row(spec: SweepSpec, pt: GridPoint) -> ResultRow:
    net = pt.network
    return ResultRow(
        group=spec.name, axis=spec.axis, axis_value=pt.axis_value,
        lambda_per_km2=net.lambda_per_km2, r0=net.r0, eta=net.eta,
        tx_power=net.tx_power, noise_power=net.noise_power, gamma0_db=linear_to_db(net.gamma0),
        n=pt.fbl.blocklength_n, epsilon=pt.fbl.epsilon,
        T=pt.threshold.T, T_db=linear_to_db(pt.threshold.T), rate_threshold=pt.threshold.rate,
        symbols=pt.moments.kind,
    )


def evaluate_point(spec: SweepSpec, pt: GridPoint, mc_enabled: bool, cfg: MonteCarloConfig,
                   quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ResultRow:
    row = _base_row(spec, pt)
    t0 = time.perf_counter()
    try:
        rate = _fbl.avg_coding_rate(pt.network, pt.fbl, pt.moments, quad)
        row.avg_capacity = rate.capacity_term
        row.avg_dispersion = _fbl.avg_dispersion(pt.network, pt.moments, quad)
        row.avg_coding_rate = rate.rate
        row.rate_clamped = rate.clamped
        row.outage_lower = _fbl.outage_lower(pt.network, pt.threshold, pt.fbl, pt.moments, quad)
        row.outage_upper = _fbl.outage_upper(pt.network, pt.threshold, pt.fbl, pt.moments, quad)
        if mc_enabled:
            r = mc_avg_coding_rate(pt.network, pt.fbl, pt.moments, cfg)
            o = mc_outage(pt.network, pt.threshold, pt.fbl, pt.moments, cfg)
            row.mc_rate, row.mc_rate_stderr = r.value, r.std_error
            row.mc_outage, row.mc_outage_stderr = o.value, o.std_error
            row.mc_samples, row.mc_seed = cfg.num_samples, cfg.seed
    except (FblnetError, ArithmeticError, ValueError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    row.runtime_ms = (time.perf_counter() - t0) * 1e3
    return row


def iter_sweep(specs: list[SweepSpec], mc_enabled: bool = False, cfg: MonteCarloConfig = MonteCarloConfig(),
               quad: QuadratureSpec = DEFAULT_QUADRATURE) -> Iterator[ResultRow]:
    for spec in specs:
        for pt in spec.points:
            yield evaluate_point(spec, pt, mc_enabled, cfg, quad)


def run_sweep(specs: list[SweepSpec], mc_enabled: bool = False, cfg: MonteCarloConfig = MonteCarloConfig(),
              quad: QuadratureSpec = DEFAULT_QUADRATURE) -> list[ResultRow]:
    """Evaluate every grid point in spec order, then axis order.

    A failing point records its exception in ``error`` and the sweep carries on.
    """
    return list(iter_sweep(specs, mc_enabled, cfg, quad))


# ---------------------------------------------------------------- output


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(format(value, ".12g"))
    return value


def _columns(timing: bool) -> tuple[str, ...]:
    return COLUMNS + ("runtime_ms",) if timing else COLUMNS


def rows_to_csv(rows: list[ResultRow], timing: bool = False) -> str:
    cols = _columns(timing)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for row in rows:
        d = asdict(row)
        writer.writerow([_fmt(d[c]) for c in cols])
    return buf.getvalue()


def rows_to_json(rows: list[ResultRow], timing: bool = False) -> str:
    cols = _columns(timing)
    payload = [{c: _json_value(asdict(r)[c]) for c in cols} for r in rows]
    return json.dumps(payload, indent=2) + "\n"


def emit(rows: list[ResultRow], fmt: str = "csv", path: str | Path | None = None, timing: bool = False) -> str:
    """Serialize rows as CSV (RFC 4180, 12 significant digits) or a JSON array.

    Writes to ``path`` when given and returns the text either way.
    """
    if fmt == "csv":
        text = rows_to_csv(rows, timing)
    elif fmt == "json":
        text = rows_to_json(rows, timing)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path is not None:
        try:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write results to {path}: {exc.strerror}") from None
    return text


_INT_COLS = {"n", "mc_samples", "mc_seed"}
_STR_COLS = {"group", "axis", "symbols", "error"}


def _parse_cell(col: str, cell: str):
    if col in _STR_COLS:
        return cell
    if cell == "":
        return None
    if col == "rate_clamped":
        return cell == "true"
    if col in _INT_COLS:
        return int(cell)
    return float(cell)


def parse_csv(text: str) -> list[ResultRow]:
    """Inverse of :func:`rows_to_csv`."""
    reader = csv.DictReader(io.StringIO(text, newline=""))
    return [ResultRow(**{c: _parse_cell(c, v) for c, v in rec.items()}) for rec in reader]


def with_mc_overrides(cfg: MonteCarloConfig, overrides: dict) -> MonteCarloConfig:
    mapping = {"samples": "num_samples"}
    return replace(cfg, **{mapping.get(k, k): v for k, v in overrides.items()})
