"""Command-line front end.

    framelab run   --config CONFIG [--csv PATH] [--json PATH] [--grid-samples N]
    framelab sweep --config CONFIG [--json PATH] [--grid-samples N]

A config is a JSON document such as::

    {
      "construction": {"name": "bump", "a": 0.25, "m": 100},
      "analysis": "frame-bounds",
      "grid": {"annulus_a": 0.25, "samples_per_dim": 4096, "norm": "inf"},
      "sweep": {"param": "m", "values": [50, 100, 200, 400]}
    }

Exit status: 0 success, 2 bad config, 3 construction error, 4 analysis
precondition failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from . import __version__
from .constructions import build, natural_annulus
from .errors import ConfigError, FramelabError, InvalidParams
from .frames import TruncationPolicy, frame_bound_report, kappa_values, parseval_check
from .grids import DyadicAnnulusGrid
from .profiles import Indicator, Profile
from .regions import RegionUnion, delta_separation, dyadic_tiling_defect, translation_overlap

ANALYSES = ("kappa-profile", "frame-bounds", "parseval", "delta-separation", "tiling-defect", "sweep")
SWEEP_PARAMS = ("m", "delta", "a", "d")

PARAM_KEYS = {
    "han": {"intervals", "delta"},
    "h2d": {"a", "delta"},
    "g2d": {"a", "delta"},
    "f2d": {"a", "delta", "outer", "inner", "delta_out", "delta_in"},
    "radial": {"a", "delta", "d"},
    "bump": {"a", "m"},
    "convolved": {"a", "m", "region", "mollifier"},
    "indicator": {"region"},
}

TOP_KEYS = {"construction", "analysis", "grid", "sweep", "tolerance", "k_radius", "output"}
GRID_KEYS = {"annulus_a", "samples_per_dim", "norm"}
SWEEP_KEYS = {"param", "values"}
OUTPUT_KEYS = {"csv_path", "json_path"}

EXIT_CODES = {"config": 2, "construction": 3, "analysis": 4}


# --------------------------------------------------------------------------
# config model

@dataclass(frozen=True)
class GridSpec:
    annulus_a: float | None = None
    samples_per_dim: int | None = None
    norm: str | None = None


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class OutputSpec:
    csv_path: str | None = None
    json_path: str | None = None


@dataclass(frozen=True)
class RunConfig:
    construction: str
    params: dict = field(default_factory=dict)
    analysis: str = "frame-bounds"
    grid: GridSpec = GridSpec()
    sweep: SweepSpec | None = None
    tolerance: float = 1e-9
    k_radius: int | None = None
    output: OutputSpec = OutputSpec()

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "construction": {"name": self.construction, **self.params},
            "analysis": self.analysis,
            "tolerance": self.tolerance,
        }
        grid = {k: v for k, v in vars(self.grid).items() if v is not None}
        if grid:
            doc["grid"] = grid
        if self.sweep is not None:
            doc["sweep"] = {"param": self.sweep.param, "values": list(self.sweep.values)}
        if self.k_radius is not None:
            doc["k_radius"] = self.k_radius
        out = {k: v for k, v in vars(self.output).items() if v is not None}
        if out:
            doc["output"] = out
        return doc


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _fail(text: str, path: str, message: str, key: str | None = None):
    line = _line_of(text, key) if key else None
    where = f" (line {line})" if line else ""
    raise ConfigError(f"{path}: {message}{where}")


def _check_keys(text, obj, allowed, path):
    if not isinstance(obj, dict):
        _fail(text, path, "expected an object")
    for key in obj:
        if key not in allowed:
            _fail(text, f"{path}.{key}" if path else key, f"unknown key {key!r}", key)


def _number(text, value, path, key, positive=False, integer=False):
    ok = isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    if ok and integer:
        ok = float(value).is_integer()
    if ok and positive:
        ok = value > 0
    if not ok:
        kind = "positive " if positive else ""
        kind += "integer" if integer else "finite number"
        _fail(text, path, f"expected a {kind}, got {value!r}", key)
    return int(value) if integer else value


def validate_config(text: str) -> RunConfig:
    """Parse and strictly validate a JSON config document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    _check_keys(text, doc, TOP_KEYS, "")
    if "construction" not in doc:
        _fail(text, "construction", "missing required key")
    cons = doc["construction"]
    if isinstance(cons, str):
        cons = {"name": cons}
    if not isinstance(cons, dict) or "name" not in cons:
        _fail(text, "construction", "expected an object with a 'name'", "construction")
    name = cons["name"]
    if name not in PARAM_KEYS:
        _fail(text, "construction.name", f"unknown construction {name!r}; expected one of "
              f"{sorted(PARAM_KEYS)}", "name")
    params = {k: v for k, v in cons.items() if k != "name"}
    _check_keys(text, params, PARAM_KEYS[name], "construction")
    for key in ("a", "delta", "m", "outer", "inner", "delta_out", "delta_in"):
        if key in params:
            _number(text, params[key], f"construction.{key}", key)
    if "d" in params:
        _number(text, params["d"], "construction.d", "d", integer=True)

    analysis = doc.get("analysis", "frame-bounds")
    if analysis not in ANALYSES:
        _fail(text, "analysis", f"unknown analysis {analysis!r}; expected one of {list(ANALYSES)}", "analysis")

    grid_doc = doc.get("grid", {})
    _check_keys(text, grid_doc, GRID_KEYS, "grid")
    grid = GridSpec(
        annulus_a=_number(text, grid_doc["annulus_a"], "grid.annulus_a", "annulus_a", positive=True)
        if "annulus_a" in grid_doc else None,
        samples_per_dim=_number(text, grid_doc["samples_per_dim"], "grid.samples_per_dim",
                                "samples_per_dim", positive=True, integer=True)
        if "samples_per_dim" in grid_doc else None,
        norm=grid_doc.get("norm"),
    )
    if grid.norm not in (None, "inf", "euclid"):
        _fail(text, "grid.norm", f"expected 'inf' or 'euclid', got {grid.norm!r}", "norm")

    sweep = None
    if "sweep" in doc:
        sw = doc["sweep"]
        _check_keys(text, sw, SWEEP_KEYS, "sweep")
        if sw.get("param") not in SWEEP_PARAMS:
            _fail(text, "sweep.param", f"expected one of {list(SWEEP_PARAMS)}, got {sw.get('param')!r}", "param")
        values = sw.get("values")
        if not isinstance(values, list) or not values:
            _fail(text, "sweep.values", "expected a nonempty list", "values")
        for v in values:
            _number(text, v, "sweep.values", "values")
        sweep = SweepSpec(sw["param"], tuple(values))
    elif analysis == "sweep":
        _fail(text, "sweep", "analysis 'sweep' needs a sweep section", "analysis")

    tol = _number(text, doc.get("tolerance", 1e-9), "tolerance", "tolerance", positive=True)
    k_radius = None
    if "k_radius" in doc:
        k_radius = _number(text, doc["k_radius"], "k_radius", "k_radius", integer=True)
        if k_radius < 0:
            _fail(text, "k_radius", "must be nonnegative", "k_radius")

    out_doc = doc.get("output", {})
    _check_keys(text, out_doc, OUTPUT_KEYS, "output")
    for key, value in out_doc.items():
        if not isinstance(value, str):
            _fail(text, f"output.{key}", "expected a path string", key)
    output = OutputSpec(out_doc.get("csv_path"), out_doc.get("json_path"))

    return RunConfig(name, params, analysis, grid, sweep, tol, k_radius, output)


# --------------------------------------------------------------------------
# execution

def _grid_for(cfg: RunConfig, profile: Profile, samples: int | None) -> DyadicAnnulusGrid:
    a = cfg.grid.annulus_a or natural_annulus(cfg.construction, cfg.params, profile)
    norm = cfg.grid.norm or ("euclid" if cfg.construction == "radial" else "inf")
    return DyadicAnnulusGrid.for_profile(profile, a, norm, samples or cfg.grid.samples_per_dim)


def _region_for(cfg: RunConfig, profile: Profile) -> RegionUnion:
    if isinstance(profile, Indicator):
        return profile.region
    if cfg.construction == "han":
        return RegionUnion.intervals(*cfg.params["intervals"])
    if cfg.construction == "convolved":
        from .constructions import _region_from, half_annulus
        return _region_from(cfg.params["region"]) if "region" in cfg.params else half_annulus(cfg.params["a"])
    raise InvalidParams(f"construction {cfg.construction!r} does not define a region")


def write_kappa_csv(path: str, profile: Profile, grid: DyadicAnnulusGrid) -> None:
    """Write ``gamma_1..gamma_d,kappa`` rows for every grid sample."""
    trunc = TruncationPolicy.for_grid(profile, grid)
    header = ",".join([f"gamma_{i + 1}" for i in range(grid.dimension)] + ["kappa"])
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for pts in grid.chunks():
            kap = kappa_values(profile, pts, trunc)
            np.savetxt(fh, np.column_stack([pts, kap]), fmt="%.17g", delimiter=",", newline="\n")


def _analyse(cfg: RunConfig, samples: int | None, csv_path: str | None) -> dict:
    profile = build(cfg.construction, cfg.params)
    if cfg.analysis in ("delta-separation", "tiling-defect"):
        region = _region_for(cfg, profile)
        if cfg.analysis == "delta-separation":
            return {"delta_separation": delta_separation(region, cfg.k_radius),
                    "translation_overlap": translation_overlap(region, cfg.k_radius)}
        a = cfg.grid.annulus_a or region.inner_radius()
        grid = DyadicAnnulusGrid(a, samples or cfg.grid.samples_per_dim or
                                 {1: 4096, 2: 512, 3: 128}.get(region.dim, 64),
                                 region.dim, cfg.grid.norm or "inf")
        d = dyadic_tiling_defect(region, grid)
        return {"under_fraction": d.under_fraction, "over_fraction": d.over_fraction,
                "samples": d.samples, "n_range": list(d.n_range)}
    grid = _grid_for(cfg, profile, samples)
    if csv_path:
        write_kappa_csv(csv_path, profile, grid)
    grid_doc = {"annulus_a": grid.a, "samples_per_dim": grid.samples_per_dim, "norm": grid.norm}
    if cfg.analysis == "parseval":
        res = parseval_check(profile, grid, cfg.tolerance)
        return {**res.to_dict(), "cross_terms_vanish": res.cross_terms_vanish, "grid": grid_doc}
    report = frame_bound_report(profile, grid)
    out = {**report.to_dict(), "grid": grid_doc, "samples": report.samples}
    if cfg.analysis == "kappa-profile":
        out["argmin"], out["argmax"] = list(report.argmin), list(report.argmax)
    return out


def run(cfg: RunConfig, csv_path: str | None = None, samples: int | None = None) -> dict:
    """Execute one analysis and return the report document."""
    if cfg.analysis == "sweep" or (cfg.sweep is not None and cfg.analysis == "sweep"):
        return sweep(cfg, samples)
    csv_path = csv_path or cfg.output.csv_path
    return {
        "tool": "framelab",
        "version": __version__,
        "config": cfg.to_dict(),
        "analysis": cfg.analysis,
        "result": _analyse(cfg, samples, csv_path),
    }


def sweep(cfg: RunConfig, samples: int | None = None) -> dict:
    """Run the analysis once per sweep value, in the order given."""
    if cfg.sweep is None:
        raise ConfigError("sweep: config has no sweep section")
    inner = "frame-bounds" if cfg.analysis in ("sweep", "kappa-profile") else cfg.analysis
    rows = []
    for value in cfg.sweep.values:
        v = int(value) if cfg.sweep.param == "d" else value
        one = replace(cfg, params={**cfg.params, cfg.sweep.param: v}, analysis=inner, sweep=None)
        if cfg.sweep.param == "a" and cfg.grid.annulus_a is not None:
            one = replace(one, grid=replace(cfg.grid, annulus_a=None))
        result = _analyse(one, samples, None)
        row = {"value": v, "report": result}
        if "K_upper" in result:
            row["K_upper_minus_1"] = result["K_upper"] - 1.0
        elif inner == "parseval":
            row["K_upper_minus_1"] = _analyse(replace(one, analysis="frame-bounds"), samples, None)["K_upper"] - 1.0
        rows.append(row)
    return {
        "tool": "framelab",
        "version": __version__,
        "config": cfg.to_dict(),
        "analysis": "sweep",
        "sweep": {"param": cfg.sweep.param, "analysis": inner},
        "results": rows,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------
# entry point

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="framelab", description="Parseval wavelet frame profiles and frame-bound estimates.")
    ap.add_argument("--version", action="version", version=f"framelab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the analysis named in the config")
    r.add_argument("--config", required=True)
    r.add_argument("--csv", help="write grid kappa samples to this CSV file")
    r.add_argument("--json", help="write the report here instead of stdout")
    r.add_argument("--grid-samples", type=int, help="override grid.samples_per_dim")
    s = sub.add_parser("sweep", help="run the analysis for each value in the sweep section")
    s.add_argument("--config", required=True)
    s.add_argument("--json", help="write the report here instead of stdout")
    s.add_argument("--grid-samples", type=int, help="override grid.samples_per_dim")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg = validate_config(text)
        if args.grid_samples is not None and args.grid_samples < 2:
            raise ConfigError("--grid-samples must be at least 2")
        if args.command == "sweep":
            doc = sweep(cfg, args.grid_samples)
        else:
            doc = run(cfg, args.csv, args.grid_samples)
        out = args.json or cfg.output.json_path
        text = dumps(doc)
        if out:
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except FramelabError as exc:
        print(f"framelab: error: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 4)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
