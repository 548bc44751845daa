"""Command-line front end.

Every subcommand writes a JSON report ``{suite}[-{variant}]-n{rank}.json`` and a CSV of
the checked values into ``--out``; builders add the sampled family as JSON,
``decompose`` adds projection and coefficient tables, ``plot-supports`` adds
four SVG panels. Exit status: 0 all checks pass, 1 a check failed, 2 bad
configuration, 3 internal error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import traceback
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import suites
from .mra import NORMALIZATIONS, sample_family, to_json
from .plotting import support_svg

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["RunConfig", "ConfigError", "load_config", "report_json", "report_stem", "run", "main"]

SUBCOMMANDS = ("verify-core", "verify-hypergroup", "verify-hankel", "verify-mra",
               "build-shannon", "build-from-classical", "decompose", "plot-supports")
FAMILIES = ("shannon", "meyer")
FUNCTIONS = ("bump", "band", "both")


class ConfigError(ValueError):
    """Invalid run configuration (exit status 2)."""


@dataclasses.dataclass(frozen=True)
class RunConfig:
    rank: int = 2
    grid: Optional[int] = None
    radius: Optional[float] = None
    mc_samples: int = 100_000
    hist_samples: int = 1_000_000
    seed: int = 0
    triples: int = 20
    pairs: int = 10
    points: int = 100
    lam_max: Optional[int] = None
    family: str = "shannon"
    normalization: str = "gram"
    profile: str = "meyer"
    function: str = "both"
    levels: Tuple[int, int] = (-8, 2)
    cells: int = 64
    freq_nodes: int = 32
    out: str = "radial-mra-out"
    tol: Dict[str, float] = dataclasses.field(default_factory=dict)

    def suite_config(self) -> suites.SuiteConfig:
        return suites.SuiteConfig(
            rank=self.rank, seed=self.seed, grid=self.grid, radius=self.radius,
            mc_samples=self.mc_samples, hist_samples=self.hist_samples, triples=self.triples,
            pairs=self.pairs, points=self.points, family=self.family, lam_max=self.lam_max,
            levels=tuple(self.levels), function=self.function, tolerances=dict(self.tol))


FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
POSITIVE = ("grid", "radius", "mc_samples", "hist_samples", "triples", "pairs", "points", "cells", "freq_nodes")
CHOICES = {"family": FAMILIES, "normalization": NORMALIZATIONS, "profile": suites.CLASSICAL_PROFILES,
           "function": FUNCTIONS}


def _coerce(name: str, value):
    default = FIELDS[name].default
    if name == "levels":
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise ConfigError("levels needs two integers j_min, j_max")
        lv = tuple(_as_int("levels", v) for v in value)
        if lv[0] > lv[1]:
            raise ConfigError("levels must satisfy j_min <= j_max")
        return lv
    if name == "tol":
        if not isinstance(value, dict):
            raise ConfigError("tol must be a table of name = value")
        return {str(k): _tolerance(k, v) for k, v in value.items()}
    if name in ("radius",):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{name} must be a string")
        return value
    return _as_int(name, value)


def _as_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer")
    return value


def _tolerance(name, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"tolerance {name} must be a number")
    if not value > 0:
        raise ConfigError(f"tolerance {name} must be positive")
    return float(value)


def _parse_tol(items: Sequence[str]) -> Dict[str, float]:
    out = {}
    for item in items:
        name, sep, raw = item.partition("=")
        if not sep or not name:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"tolerance {name} is not a number: {raw!r}") from None
        out[name] = _tolerance(name, value)
    return out


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge the TOML file (if any) with the command-line flags; flags win."""
    values = {}
    if args.config is not None:
        try:
            with open(args.config, "rb") as fh:
                doc = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        unknown = sorted(set(doc) - set(FIELDS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values = {k: _coerce(k, v) for k, v in doc.items()}
    for name in FIELDS:
        if name == "tol":
            continue
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = _coerce(name, flag)
    if args.tol:
        values["tol"] = {**values.get("tol", {}), **_parse_tol(args.tol)}
    cfg = RunConfig(**values)
    if cfg.rank < 2:
        raise ConfigError("rank must be at least 2")
    for name in POSITIVE:
        v = getattr(cfg, name)
        if v is not None and not v > 0:
            raise ConfigError(f"{name} must be positive")
    for name, allowed in CHOICES.items():
        if getattr(cfg, name) not in allowed:
            raise ConfigError(f"{name} must be one of {', '.join(allowed)}")
    if cfg.cells % 4:
        raise ConfigError("cells must be a multiple of 4")
    return cfg


# ---------------------------------------------------------------- outputs


def _write_csv(path: Path, rows: List[Tuple[object, object]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "value"])
        writer.writerows(rows)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, complex):
        return repr(v).strip("()")
    return repr(v)


def report_json(rep: suites.Report) -> str:
    """The report file contents; a pure function of the report."""
    return json.dumps(rep.as_dict(), indent=2, allow_nan=False) + "\n"


def report_stem(subcommand: str, cfg: RunConfig) -> str:
    """File stem of a report; variants of one suite get distinct names."""
    variant = {"verify-mra": cfg.family, "build-from-classical": cfg.profile}.get(subcommand)
    if subcommand == "build-shannon" and cfg.normalization != "gram":
        variant = cfg.normalization
    return f"{subcommand}-{variant}-n{cfg.rank}" if variant else f"{subcommand}-n{cfg.rank}"


def _write_report(out: Path, rep: suites.Report, stem: str) -> Path:
    path = out / f"{stem}.json"
    path.write_text(report_json(rep), encoding="utf-8")
    _write_csv(out / f"{stem}.csv",
               [(d["name"], _cell(d["value"])) for d in rep.as_dict()["checks"]])
    return path


def _write_family(out: Path, fam, rank: int, freq_nodes: int) -> Path:
    path = out / f"{fam.name}-n{rank}.family.json"
    path.write_text(to_json(sample_family(fam, freq_nodes=freq_nodes, symbol_nodes=freq_nodes)) + "\n",
                    encoding="utf-8")
    return path


def _check_tolerances_used(cfg: RunConfig, rep: suites.Report) -> None:
    used = {c.name for c in rep.checks if c.name in cfg.tol and c.tolerance == cfg.tol[c.name]}
    unused = sorted(set(cfg.tol) - used)
    if unused:
        raise ConfigError(f"tolerances not adjustable in {rep.suite}: {', '.join(unused)}")


def run(subcommand: str, cfg: RunConfig) -> suites.Report:
    """Run one subcommand and write its artifacts; returns the report."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    if subcommand == "plot-supports" and cfg.rank != 2:
        raise ConfigError("plot-supports draws planar panels and needs rank 2")
    scfg = cfg.suite_config()
    extra = []
    if subcommand in suites.SUITES:
        rep = suites.SUITES[subcommand](scfg)
    elif subcommand == "build-shannon":
        rep, fam = suites.build_shannon(scfg, cfg.normalization)
        extra.append(("family", fam))
    elif subcommand == "build-from-classical":
        rep, fam = suites.build_from_classical(scfg, cfg.profile, cfg.normalization)
        extra.append(("family", fam))
    elif subcommand == "decompose":
        trees = {}
        rep = suites.verify_decompose(scfg, trees)
        extra.extend(("tree", item) for item in sorted(trees.items()))
    else:
        masks, _, rep = suites.support_panels(cfg.cells)
        extra.extend(("panel", item) for item in enumerate(masks))
    _check_tolerances_used(cfg, rep)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_report(out, rep, report_stem(subcommand, cfg))
    for kind, item in extra:
        if kind == "family":
            _write_family(out, item, cfg.rank, cfg.freq_nodes)
        elif kind == "tree":
            name, tree = item
            norm = tree.norm_sq ** 0.5
            stem = f"decompose-n{cfg.rank}-{name}"
            _write_csv(out / f"{stem}-projections.csv",
                       [(j, repr(tree.projection_norm(j) / norm)) for j in tree.levels])
            rows = []
            for k, j in enumerate(tree.levels):
                for i, lam in enumerate(tree.parts):
                    label = "-".join(str(p) for p in lam.parts)
                    rows.append((f"j={j};lambda={label}", _cell(complex(tree.coeffs[k, i]))))
            _write_csv(out / f"{stem}-coefficients.csv", rows)
        else:
            i, mask = item
            title = f"Q^{i} ∩ [-π, π)^2"
            (out / f"supports-Q{i}.svg").write_text(support_svg(mask, title), encoding="utf-8")
    if subcommand == "plot-supports":
        cell = (2 * 3.141592653589793 / cfg.cells) ** 2
        _write_csv(out / "supports-areas.csv", [(i, repr(float(m.sum()) * cell)) for i, m in enumerate(masks)])
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="radial-mra", description="Radial multiresolution analysis on Hermitian matrices.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="TOML file with any of the options below ([tol] as a table)")
    p.add_argument("--rank", type=int, help="matrix size n >= 2 (default 2)")
    p.add_argument("--grid", type=int, help="grid resolution: nodes per axis or quadrature order")
    p.add_argument("--radius", type=float, help="half-width of the spatial grid")
    p.add_argument("--mc-samples", dest="mc_samples", type=int, help="Haar samples per Monte-Carlo estimate")
    p.add_argument("--hist-samples", dest="hist_samples", type=int, help="samples per spectral histogram")
    p.add_argument("--seed", type=int, help="base seed of all random draws")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="override the tolerance of a named check (repeatable)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--family", help="verify-mra family: shannon or meyer")
    p.add_argument("--normalization", help="Shannon constant: gram or literal")
    p.add_argument("--profile", help="build-from-classical profile: meyer or shannon")
    p.add_argument("--function", help="decompose test function: bump, band or both")
    p.add_argument("--levels", type=int, nargs=2, metavar=("JMIN", "JMAX"), help="decompose levels")
    p.add_argument("--lam-max", dest="lam_max", type=int, help="partition truncation |lambda|_1")
    p.add_argument("--cells", type=int, help="plot-supports cells per axis (multiple of 4)")
    p.add_argument("--freq-nodes", dest="freq_nodes", type=int, help="samples per axis in exported families")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        rep = run(args.subcommand, cfg)
    except ConfigError as exc:
        print(f"radial-mra: configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3
    for c in rep.checks:
        value = "nan" if c.as_dict()["value"] is None else f"{c.value:.6g}"
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  value={value}  tol={c.tolerance:g}")
    print(f"{rep.suite} rank {rep.rank}: {'PASS' if rep.passed else 'FAIL'}")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
