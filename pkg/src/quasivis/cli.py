"""Command-line front-end: field inspection, density sweeps, plots, hole
construction and random-lattice experiments, with reproducible outputs."""

from __future__ import annotations

import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import click
import jsonschema
import numpy as np

from . import __version__, counting, cutproject, holes, kernels, svgplot
from .quadfield import (
    PID_D,
    check_hammarhjelm,
    field,
    fundamental_unit,
    hammarhjelm_witness,
    is_squarefree,
)
from .regions import Box, region_from_spec

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3

_REGION_SCHEMA = {"type": "object", "required": ["kind"],
                  "properties": {"kind": {"type": "string"}}}

DENSITY_SCHEMA = {
    "type": "object",
    "required": ["d", "dim", "window", "averaging", "T_grid"],
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "dim": {"type": "integer", "minimum": 1},
        "window": _REGION_SCHEMA,
        "averaging": _REGION_SCHEMA,
        "T_grid": {"type": "array", "items": {"type": "number"},
                   "minItems": 1},
        "beta_exp": {"type": "integer", "maximum": 0},
        "method": {"enum": ["direct", "moebius", "both"]},
    },
    "additionalProperties": False,
}

RANDOM_SCHEMA = {
    "type": "object",
    "required": ["n", "d", "window", "omega", "T_grid", "samples"],
    "properties": {
        "n": {"type": "integer", "minimum": 3},
        "d": {"type": "integer", "minimum": 1},
        "window": _REGION_SCHEMA,
        "omega": _REGION_SCHEMA,
        "T_grid": {"type": "array", "items": {"type": "number"},
                   "minItems": 1},
        "samples": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

PLOT_SCHEMA = {
    "type": "object",
    "required": ["d", "dim", "window", "averaging", "T"],
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "dim": {"type": "integer", "minimum": 1},
        "window": _REGION_SCHEMA,
        "averaging": _REGION_SCHEMA,
        "T": {"type": "number"},
        "beta_exp": {"type": "integer", "maximum": 0},
    },
    "additionalProperties": False,
}


def _load_config(path: str, schema: dict) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
        jsonschema.validate(cfg, schema)
    except (OSError, json.JSONDecodeError,
            jsonschema.ValidationError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    return cfg


def _header(cfg: dict, path_kind: str) -> dict:
    blob = json.dumps(cfg, sort_keys=True).encode()
    return {
        "tool": "quasivis",
        "version": __version__,
        "config_sha256": hashlib.sha256(blob).hexdigest(),
        "arithmetic_path": path_kind,
        "kernel_backend": kernels.backend_name(),
        "config": cfg,
    }


def _header_comments(header: dict) -> str:
    keys = ("tool", "version", "config_sha256", "arithmetic_path",
            "kernel_backend")
    return "".join(f"# {k}: {header[k]}\n" for k in keys)


def _desc_from_config(cfg: dict) -> cutproject.CPSetDesc:
    return cutproject.CPSetDesc(
        field=field(cfg["d"]), d=cfg["dim"],
        window=region_from_spec(cfg["window"]),
        beta_exp=cfg.get("beta_exp", 0))


def _threads(value: int | None) -> int:
    if value:
        return value
    env = os.environ.get("QUASIVIS_THREADS")
    return int(env) if env else 1


@click.group()
@click.version_option(version=__version__, prog_name="quasivis")
def main():
    """Cut-and-project point sets over real quadratic fields: generation,
    visibility, densities, and certified holes."""


@main.command("check-hc")
@click.argument("d_min", type=int)
@click.argument("d_max", type=int)
@click.option("--out", type=click.Path(), default=None,
              help="Directory for the CSV table.")
def cmd_check_hc(d_min, d_max, out):
    """Classify PID fields in [D_MIN, D_MAX] by the unit-box criterion:
    the Minkowski lattice misses (1, lambda) x [-1, 1]."""
    if not (2 <= d_min <= d_max):
        click.echo("need 2 <= d_min <= d_max", err=True)
        sys.exit(EXIT_CONFIG)
    rows = []
    for d in range(d_min, d_max + 1):
        if d not in PID_D or not is_squarefree(d):
            continue
        fld = field(d)
        lam = fundamental_unit(fld)
        wit = hammarhjelm_witness(fld)
        rows.append((d, fld.disc, float(lam), wit is None,
                     "" if wit is None else repr(wit)))
    header = "d,disc,lambda,empty_box,witness"
    click.echo(header)
    for r in rows:
        click.echo(f"{r[0]},{r[1]},{r[2]:.6f},{int(r[3])},{r[4]}")
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        lines = [header] + [f"{r[0]},{r[1]},{r[2]:.6f},{int(r[3])},{r[4]}"
                            for r in rows]
        (Path(out) / "check_hc.csv").write_text("\n".join(lines) + "\n")


@main.command("density")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", type=click.Path(), default=".")
@click.option("--method", type=click.Choice(["direct", "moebius", "both"]),
              default=None, help="Overrides the config's method.")
def cmd_density(config_path, out, method):
    """Visible-density sweep over a T grid with identity cross-checks."""
    cfg = _load_config(config_path, DENSITY_SCHEMA)
    if method:
        cfg["method"] = method
    desc = _desc_from_config(cfg)
    D = region_from_spec(cfg["averaging"])
    use_moebius = cfg.get("method", "direct") in ("moebius", "both")
    try:
        predicted = counting.predicted_density_hammarhjelm(desc)
    except cutproject.NotHammarhjelm as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    reports = []
    for T in cfg["T_grid"]:
        rep = counting.visible_count(
            desc, D, Fraction(str(T)),
            method="moebius" if use_moebius else "direct",
            predicted=predicted)
        reports.append(rep)
        click.echo(rep.csv_row())
    header = _header(cfg, "exact")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv = _header_comments(header) + counting.CountReport.CSV_HEADER + "\n"
    csv += "".join(r.csv_row() + "\n" for r in reports)
    (out_dir / "density.csv").write_text(csv)
    summary = dict(header)
    summary["predicted_density"] = predicted
    summary["reports"] = [r.to_json() for r in reports]
    try:
        summary["rate_fit"] = counting.rate_fit(reports).to_json()
    except counting.DegenerateFit as exc:
        summary["rate_fit"] = {"error": str(exc)}
    all_ok = all(r.identity_ok for r in reports)
    summary["identities_ok"] = all_ok
    (out_dir / "density.json").write_text(json.dumps(summary, indent=1))
    if not all_ok:
        click.echo("identity violation detected", err=True)
        sys.exit(EXIT_IDENTITY)


@main.command("plot")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--field", "field_d", type=int, default=None,
              help="Plot the Minkowski embedding of the ring for this d.")
@click.option("--out", type=click.Path(), default=".")
def cmd_plot(config_path, field_d, out):
    """Deterministic SVG scatter: points with visibility styling, or a
    Minkowski-embedding field plot with the unit-box overlay."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if field_d is not None:
        svg = svgplot.svg_field_plot(field(field_d))
        (out_dir / f"field_d{field_d}.svg").write_text(svg)
        return
    if config_path is None:
        click.echo("need --config or --field", err=True)
        sys.exit(EXIT_CONFIG)
    cfg = _load_config(config_path, PLOT_SCHEMA)
    desc = _desc_from_config(cfg)
    D = region_from_spec(cfg["averaging"])
    pts = cutproject.generate(desc, D, Fraction(str(cfg["T"])))
    vis = [cutproject.visible_fast(desc, p) for p in pts]
    (out_dir / "points.svg").write_text(svgplot.svg_scatter(pts, vis))
    (out_dir / "points.csv").write_text(cutproject.points_to_csv(pts, vis))


@main.command("holes")
@click.option("--n", "n_dim", type=int, required=True)
@click.option("--a", "--A", "a_half", type=int, required=True)
@click.option("--translates", type=int, default=5)
@click.option("--seed", type=int, default=0)
@click.option("--subspace", type=str, default=None,
              help="Comma-separated direction vector for the near-subspace "
                   "search.")
@click.option("--radius", type=float, default=None)
@click.option("--budget", type=int, default=1_000_000)
@click.option("--out", type=click.Path(), default=".")
def cmd_holes(n_dim, a_half, translates, seed, subspace, radius, budget, out):
    """Build a CRT gcd-hole, verify it on random translates, optionally
    search for a translate near a subspace."""
    hole = holes.build_crt_hole(n_dim, a_half)
    rng = np.random.default_rng(seed)
    checks = [("x0", holes.verify_hole(hole, hole.x0))]
    for t in range(translates):
        k = rng.integers(-10, 11, size=n_dim)
        x = tuple(x0 + hole.N * int(kj) for x0, kj in zip(hole.x0, k))
        checks.append((f"translate_{t}", holes.verify_hole(hole, x)))
    doc = {
        "hole": json.loads(hole.to_json()),
        "verifications": {name: ok for name, ok in checks},
    }
    exit_code = EXIT_OK if all(ok for _, ok in checks) else EXIT_IDENTITY
    if subspace is not None:
        vec = [float(v) for v in subspace.split(",")]
        r = radius if radius is not None else float(hole.N)
        found = holes.hole_near_subspace(hole, [vec], r, budget)
        if found is holes.NotFound:
            doc["subspace_search"] = "NotFound"
            exit_code = EXIT_BUDGET
        else:
            doc["subspace_search"] = [str(v) for v in found]
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "holes.json").write_text(json.dumps(doc, indent=1))
    click.echo(json.dumps(doc["verifications"]))
    if exit_code:
        sys.exit(exit_code)


@main.command("random")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None,
              help="Overrides the config's seed.")
@click.option("--threads", type=int, default=None)
@click.option("--out", type=click.Path(), default=".")
def cmd_random(config_path, seed, threads, out):
    """Random-lattice primitive-density experiment against 1/zeta(n)."""
    cfg = _load_config(config_path, RANDOM_SCHEMA)
    if seed is not None:
        cfg["seed"] = seed
    cfg.setdefault("seed", 0)
    window = region_from_spec(cfg["window"])
    omega = region_from_spec(cfg["omega"])
    if not isinstance(window, Box) or not isinstance(omega, Box):
        click.echo("config error: random experiment needs box regions",
                   err=True)
        sys.exit(EXIT_CONFIG)
    res = counting.random_lattice_experiment(
        n=cfg["n"], d=cfg["d"], window=window, omega=omega,
        T_list=cfg["T_grid"], samples=cfg["samples"], seed=cfg["seed"],
        threads=_threads(threads))
    doc = _header(cfg, "float")
    doc["result"] = res
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "random.json").write_text(json.dumps(doc, indent=1))
    click.echo(json.dumps(res["per_T"][-1]))


if __name__ == "__main__":
    main()
