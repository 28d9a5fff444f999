"""Command line front end: ``plate-mps run`` and ``plate-mps oracle``."""

import argparse
import csv
from importlib import resources
import logging
import os
from pathlib import Path
import sys

import numpy as np

from . import __version__
from .config import ConfigError, load_config
from .geometry import sample_boundary, sample_interior
from .oracle import disk_eigenvalues
from .solver import PlateProblem, evaluate_mode, scan_grid, solve

log = logging.getLogger("plate_mps")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3


def fmt(v):
    """17 significant digits, literal NaN for missing values."""
    v = float(v)
    return "NaN" if np.isnan(v) else f"{v:.17g}"


def resolve_config(name):
    """A path, or the name of a bundled config such as ``disk_clamped.cfg``."""
    p = Path(name)
    if p.exists():
        return p
    bundled = resources.files("plate_mps") / "configs" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    if not p.suffix:
        bundled = resources.files("plate_mps") / "configs" / (p.name + ".cfg")
        if bundled.is_file():
            return Path(str(bundled))
    raise FileNotFoundError(f"no config file or bundled config named {name!r}")


def bundled_configs():
    return sorted(f.name for f in (resources.files("plate_mps") / "configs").iterdir() if f.name.endswith(".cfg"))


def build_problem(cfg):
    domain = cfg.domain.build()
    samples = sample_boundary(domain, cfg.sampling.boundary, cfg.bc.arcs, cfg.bc.default)
    interior = sample_interior(domain, cfg.sampling.interior, cfg.sampling.seed)
    return PlateProblem(
        domain=domain,
        material=cfg.material,
        boundary=samples,
        interior=interior,
        basis=cfg.basis,
        branches=cfg.scan.branches,
        reg_eps=cfg.scan.reg_eps,
    )


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_outputs(outdir, cfg, curve, modes, problem, warnings):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    m = curve.branches
    _write_rows(
        outdir / "tension_curve.csv",
        ["k"] + [f"tau_{i + 1}" for i in range(m)] + ["g_condition"],
        ([fmt(k)] + [fmt(t) for t in taus] + [fmt(c)] for k, taus, c in zip(curve.ks, curve.taus, curve.g_conditions)),
    )
    _write_rows(
        outdir / "eigenfrequencies.csv",
        ["k_star", "omega_star", "multiplicity", "tension_at_min"],
        ([fmt(md.k_star), fmt(md.omega_star), md.multiplicity, fmt(md.tension_at_min)] for md in modes),
    )
    for idx, md in enumerate(modes, 1):
        raster = evaluate_mode(md, problem, cfg.output.resolution)
        X, Y = np.meshgrid(raster.x, raster.y)
        for b, field in enumerate(raster.fields, 1):
            _write_rows(
                outdir / f"mode_{idx}_{b}.csv",
                ["x", "y", "value"],
                ([fmt(x), fmt(y), fmt(v)] for x, y, v in zip(X.ravel(), Y.ravel(), field.ravel())),
            )
    with open(outdir / "run_manifest.cfg", "w") as fh:
        fh.write(f"# plate-mps {__version__}\n")
        for line in warnings:
            fh.write(f"# warning: {line}\n")
        fh.write(cfg.to_text())


def run(config, threads=1, validate_only=False, output=None, stdout=None):
    """Execute a config; returns the process exit status."""
    stdout = stdout or sys.stdout
    try:
        path = resolve_config(config)
        cfg = load_config(path, os.environ.get("PLATE_MPS_SEED"))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if validate_only:
        stdout.write(cfg.to_text())
        return EXIT_OK

    outdir = Path(output or cfg.output.directory)
    problem = build_problem(cfg)
    ks = scan_grid(cfg.scan.k_min, cfg.scan.k_max, cfg.scan.step)
    curve, modes = solve(problem, ks, cfg.scan.dip_ratio, threads, cfg.scan.log_parabola)
    warnings = [f"k={fmt(curve.ks[j])} failed: {msg}" for j, msg in sorted(curve.failures.items())]
    if len(curve.failures) == len(ks):
        print("error: every grid point failed", file=sys.stderr)
        write_outputs(outdir, cfg, curve, [], problem, warnings)
        return EXIT_NUMERICS
    write_outputs(outdir, cfg, curve, modes, problem, warnings)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"{len(modes)} eigenfrequencies written to {outdir}", file=stdout)
    return EXIT_OK


def oracle(bc, nu=0.33, k_max=8.0, n_max=10, radius=1.0, stdout=None):
    stdout = stdout or sys.stdout
    try:
        roots = disk_eigenvalues(bc, nu=nu, radius=radius, n_max=n_max, k_max=k_max)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    w = csv.writer(stdout, lineterminator="\n")
    w.writerow(["k", "n", "multiplicity"])
    for r in roots:
        w.writerow([fmt(r.k), r.n, r.multiplicity])
    return EXIT_OK


def make_parser():
    p = argparse.ArgumentParser(prog="plate-mps", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="scan a config and export curves, eigenfrequencies and modes")
    r.add_argument("config", help=f"config path or bundled name ({', '.join(bundled_configs())})")
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--validate-only", action="store_true", help="parse and echo the config, no numerics")
    r.add_argument("--output", help="override output.directory")

    o = sub.add_parser("oracle", help="analytic disk eigen-wavenumbers as CSV")
    o.add_argument("bc", help="clamped, simply_supported or free")
    o.add_argument("--nu", type=float, default=0.33)
    o.add_argument("--kmax", type=float, default=8.0)
    o.add_argument("--nmax", type=int, default=10)
    o.add_argument("--radius", type=float, default=1.0)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    if args.command == "run":
        if args.threads < 1:
            print("error: --threads must be at least 1", file=sys.stderr)
            return EXIT_CONFIG
        return run(args.config, args.threads, args.validate_only, args.output)
    return oracle(args.bc, args.nu, args.kmax, args.nmax, args.radius)


if __name__ == "__main__":
    sys.exit(main())
