"""Command-line front end.

Subcommands: verify-scalar, verify-elastic, field, green, correlation,
projector. Reports are UTF-8 JSON (default) or CSV; identical
configurations produce byte-identical reports. Exit codes: 0 on success,
1 on tolerance failure, 2 on usage or validation errors. The thread count
comes from --threads, the SCATTERCORR_THREADS environment variable, or
the CPU count, in that order; results never depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, verify
from .elastic import ElasticMedium
from .greenfn import green_disk, green_free, im_green
from .scalarwave import ScattererSpec, WaveContext, total, wave_vector
from .verify import SpectralWindow

CHECK_TOLERANCE = 1e-15


class CliError(Exception):
    """Configuration or validation problem; maps to exit code 2."""


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------
def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [[_jsonable(complex(v)) for v in row] for row in np.atleast_2d(obj)]
        return np.atleast_2d(obj).tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(payload: dict, rows: list[dict], columns: list[str], args) -> None:
    if args.format == "json":
        text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(c, "")) for c in columns])
        text = buf.getvalue()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _figure_path(args, suffix: str) -> str:
    if args.output:
        base = Path(args.output)
        return str(base.with_name(base.stem + "_" + suffix + ".png"))
    figdir = Path(args.figdir or "figures")
    figdir.mkdir(parents=True, exist_ok=True)
    return str(figdir / (suffix + ".png"))


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------
def _parse_point(text: str, d: int) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != d:
        raise CliError(f"point '{text}' must have {d} comma-separated coordinates")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise CliError(f"invalid point '{text}': {exc}") from None


def _parse_pair(text: str, d: int) -> tuple[np.ndarray, np.ndarray]:
    halves = text.split(";")
    if len(halves) != 2:
        raise CliError(f"pair '{text}' must be 'x1,..;y1,..'")
    return _parse_point(halves[0], d), _parse_point(halves[1], d)


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        value = args.threads
    else:
        env = os.environ.get("SCATTERCORR_THREADS")
        value = int(env) if env else (os.cpu_count() or 1)
    if value < 1:
        raise CliError("thread count must be >= 1")
    return value


def _scatterer(args) -> ScattererSpec:
    if args.obstacle == "none":
        return ScattererSpec.none()
    if args.radius is None:
        raise CliError("--radius is required for --obstacle disk")
    if args.dim != 2:
        raise CliError("disk scattering is available for --dim 2 only")
    return ScattererSpec.disk(args.radius, args.bc)


def _context(args) -> WaveContext:
    try:
        return WaveContext(args.omega, args.v, args.dim)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _config_dict(args) -> dict:
    # I/O destinations do not influence the computation and are kept out of
    # the report so identical configurations give byte-identical reports.
    skip = {"func", "dump_config", "check", "output", "figdir", "plot"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and not callable(v)}


def _add_common(parser, medium: bool = False):
    parser.add_argument("--dim", type=int, choices=(2, 3), default=2, help="space dimension")
    parser.add_argument("--omega", type=float, default=1.0, help="angular frequency > 0")
    if medium:
        parser.add_argument("--rho", type=float, default=1.0, help="density")
        parser.add_argument("--lam", type=float, default=1.0, help="first Lame coefficient")
        parser.add_argument("--mu", type=float, default=1.0, help="shear modulus")
    else:
        parser.add_argument("--v", type=float, default=1.0, help="wave speed > 0")
        parser.add_argument("--obstacle", choices=("none", "disk"), default="none")
        parser.add_argument("--radius", type=float, help="disk radius (obstacle=disk)")
        parser.add_argument("--bc", choices=("neumann", "dirichlet"), default="neumann",
                            help="boundary condition on the disk")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", help="write the report here instead of stdout")
    parser.add_argument("--threads", type=int, help="worker threads (default: SCATTERCORR_THREADS or all cores)")
    parser.add_argument("--dump-config", action="store_true", help="echo the parsed configuration and exit")
    parser.add_argument("--plot", action="store_true", help="render figures alongside the output")
    parser.add_argument("--figdir", help="figure directory when writing to stdout (default: figures/)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scattercorr",
        description="Scattered waves, Green's functions, spectral projectors, "
                    "and verification of the correlation / Green's-function identity.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-scalar", help="residual of the scalar correlation identity")
    _add_common(p)
    p.add_argument("--pair", action="append", default=[], help="point pair 'x1,x2;y1,y2' (repeatable)")
    p.add_argument("--tol", type=float, default=1e-8, help="relative residual tolerance")
    p.add_argument("--n-max", type=int, help="override the partial-wave truncation")
    p.add_argument("--nodes", type=int, help="override the direction-rule node count (d=2)")
    p.add_argument("--green-terms", type=int, help="override the image-series length")
    p.add_argument("--check", help="re-check residuals stored in a JSON report")
    p.set_defaults(func=cmd_verify_scalar)

    p = sub.add_parser("verify-elastic", help="residual of the elastic correlation identity")
    _add_common(p, medium=True)
    p.add_argument("--pair", action="append", default=[], help="point pair 'x1,..;y1,..' (repeatable)")
    p.add_argument("--tol", type=float, default=1e-8, help="entrywise relative residual tolerance")
    p.add_argument("--check", help="re-check residuals stored in a JSON report")
    p.set_defaults(func=cmd_verify_elastic)

    p = sub.add_parser("field", help="total field on a Cartesian grid")
    _add_common(p)
    p.add_argument("--grid", required=True, help="grid 'x1min:x1max:n1,x2min:x2max:n2'")
    p.add_argument("--kdir", default=None, help="incident direction 'd1,d2[,d3]' (default +x axis)")
    p.add_argument("--x3", type=float, default=0.0, help="third coordinate of the grid slice (dim 3)")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("green", help="Green's function at point pairs")
    _add_common(p)
    p.add_argument("--pair", action="append", default=[], help="point pair (repeatable)")
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("correlation", help="direction-averaged correlation at point pairs")
    _add_common(p)
    p.add_argument("--pair", action="append", default=[], help="point pair (repeatable)")
    p.set_defaults(func=cmd_correlation)

    p = sub.add_parser("projector", help="spectral projector kernel by both routes")
    _add_common(p)
    p.add_argument("--pair", action="append", default=[], help="point pair (repeatable)")
    p.add_argument("--omega-min", type=float, required=False, help="lower window edge")
    p.add_argument("--omega-max", type=float, required=False, help="upper window edge")
    p.add_argument("--radial-nodes", type=int, default=64)
    p.add_argument("--omega-nodes", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-6, help="route-difference tolerance")
    p.add_argument("--check", help="re-check residuals stored in a JSON report")
    p.set_defaults(func=cmd_projector)

    return parser


# ---------------------------------------------------------------------------
# --check mode
# ---------------------------------------------------------------------------
def _as_complex(entry) -> complex:
    if isinstance(entry, dict):
        return complex(entry["re"], entry["im"])
    return complex(entry)


def _as_matrix(entry) -> np.ndarray:
    return np.array([[_as_complex(v) for v in row] for row in entry])


def _run_check(path: str) -> int:
    try:
        report = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read report '{path}': {exc}") from None
    results = report.get("results", [])
    if not results:
        raise CliError("report contains no results to check")
    worst = 0.0
    for res in results:
        lhs, rhs = res["lhs"], res["rhs"]
        if isinstance(lhs, list):
            lhs, rhs = _as_matrix(lhs), _as_matrix(rhs)
        else:
            lhs, rhs = _as_complex(lhs), _as_complex(rhs)
        abs_res, rel_res = verify._residuals(lhs, rhs)
        worst = max(
            worst,
            abs(abs_res - res["abs_residual"]) / max(1.0, abs(res["abs_residual"])),
            abs(rel_res - res["rel_residual"]) / max(1.0, abs(res["rel_residual"])),
        )
    ok = worst <= CHECK_TOLERANCE
    sys.stdout.write(
        json.dumps({"checked": len(results), "max_deviation": worst, "passed": ok},
                   sort_keys=True, indent=2) + "\n"
    )
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------
def cmd_verify_scalar(args) -> int:
    if args.check:
        return _run_check(args.check)
    if args.dump_config:
        sys.stdout.write(json.dumps(_jsonable(_config_dict(args)), sort_keys=True, indent=2) + "\n")
        return 0
    if not args.pair:
        raise CliError("at least one --pair is required")
    ctx = _context(args)
    scat = _scatterer(args)
    pairs = [_parse_pair(p, args.dim) for p in args.pair]
    threads = _resolve_threads(args)

    rule = None
    if args.nodes is not None:
        if args.dim != 2:
            raise CliError("--nodes override applies to d = 2 only")
        from .sphquad import circle_rule
        rule = circle_rule(args.nodes)

    if rule is None:
        reports = verify.verify_scalar_identity_many(
            ctx, scat, pairs, threads=threads, n_max=args.n_max, green_terms=args.green_terms)
    else:
        reports = [verify.verify_scalar_identity(ctx, scat, x, y, rule=rule,
                                                 n_max=args.n_max, green_terms=args.green_terms)
                   for x, y in pairs]

    results, rows = [], []
    for (x, y), rep in zip(pairs, reports):
        results.append({
            "x": list(x), "y": list(y),
            "lhs": rep.lhs, "rhs": complex(rep.rhs),
            "abs_residual": rep.abs_residual, "rel_residual": rep.rel_residual,
            "parameters": rep.parameters,
        })
        row = {f"x{i+1}": x[i] for i in range(args.dim)}
        row.update({f"y{i+1}": y[i] for i in range(args.dim)})
        row.update(lhs_re=rep.lhs.real, lhs_im=rep.lhs.imag, rhs_re=float(np.real(rep.rhs)),
                   abs_residual=rep.abs_residual, rel_residual=rep.rel_residual)
        rows.append(row)

    max_rel = max(r.rel_residual for r in reports)
    payload = {
        "command": "verify-scalar",
        "config": _config_dict(args),
        "results": results,
        "max_rel_residual": max_rel,
        "tolerance": args.tol,
        "passed": bool(max_rel < args.tol),
    }
    columns = [f"x{i+1}" for i in range(args.dim)] + [f"y{i+1}" for i in range(args.dim)]
    columns += ["lhs_re", "lhs_im", "rhs_re", "abs_residual", "rel_residual"]
    _emit(payload, rows, columns, args)
    if args.plot:
        from . import figures
        figures.render_residual_figure([r.rel_residual for r in reports], args.tol,
                                       _figure_path(args, "verify_scalar_residuals"))
    return 0 if payload["passed"] else 1


def cmd_verify_elastic(args) -> int:
    if args.check:
        return _run_check(args.check)
    if args.dump_config:
        sys.stdout.write(json.dumps(_jsonable(_config_dict(args)), sort_keys=True, indent=2) + "\n")
        return 0
    if not args.pair:
        raise CliError("at least one --pair is required")
    try:
        medium = ElasticMedium(args.rho, args.lam, args.mu)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.omega <= 0:
        raise CliError("omega must be positive")
    pairs = [_parse_pair(p, args.dim) for p in args.pair]

    results, rows, residuals = [], [], []
    for x, y in pairs:
        rep = verify.verify_elastic_identity(args.omega, medium, x, y)
        residuals.append(rep.rel_residual)
        results.append({
            "x": list(x), "y": list(y),
            "lhs": np.asarray(rep.lhs, dtype=complex),
            "rhs": np.asarray(rep.rhs),
            "abs_residual": rep.abs_residual, "rel_residual": rep.rel_residual,
            "parameters": rep.parameters,
        })
        row = {f"x{i+1}": x[i] for i in range(args.dim)}
        row.update({f"y{i+1}": y[i] for i in range(args.dim)})
        row.update(abs_residual=rep.abs_residual, rel_residual=rep.rel_residual,
                   fitted_scale=rep.parameters["fitted_scale"])
        rows.append(row)

    max_rel = max(residuals)
    payload = {
        "command": "verify-elastic",
        "config": _config_dict(args),
        "results": results,
        "max_rel_residual": max_rel,
        "tolerance": args.tol,
        "passed": bool(max_rel < args.tol),
    }
    columns = [f"x{i+1}" for i in range(args.dim)] + [f"y{i+1}" for i in range(args.dim)]
    columns += ["abs_residual", "rel_residual", "fitted_scale"]
    _emit(payload, rows, columns, args)
    if args.plot:
        from . import figures
        figures.render_residual_figure(residuals, args.tol,
                                       _figure_path(args, "verify_elastic_residuals"))
    return 0 if payload["passed"] else 1


def _parse_grid(text: str) -> tuple[np.ndarray, np.ndarray]:
    axes = text.split(",")
    if len(axes) != 2:
        raise CliError("grid must be 'x1min:x1max:n1,x2min:x2max:n2'")
    out = []
    for axis in axes:
        parts = axis.split(":")
        if len(parts) != 3:
            raise CliError(f"bad grid axis '{axis}'")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise CliError(f"bad grid axis '{axis}': {exc}") from None
        if n < 1:
            raise CliError("grid axis needs at least one sample")
        out.append(np.linspace(lo, hi, n))
    return out[0], out[1]


def cmd_field(args) -> int:
    if args.dump_config:
        sys.stdout.write(json.dumps(_jsonable(_config_dict(args)), sort_keys=True, indent=2) + "\n")
        return 0
    ctx = _context(args)
    scat = _scatterer(args)
    default_dir = np.zeros(args.dim)
    default_dir[0] = 1.0
    direction = _parse_point(args.kdir, args.dim) if args.kdir else default_dir
    kvec = wave_vector(ctx, direction)
    xs, ys = _parse_grid(args.grid)

    rows = []
    for x1 in xs:
        for x2 in ys:
            row = {"x1": float(x1), "x2": float(x2)}
            point = np.array([x1, x2])
            if args.dim == 3:
                row["x3"] = args.x3
                point = np.array([x1, x2, args.x3])
            row.update(re=float("nan"), im=float("nan"), note="")
            try:
                value = total(ctx, scat, point, kvec)
                row["re"], row["im"] = value.real, value.imag
            except ValueError:
                row["note"] = "interior"
            rows.append(row)

    payload = {"command": "field", "config": _config_dict(args), "results": rows}
    columns = ["x1", "x2"] + (["x3"] if args.dim == 3 else []) + ["re", "im", "note"]
    _emit(payload, rows, columns, args)
    if args.plot:
        from . import figures
        figures.render_field_figure(rows, len(xs), len(ys), _figure_path(args, "field"))
    return 0


def _pair_rows(args, evaluate) -> list[dict]:
    if not args.pair:
        raise CliError("at least one --pair is required")
    rows = []
    for text in args.pair:
        x, y = _parse_pair(text, args.dim)
        row = {f"x{i+1}": float(x[i]) for i in range(args.dim)}
        row.update({f"y{i+1}": float(y[i]) for i in range(args.dim)})
        row.update(re=float("nan"), im=float("nan"), note="")
        try:
            value = evaluate(x, y)
            row["re"], row["im"] = value.real, value.imag
        except ValueError as exc:
            row["note"] = str(exc)
        rows.append(row)
    return rows


def cmd_green(args) -> int:
    if args.dump_config:
        sys.stdout.write(json.dumps(_jsonable(_config_dict(args)), sort_keys=True, indent=2) + "\n")
        return 0
    ctx = _context(args)
    scat = _scatterer(args)

    def evaluate(x, y):
        if scat.kind == "disk":
            return green_disk(ctx, scat, x, y).value
        return green_free(ctx, x, y).value

    rows = _pair_rows(args, evaluate)
    payload = {"command": "green", "config": _config_dict(args), "results": rows}
    columns = [f"x{i+1}" for i in range(args.dim)] + [f"y{i+1}" for i in range(args.dim)] + ["re", "im", "note"]
    _emit(payload, rows, columns, args)
    if args.plot:
        from . import figures
        figures.render_pair_figure(rows, _figure_path(args, "green"), "G(x, y)")
    return 0


def cmd_correlation(args) -> int:
    if args.dump_config:
        sys.stdout.write(json.dumps(_jsonable(_config_dict(args)), sort_keys=True, indent=2) + "\n")
        return 0
    ctx = _context(args)
    scat = _scatterer(args)
    rows = _pair_rows(args, lambda x, y: verify.correlation_scalar(ctx, scat, x, y))
    payload = {"command": "correlation", "config": _config_dict(args), "results": rows}
    columns = [f"x{i+1}" for i in range(args.dim)] + [f"y{i+1}" for i in range(args.dim)] + ["re", "im", "note"]
    _emit(payload, rows, columns, args)
    if args.plot:
        from . import figures
        figures.render_pair_figure(rows, _figure_path(args, "correlation"), "C(x, y)")
    return 0


def cmd_projector(args) -> int:
    if args.check:
        return _run_check(args.check)
    if args.dump_config:
        sys.stdout.write(json.dumps(_jsonable(_config_dict(args)), sort_keys=True, indent=2) + "\n")
        return 0
    if not args.pair:
        raise CliError("at least one --pair is required")
    if args.omega_min is None or args.omega_max is None:
        raise CliError("--omega-min and --omega-max are required")
    ctx = _context(args)
    scat = _scatterer(args)
    try:
        window = SpectralWindow(args.omega_min, args.omega_max)
    except ValueError as exc:
        raise CliError(str(exc)) from None

    results, rows = [], []
    last = None
    for text in args.pair:
        x, y = _parse_pair(text, args.dim)
        stone = verify.projector_kernel_stone(ctx, scat, window, x, y, args.omega_nodes)
        scattering = verify.projector_kernel_scattering(ctx, scat, window, x, y, args.radial_nodes)
        abs_res, rel_res = verify._residuals(stone, scattering)
        last = (stone, scattering)
        results.append({
            "x": list(x), "y": list(y),
            "lhs": stone, "rhs": scattering,
            "abs_residual": abs_res, "rel_residual": rel_res,
        })
        row = {f"x{i+1}": x[i] for i in range(args.dim)}
        row.update({f"y{i+1}": y[i] for i in range(args.dim)})
        row.update(stone_re=stone.real, stone_im=stone.imag,
                   scattering_re=scattering.real, scattering_im=scattering.imag,
                   rel_residual=rel_res)
        rows.append(row)

    max_rel = max(r["rel_residual"] for r in results)
    payload = {
        "command": "projector",
        "config": _config_dict(args),
        "results": results,
        "max_rel_residual": max_rel,
        "tolerance": args.tol,
        "passed": bool(max_rel < args.tol),
    }
    columns = [f"x{i+1}" for i in range(args.dim)] + [f"y{i+1}" for i in range(args.dim)]
    columns += ["stone_re", "stone_im", "scattering_re", "scattering_im", "rel_residual"]
    _emit(payload, rows, columns, args)
    if args.plot and last is not None:
        from . import figures
        figures.render_projector_figure(last[0], last[1], _figure_path(args, "projector"))
    return 0 if payload["passed"] else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------
def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
