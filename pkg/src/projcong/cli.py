"""Command line front end.

    projcong gen polytope --vertices 30 --seed 7 --output K.json
    projcong classify --body-k K.json --body-l L.json --output report.json
    projcong radon --f legendre2 --grid 812
    projcong quartic --a 3 --b 1.25
    projcong orbit --r 0.5 --n 100

Exit codes: 0 success (and Equal/ReflectedEqual verdicts), 2 for a
Violation/MixedEvidence verdict, 1 for bad input or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bodies
from .congruence import ClassifyParams
from .geometry import AxisRotation, fibonacci_grid
from .quartic import solve_width_tau_system
from .radon import legendre2, radon_transform, tau_difference_check
from .sphere import EQUAL, REFLECTED_EQUAL, DecompositionReport, decompose_sphere, orbit_covering_radius

SCHEMA_VERSION = 1
DIRECTION_COLUMNS = [
    "pole_x", "pole_y", "pole_z", "tag", "best_angle", "best_residual",
    "width_spread", "tau_spread", "in_sigma", "in_lambda",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    body_path_k: Path
    body_path_l: Path
    grid_size: int = 812
    circle_samples: int = 512
    match_tol: float = 1e-8
    spread_tol: float = 1e-7
    seed: int = 0
    output_path: Path | None = None
    format: str = "json"

    def __post_init__(self):
        if self.match_tol <= 0 or self.spread_tol <= 0:
            raise UsageError("tolerances must be positive")
        if self.grid_size < 50:
            raise UsageError("--grid must be at least 50")
        if self.circle_samples < 16 or self.circle_samples % 2:
            raise UsageError("--circle-samples must be even and at least 16")


def _workers() -> int:
    raw = os.environ.get("PROJCONG_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"PROJCONG_THREADS must be an integer, got {raw!r}") from None


def _grid(total: int):
    # --grid counts directions; the antipodal Fibonacci grid doubles its point count
    if total < 4 or total % 2:
        raise UsageError("--grid must be an even number of directions, at least 4")
    return fibonacci_grid(total // 2, antipodal=True)


def _write_table(rows: list[dict], columns: list[str], fmt: str, path: Path, meta: dict | None = None) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: "" if row[k] is None else row[k] for k in columns})
        text = buf.getvalue()
    else:
        doc = {"schema_version": SCHEMA_VERSION, **(meta or {}), "rows": rows}
        text = json.dumps(doc, indent=2) + "\n"
    path.write_text(text, encoding="utf-8")


def direction_rows(report: DecompositionReport) -> list[dict]:
    rows = []
    for rec in report.records:
        best = rec.cls.best_match
        if rec.tag == "Disk":
            angle = 0.0
        else:
            angle = best.angle if best is not None else None
        rows.append({
            "pole_x": float(rec.pole[0]),
            "pole_y": float(rec.pole[1]),
            "pole_z": float(rec.pole[2]),
            "tag": rec.tag,
            "best_angle": angle,
            "best_residual": rec.cls.best_residual,
            "width_spread": rec.width_spread,
            "tau_spread": rec.tau_spread,
            "in_sigma": rec.in_sigma,
            "in_lambda": rec.in_lambda,
        })
    return rows


def report_to_json(report: DecompositionReport, config: RunConfig) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "verdict": report.verdict.kind,
        "verdict_poles": [list(map(float, p)) for p in report.verdict.poles],
        "coverage_gol": report.coverage_gol,
        "coverage_mod_gol": report.coverage_mod_gol,
        "common_width": report.common_width,
        "grid_size": len(report.grid),
        "circle_samples": config.circle_samples,
        "match_tol": config.match_tol,
        "spread_tol": config.spread_tol,
        "seed": config.seed,
        "directions": direction_rows(report),
    }
    return json.dumps(doc, indent=2) + "\n"


# -- subcommands -----------------------------------------------------------------


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "polytope":
        rng = np.random.Generator(np.random.PCG64(args.seed))
        body = bodies.random_polytope(args.vertices, rng, margin=args.margin)
    elif kind == "ball":
        body = bodies.SupportSeries.ball(args.radius)
    elif kind == "cw-harmonic":
        body = bodies.constant_width_harmonic(args.eps)
    else:
        if args.of is None:
            raise UsageError(f"gen {kind} needs --of BODY.json")
        inner = bodies.load_body(args.of)
        if kind == "reflected":
            body = bodies.reflect(inner)
        else:
            body = bodies.rotated(inner, AxisRotation(np.asarray(args.axis, dtype=float), args.fraction))
    bodies.validate(body)
    bodies.save_body(body, args.output)
    print(f"wrote {kind} body to {args.output}")
    return 0


def cmd_classify(args) -> int:
    config = RunConfig(
        body_path_k=Path(args.body_k),
        body_path_l=Path(args.body_l),
        grid_size=args.grid,
        circle_samples=args.circle_samples,
        match_tol=args.match_tol,
        spread_tol=args.spread_tol,
        seed=args.seed,
        output_path=Path(args.output) if args.output else None,
        format=args.format,
    )
    K = bodies.load_body(config.body_path_k)
    L = bodies.load_body(config.body_path_l)
    bodies.validate(K)
    bodies.validate(L)
    params = ClassifyParams(config.circle_samples, config.match_tol, config.spread_tol, _workers())
    report = decompose_sphere(K, L, _grid(config.grid_size), params)

    if config.output_path is not None:
        if config.format == "csv":
            _write_table(direction_rows(report), DIRECTION_COLUMNS, "csv", config.output_path)
        else:
            config.output_path.write_text(report_to_json(report, config), encoding="utf-8")

    tags: dict[str, int] = {}
    for rec in report.records:
        tags[rec.tag] = tags.get(rec.tag, 0) + 1
    print(f"verdict: {report.verdict.kind}")
    print(f"directions: {len(report.records)}  " + "  ".join(f"{k}={v}" for k, v in sorted(tags.items())))
    print(f"coverage F0+F1+Sigma: {report.coverage_gol}   coverage F0+F1+Lambda: {report.coverage_mod_gol}")
    if report.common_width is not None:
        print(f"common width of constant-width projections: {report.common_width:.12g}")
    if report.verdict.poles:
        print(f"offending directions: {len(report.verdict.poles)}")
    return 0 if report.verdict.kind in (EQUAL, REFLECTED_EQUAL) else 2


_RADON_FUNCTIONS = {
    "constant": lambda u: np.ones(u.shape[:-1]),
    "uz": lambda u: u[..., 2],
    "legendre2": legendre2,
}


def cmd_radon(args) -> int:
    grid = _grid(args.grid)
    if args.f == "tau-diff":
        if not (args.body_k and args.body_l):
            raise UsageError("--f tau-diff needs --body-k and --body-l")
        K, L = bodies.load_body(args.body_k), bodies.load_body(args.body_l)
        radon_res, tau_res = tau_difference_check(K, L, grid, args.n_quad)
        f = lambda u: K.tau_dual(u) - L.tau_dual(u)  # noqa: E731
    else:
        f = _RADON_FUNCTIONS[args.f]
    result = radon_transform(f, grid, args.n_quad)
    fvals = f(grid.directions)

    if args.output:
        rows = [
            {"pole_x": float(p[0]), "pole_y": float(p[1]), "pole_z": float(p[2]), "f": float(fv), "radon": float(rv)}
            for p, fv, rv in zip(grid.directions, fvals, result.values)
        ]
        meta = {"function": args.f, "n_quad": args.n_quad, "grid_size": len(grid)}
        _write_table(rows, ["pole_x", "pole_y", "pole_z", "f", "radon"], args.format, Path(args.output), meta)

    print(f"radon transform of {args.f} on {len(grid)} poles, n_quad={args.n_quad}")
    print(f"max |Rf| = {np.max(np.abs(result.values)):.3e}")
    if args.f == "legendre2":
        print(f"max |Rf + f/2| = {np.max(np.abs(result.values + fvals / 2)):.3e}")
    if args.f == "tau-diff":
        print(f"max |tau_K* - tau_L*| = {tau_res:.3e}   max |R(tau_K* - tau_L*)| = {radon_res:.3e}")
    return 0


def cmd_quartic(args) -> int:
    if not (args.a > 0 and args.b > 0):
        raise UsageError("--a and --b must be positive")
    sol = solve_width_tau_system(args.a, args.b)
    if args.output:
        rows = [{"x": x, "y": y, "residual": r} for (x, y), r in zip(sol.pairs, sol.residuals)]
        _write_table(rows, ["x", "y", "residual"], args.format, Path(args.output), {"a": args.a, "b": args.b})
    print(f"x + y = {args.a:g},  x^-2 + y^-2 = {args.b:g}:  {len(sol.pairs)} solution(s)")
    for (x, y), r in zip(sol.pairs, sol.residuals):
        print(f"  x = {x:.15g}  y = {y:.15g}  residual = {r:.2e}")
    return 0


def cmd_orbit(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    rep = orbit_covering_radius(args.r, args.n)
    if args.output:
        rows = [{"fraction": rep.fraction, "steps": rep.steps, "covering_radius": rep.covering_radius}]
        _write_table(rows, ["fraction", "steps", "covering_radius"], args.format, Path(args.output))
    print(f"orbit of rotation by {args.r:g}*pi, {args.n} steps: covering radius {rep.covering_radius:.12g} rad")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="projcong", description="Rotation-congruent projections of convex bodies.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output_opts(p):
        p.add_argument("--output", help="write machine-readable results here")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    g = sub.add_parser("gen", help="write a body file")
    g.add_argument("kind", choices=["polytope", "ball", "cw-harmonic", "reflected", "rotated"])
    g.add_argument("--vertices", type=int, default=30)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--margin", type=float, default=0.05, help="origin clearance for random polytopes")
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--eps", type=float, default=0.05)
    g.add_argument("--of", help="body file to reflect or rotate")
    g.add_argument("--axis", type=float, nargs=3, default=[0.0, 0.0, 1.0])
    g.add_argument("--fraction", type=float, default=0.0, help="rotation angle as a multiple of pi")
    g.add_argument("--output", required=True)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("classify", help="decompose the sphere and test the two-body verdict")
    c.add_argument("--body-k", required=True)
    c.add_argument("--body-l", required=True)
    c.add_argument("--grid", type=int, default=812, help="number of directions (antipodal Fibonacci grid)")
    c.add_argument("--circle-samples", type=int, default=512)
    c.add_argument("--match-tol", type=float, default=1e-8)
    c.add_argument("--spread-tol", type=float, default=1e-7)
    c.add_argument("--seed", type=int, default=0)
    output_opts(c)
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("radon", help="spherical Radon transform of a test function")
    r.add_argument("--f", choices=[*_RADON_FUNCTIONS, "tau-diff"], default="legendre2")
    r.add_argument("--grid", type=int, default=812)
    r.add_argument("--n-quad", type=int, default=512)
    r.add_argument("--body-k")
    r.add_argument("--body-l")
    output_opts(r)
    r.set_defaults(func=cmd_radon)

    q = sub.add_parser("quartic", help="solve x+y=a, x^-2+y^-2=b")
    q.add_argument("--a", type=float, required=True)
    q.add_argument("--b", type=float, required=True)
    output_opts(q)
    q.set_defaults(func=cmd_quartic)

    o = sub.add_parser("orbit", help="covering radius of a rotation orbit on the circle")
    o.add_argument("--r", type=float, required=True, help="rotation angle as a multiple of pi")
    o.add_argument("--n", type=int, default=10_000)
    output_opts(o)
    o.set_defaults(func=cmd_orbit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, bodies.BodyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"projcong: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
