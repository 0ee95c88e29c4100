"""Command-line interface.

Exit codes: 0 all checks pass, 2 invalid/unparseable input, 3 a verification
check failed (the report is still written).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import TridiskError, ValidationError
from .geometry import PolygonalQuadrilateral
from .generators import FAMILIES, generate
from .geodesic import internal_side_distance
from .medial_axis import compute_medial_axis
from .modulus import estimate_modulus
from .render_svg import render_svg
from .report import report_to_json, run_verification

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_CHECK_FAILED = 3


def _load(path: str) -> PolygonalQuadrilateral:
    try:
        return PolygonalQuadrilateral.from_file(path)
    except (ValidationError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot load {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID_INPUT)


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    q = _load(args.input)
    try:
        report = run_verification(
            q,
            cells=args.cells,
            oracle=args.oracle,
            timings=args.timings,
            input_path=args.input,
        )
    except TridiskError as exc:
        print(f"error: verification failed to run: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    _write(report_to_json(report), args.out)
    if args.svg:
        graph = compute_medial_axis(q) if q.quad_vertices_convex() else None
        Path(args.svg).write_text(
            render_svg(q, medial_axis=graph, disk=report["disk"])
        )
    for name, okay in sorted(report["pass"].items()):
        print(f"{'PASS' if okay else 'FAIL'} {name}", file=sys.stderr)
    return EXIT_OK if report["ok"] else EXIT_CHECK_FAILED


def cmd_gen(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    instances = generate(args.family, args.seed, args.count)
    for i, q in enumerate(instances):
        path = outdir / f"{args.family}_{args.seed}_{i:03d}.json"
        q.save(path)
        print(path)
    return EXIT_OK


def cmd_render(args) -> int:
    q = _load(args.input)
    disk = None
    witnesses = []
    oracle_disk = None
    if args.results:
        try:
            results = json.loads(Path(args.results).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read results {args.results}: {exc}", file=sys.stderr)
            return EXIT_INVALID_INPUT
        disk = results.get("disk")
        oracle_disk = results.get("oracle_disk")
        for key in ("witness_a", "witness_b"):
            if results.get(key):
                witnesses.append(results[key]["path"])
    graph = None
    if not args.no_medial_axis:
        try:
            graph = compute_medial_axis(q)
        except TridiskError:
            graph = None
    svg = render_svg(q, medial_axis=graph, disk=disk, witnesses=witnesses,
                     oracle_disk=oracle_disk)
    _write(svg, args.out)
    return EXIT_OK


def cmd_medial_axis(args) -> int:
    q = _load(args.input)
    graph = compute_medial_axis(q)
    _write(json.dumps(graph.to_json_dict(), sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_modulus(args) -> int:
    q = _load(args.input)
    h = args.h if args.h else q.diameter / args.cells
    est = estimate_modulus(q, h, richardson=args.richardson)
    _write(json.dumps(est.to_json(), sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_geodesic(args) -> int:
    q = _load(args.input)
    out = {}
    for pair in args.pair:
        value, witness = internal_side_distance(q, pair)
        out[f"s_{pair}"] = value
        out[f"witness_{pair}"] = witness.to_json()
    _write(json.dumps(out, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tridisk",
        description="Disks touching three sides of a quadrilateral: "
        "verification pipeline and geometry tools.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the full verification pipeline")
    v.add_argument("input")
    v.add_argument("--cells", type=int, default=256,
                   help="modulus raster resolution: h = diam/cells")
    v.add_argument("--oracle", action="store_true",
                   help="cross-check the disk against the grid oracle")
    v.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (breaks byte determinism)")
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--svg", help="also render an SVG figure here")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate seeded instance files")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", default=".")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("render", help="render an SVG figure")
    r.add_argument("input")
    r.add_argument("--results", help="verification report JSON to overlay")
    r.add_argument("--no-medial-axis", action="store_true")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)

    m = sub.add_parser("medial-axis", help="compute the medial-axis graph")
    m.add_argument("input")
    m.add_argument("--out")
    m.set_defaults(func=cmd_medial_axis)

    mo = sub.add_parser("modulus", help="estimate the modulus")
    mo.add_argument("input")
    mo.add_argument("--cells", type=int, default=256)
    mo.add_argument("--h", type=float, help="absolute cell spacing (overrides --cells)")
    mo.add_argument("--richardson", action="store_true")
    mo.add_argument("--out")
    mo.set_defaults(func=cmd_modulus)

    ge = sub.add_parser("geodesic", help="internal side distances")
    ge.add_argument("input")
    ge.add_argument("--pair", choices=["a", "b"], action="append",
                    help="which opposite pair (default: both)")
    ge.add_argument("--out")
    ge.set_defaults(func=cmd_geodesic)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "geodesic" and not args.pair:
        args.pair = ["a", "b"]
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except TridiskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
