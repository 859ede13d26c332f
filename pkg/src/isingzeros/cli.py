"""Command line entry point: ``isingzeros <subcommand> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import canonical, experiments
from .canonical import CanonicalSpec, build_canonical
from .errors import IsingZerosError
from .fixtures import nine_vertex_nonconvex, six_vertex_two_concave
from .graph import build_dual
from .ising import ZERO_TOL, geometric_couplings, loop_polynomial
from .mesh import load_mesh, save_mesh
from .meshgen import RescaleConfig, SamplerConfig, random_mesh, validate_closed

FIXTURES = {"six": six_vertex_two_concave, "nine": nine_vertex_nonconvex}


def _range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return float(lo), float(hi or lo)


def _int_range(text: str) -> list[int]:
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def _grid(text: str) -> list[float]:
    """``lo:hi:n`` (inclusive, evenly spaced) or a comma-separated list."""
    if ":" in text:
        lo, hi, n = text.split(":")
        return [float(v) for v in np.linspace(float(lo), float(hi), int(n))]
    return [float(v) for v in text.split(",")]


def _mesh(arg: str):
    """A mesh file path, or ``fixture:six`` / ``fixture:nine``."""
    if arg.startswith("fixture:"):
        return FIXTURES[arg.split(":", 1)[1]]()
    return load_mesh(arg)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    rows, ok = [], True
    for path in args.meshes:
        mesh = _mesh(path)
        graph, records = build_dual(mesh)
        ev = loop_polynomial(graph, geometric_couplings(graph, records), method=args.method)
        ok &= ev.normalized_residual <= args.tolerance
        rows.append((mesh, ev))
    if args.format == "structured-text":
        text = "\n".join(ev.to_text(mesh.name) for mesh, ev in rows)
        _emit(text, args.out)
    else:
        new = args.out is None or not Path(args.out).exists()
        buf = sys.stdout if args.out is None else open(args.out, "a", newline="")
        w = csv.writer(buf, lineterminator="\n")
        if new:
            w.writerow(experiments.BATCH_HEADER)
        for mesh, ev in rows:
            w.writerow(
                [mesh.name, mesh.n_vertices, mesh.n_faces, ev.method]
                + [repr(x) for x in (ev.value.real, ev.value.imag, ev.absolute, ev.normalized_residual)]
                + [f"{ev.elapsed:.6f}"]
            )
        if args.out is not None:
            buf.close()
    return 0 if ok else 1


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"generator": "numpy PCG64 (default_rng)", "meshes": []}
    for k in range(args.count):
        seed = args.seed + k
        rescale = RescaleConfig(_range(args.rescale), seed + 1) if args.rescale else None
        sampler = SamplerConfig(args.vertices, args.distribution, seed)
        name = f"v{args.vertices}-seed{seed}"
        mesh = random_mesh(sampler, rescale, name=name)
        report = validate_closed(mesh)
        save_mesh(mesh, out / f"{name}.json")
        manifest["meshes"].append(
            {
                "file": f"{name}.json",
                "vertices": args.vertices,
                "distribution": args.distribution,
                "sample_seed": seed,
                "rescale_range": list(rescale.factor_range) if rescale else None,
                "rescale_seed": rescale.seed if rescale else None,
                "accepted": report.accepted,
                "reasons": report.reasons,
            }
        )
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {args.count} meshes to {out}")
    return 0


def cmd_campaign(args) -> int:
    cfg = experiments.CampaignConfig(
        n_meshes=args.seeds,
        n_vertices=args.vertices,
        rescalings_per_mesh=args.rescalings,
        seed=args.seed,
        tolerance=args.tolerance,
        rescale_range=_range(args.rescale),
        output_path=args.out,
        include_timing=args.timing,
    )
    result = experiments.run_zero_campaign(cfg, workers=args.workers)
    if not args.out:
        sys.stdout.write(result.to_csv())
    bad = result.failures()
    print(
        f"meshes {len(result.rows)}  accepted {len(result.accepted_rows)}  failures {len(bad)}  "
        f"max normalized {max(r.normalized for r in result.rows):.3g}",
        file=sys.stderr,
    )
    return 0 if not bad else 1


def cmd_perturb(args) -> int:
    amps = [float(a) for a in args.amplitudes.split(",")] if args.amplitudes else [10.0**k for k in range(-6, 0)]
    scan = experiments.run_perturbation_scan(_mesh(args.mesh), amps, seed=args.seed)
    lines = ["amplitude,abs,normalized"] + [f"{a!r},{v!r},{n!r}" for a, v, n in scan.rows()]
    _emit("\n".join(lines) + "\n", args.out)
    print(f"log-log slope {scan.slope:.4f} (R^2 {scan.r_squared:.5f})", file=sys.stderr)
    return 0 if 0.8 <= scan.slope <= 1.2 else 1


def cmd_signsearch(args) -> int:
    res = experiments.run_sign_search(_mesh(args.mesh), tolerance=args.tolerance)
    fmt = lambda s: " ".join("+" if v > 0 else "-" for v in s)  # noqa: E731
    text = [
        f"links: {len(res.geometric_signs)}",
        f"zero configurations: {res.n_zero}",
        f"best |P|: {res.best_value!r}",
        f"geometric signs: {fmt(res.geometric_signs)}",
    ] + [f"minimizer: {fmt(c)}" for c in res.best_configs]
    text.append(f"matches geometry: {res.matches_geometry}")
    _emit("\n".join(text) + "\n", args.out)
    return 0 if res.matches_geometry else 1


def cmd_torus_sweep(args) -> int:
    ok = True
    if args.asymptotics:
        rows = []
        for param, table in experiments.TORUS_ASYMPTOTICS.items():
            got = experiments.run_torus_sweep(param, [v for v, _ in table], geometric=args.geometric)
            for (v, ref), row in zip(table, got):
                ok &= abs(row.absolute / ref - 1) <= 1e-3
            rows += got
    else:
        grid = _grid(args.grid)
        rows = experiments.run_torus_sweep(args.param, grid, geometric=args.geometric)
    _emit(experiments.torus_rows_csv(rows), args.out)
    return 0 if ok else 1


def cmd_scaling(args) -> int:
    study = experiments.run_scaling_study(
        _int_range(args.vertices), list(range(args.seed, args.seed + args.seeds)), _range(args.rescale)
    )
    _emit(study.to_csv(), args.out)
    print(f"log(seconds) slope per vertex {study.time_slope:.4f}, R^2 {study.time_r_squared:.4f}", file=sys.stderr)
    return 0


def _example_spec(args) -> CanonicalSpec:
    name = args.name
    if name == "pancake":
        return CanonicalSpec.pancake()
    if name == "tetrahedron":
        return CanonicalSpec.tetrahedron()
    if name == "pyramid":
        return CanonicalSpec.pyramid(args.h if args.h is not None else math.sqrt(2))
    if name == "double_pyramid":
        return CanonicalSpec.double_pyramid(args.h if args.h is not None else math.sqrt(2), args.z)
    if name == "cube":
        return CanonicalSpec.cube(args.a)
    if name == "torus":
        return CanonicalSpec.torus(args.r, args.R, args.h if args.h is not None else 1.0)
    raise IsingZerosError(f"unknown example {name!r}")


def cmd_example(args) -> int:
    spec = _example_spec(args)
    mesh = build_canonical(spec)
    if args.out:
        save_mesh(mesh, args.out)
    graph, records = build_dual(mesh)
    Y = geometric_couplings(graph, records)
    ev = loop_polynomial(graph, Y, method="spin_sum")
    ref = canonical.reference_couplings(spec)
    classes = canonical.edge_classes(spec, mesh)
    closed = complex(canonical.reference_polynomial(spec, ref))
    worst = float(np.abs(Y - canonical.expand_classes(classes, ref)).max())
    lines = [f"example: {spec.label}", f"vertices: {mesh.n_vertices}", f"faces: {mesh.n_faces}", f"genus: {mesh.genus}"]
    lines += [f"coupling {k}: {complex(v)!r}" for k, v in ref.items()]
    lines += [
        f"max coupling deviation: {worst!r}",
        f"closed form P: {closed!r}",
        ev.to_text(spec.label).rstrip("\n"),
    ]
    print("\n".join(lines))
    return 0 if worst <= 1e-10 and abs(closed - ev.value) <= 1e-10 * ev.magnitude_scale else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isingzeros", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, tol=True):
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        if tol:
            p.add_argument("--tolerance", type=float, default=ZERO_TOL)

    p = sub.add_parser("verify", help="evaluate P at the geometric couplings of mesh files")
    p.add_argument("meshes", nargs="+", help="JSON/OFF mesh files or fixture:six / fixture:nine")
    p.add_argument("--method", default="auto", choices=["auto", "spin_sum", "even_subgraph"])
    p.add_argument("--format", default="structured-text", choices=["csv", "structured-text"])
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write random sphere meshes and a replay manifest")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--rescale", help="radial factor range lo:hi (omit for convex)")
    p.add_argument("--distribution", default="uniform", choices=["uniform", "pole-weighted"])
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("campaign", help="batch zero verification with Regge actions")
    p.add_argument("--vertices", type=int, default=11)
    p.add_argument("--seeds", type=int, default=10, help="number of point samples")
    p.add_argument("--rescalings", type=int, default=9)
    p.add_argument("--rescale", default="1:4")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the CSV")
    common(p)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("perturb", help="|P| against real perturbation amplitude")
    p.add_argument("mesh")
    p.add_argument("--amplitudes", help="comma-separated (default 1e-6..1e-1)")
    common(p, tol=False)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("signsearch", help="|P| over all phase-sign assignments")
    p.add_argument("mesh")
    common(p)
    p.set_defaults(func=cmd_signsearch)

    p = sub.add_parser("torus-sweep", help="P_torus along one parameter")
    p.add_argument("--param", default="h", choices=["r", "R", "h"])
    p.add_argument("--grid", default="0.5,1,2,4", help="comma list or lo:hi:n")
    p.add_argument("--asymptotics", action="store_true", help="reproduce the asymptotic tables")
    p.add_argument("--geometric", action="store_true", help="also evaluate from the mesh")
    common(p, tol=False)
    p.set_defaults(func=cmd_torus_sweep)

    p = sub.add_parser("scaling", help="time and residual against vertex count")
    p.add_argument("--vertices", default="8:14", help="lo:hi or comma list")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--rescale", default="1:4")
    common(p, tol=False)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("example", help="build a canonical polyhedron and report its fixtures")
    p.add_argument("name", choices=["pancake", "tetrahedron", "pyramid", "double_pyramid", "cube", "torus"])
    p.add_argument("--h", type=float)
    p.add_argument("--z", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--R", type=float, default=2.0)
    p.add_argument("--out", help="write the mesh file here")
    p.set_defaults(func=cmd_example)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IsingZerosError, OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
