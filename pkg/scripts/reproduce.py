"""Regenerate every result table into one directory.

Writes the zero campaigns (11 and 13 vertices, with manifests), the
perturbation scan, both sign searches, the torus sweeps and asymptotic
tables, and a small scaling study. Run time is under a minute on one core.
"""

import argparse
from pathlib import Path

import numpy as np

from isingzeros.canonical import CanonicalSpec, build_canonical
from isingzeros.experiments import (
    TORUS_ASYMPTOTICS,
    CampaignConfig,
    run_perturbation_scan,
    run_scaling_study,
    run_sign_search,
    run_torus_sweep,
    run_zero_campaign,
    torus_rows_csv,
)
from isingzeros.fixtures import nine_vertex_nonconvex, six_vertex_two_concave


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for n in (11, 13):
        res = run_zero_campaign(
            CampaignConfig(n_vertices=n, seed=args.seed, output_path=str(out / f"campaign_v{n}.csv")),
            workers=args.workers,
        )
        worst = max(r.normalized for r in res.accepted_rows)
        print(f"campaign v{n}: {len(res.rows)} meshes, rejection {res.rejection_rate:.2f}, max normalized {worst:.2e}")

    scan = run_perturbation_scan(nine_vertex_nonconvex(), np.logspace(-6, -1, 11), seed=args.seed)
    lines = ["amplitude,abs,normalized"] + [f"{a!r},{v!r},{w!r}" for a, v, w in scan.rows()]
    (out / "perturbation.csv").write_text("\n".join(lines) + "\n")
    print(f"perturbation: slope {scan.slope:.3f}, R^2 {scan.r_squared:.4f}")

    for name, mesh in (
        ("six", six_vertex_two_concave()),
        ("double_pyramid", build_canonical(CanonicalSpec.double_pyramid(1.0, 3.0))),
    ):
        res = run_sign_search(mesh)
        lines = ["edge,geometric_sign," + ",".join(f"min{k}" for k in range(len(res.best_configs)))]
        for k, edge in enumerate(res.edges):
            lines.append(f"{edge[0]}-{edge[1]},{res.geometric_signs[k]}," + ",".join(str(c[k]) for c in res.best_configs))
        (out / f"signsearch_{name}.csv").write_text("\n".join(lines) + "\n")
        print(f"sign search {name}: {len(res.best_configs)} minimizers, matches geometry {res.matches_geometry}")

    sweeps = {"r": np.linspace(0.05, 1.95, 39), "R": np.linspace(1.05, 10, 40), "h": np.linspace(0.05, 10, 40)}
    for param, grid in sweeps.items():
        (out / f"torus_{param}.csv").write_text(torus_rows_csv(run_torus_sweep(param, grid)))
    for param, table in TORUS_ASYMPTOTICS.items():
        rows = run_torus_sweep(param, [v for v, _ in table])
        (out / f"torus_asymptotic_{param}.csv").write_text(torus_rows_csv(rows))
    print("torus sweeps written")

    study = run_scaling_study(range(8, 15), seeds=range(3))
    (out / "scaling.csv").write_text(study.to_csv())
    print(f"scaling: log(seconds) slope {study.time_slope:.2f} per vertex, R^2 {study.time_r_squared:.3f}")


if __name__ == "__main__":
    main()
