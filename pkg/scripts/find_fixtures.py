"""Search seeds for the stored non-convex fixtures and print their coordinates.

The 6-vertex fixture is the first rescaled sphere mesh with exactly two
concave edges whose sign search has exactly two zero configurations; the
9-vertex fixture is the first rescaled mesh with at least two concave edges.
"""

import argparse

import numpy as np

from isingzeros.experiments import run_sign_search
from isingzeros.geometry import edge_records
from isingzeros.meshgen import RescaleConfig, SamplerConfig, random_mesh, validate_closed


def concave_count(mesh):
    return sum(r.convexity_sign < 0 for r in edge_records(mesh))


def search(n_vertices, want, start, sign_search):
    for seed in range(start, start + 10_000):
        mesh = random_mesh(SamplerConfig(n_vertices, seed=seed), RescaleConfig((1.0, 4.0), seed + 1))
        if not validate_closed(mesh).accepted or not want(concave_count(mesh)):
            continue
        if sign_search and run_sign_search(mesh).n_zero != 2:
            continue
        return seed, mesh
    raise RuntimeError("no fixture found")


def dump(label, seed, mesh):
    print(f"# {label}: sample seed {seed}, rescale seed {seed + 1}, concave edges {concave_count(mesh)}")
    print("vertices = " + np.array2string(mesh.vertices, precision=17, separator=", ", max_line_width=120))
    print(f"faces = {list(mesh.faces)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=int, default=0)
    args = ap.parse_args()
    dump("six", *search(6, lambda c: c == 2, args.start, True))
    dump("nine", *search(9, lambda c: c >= 2, args.start, False))


if __name__ == "__main__":
    main()
