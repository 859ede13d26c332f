"""Experiment campaigns: zero verification, perturbation scans, sign searches,
torus sweeps and timing/accuracy scaling.

Tables are plain lists of dataclass rows with CSV writers. Floats are written
with ``repr`` so a re-run with the same manifest reproduces files byte for
byte; wall-clock timings are left out of CSV output unless asked for.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .canonical import CanonicalSpec, build_canonical, p_torus, torus_couplings
from .errors import InvalidParameters, IsingZerosError, SignSpaceTooLarge
from .geometry import regge_action
from .graph import build_dual, even_subgraphs
from .ising import (
    ZERO_TOL,
    coupling_magnitudes,
    geometric_couplings,
    loop_polynomial,
    perturb_couplings,
)
from .mesh import EmbeddedMesh
from .meshgen import RescaleConfig, SamplerConfig, random_mesh, validate_closed

BATCH_HEADER = ["mesh_id", "vertices", "faces", "method", "re", "im", "abs", "normalized", "seconds"]
CAMPAIGN_EXTRA = ["regge", "convex", "concave_edges", "accepted", "oracle_diff", "error"]
MAX_SIGN_LINKS = 24


def _seed_of(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


# --- zero campaign -----------------------------------------------------------


@dataclass
class CampaignConfig:
    n_meshes: int = 10
    n_vertices: int = 11
    rescalings_per_mesh: int = 9
    seed: int = 0
    tolerance: float = ZERO_TOL
    rescale_range: tuple[float, float] = (1.0, 4.0)
    distribution: str = "uniform"
    method: str = "spin_sum"
    oracle: bool = True
    output_path: str | None = None
    include_timing: bool = False

    def __post_init__(self):
        if self.n_meshes < 1 or self.n_vertices < 4 or self.rescalings_per_mesh < 0:
            raise InvalidParameters("campaign counts must be positive")
        if not self.tolerance > 0:
            raise InvalidParameters("tolerance must be positive")
        self.rescale_range = tuple(float(v) for v in self.rescale_range)


@dataclass(frozen=True)
class MeshJob:
    """Everything needed to rebuild one campaign mesh exactly."""

    mesh_id: str
    n_vertices: int
    distribution: str
    sample_seed: int
    rescale_range: tuple[float, float] | None = None
    rescale_seed: int | None = None

    def build(self) -> EmbeddedMesh:
        sampler = SamplerConfig(self.n_vertices, self.distribution, self.sample_seed)
        rescale = None
        if self.rescale_seed is not None:
            rescale = RescaleConfig(tuple(self.rescale_range), self.rescale_seed)
        return random_mesh(sampler, rescale, name=self.mesh_id)


@dataclass
class CampaignRow:
    mesh_id: str
    vertices: int
    faces: int
    method: str
    value: complex = complex("nan")
    normalized: float = math.nan
    seconds: float = 0.0
    regge: float = math.nan
    convex: bool = False
    concave_edges: int = 0
    accepted: bool = False
    oracle_diff: float | None = None
    error: str = ""

    @property
    def absolute(self) -> float:
        return abs(self.value)

    def cells(self, include_timing: bool) -> list[str]:
        base = [
            self.mesh_id,
            self.vertices,
            self.faces,
            self.method,
            self.value.real,
            self.value.imag,
            self.absolute,
            self.normalized,
            self.seconds if include_timing else None,
        ]
        extra = [self.regge, self.convex, self.concave_edges, self.accepted, self.oracle_diff, self.error]
        return [_fmt(x) for x in base + extra]


@dataclass
class CampaignResult:
    config: CampaignConfig
    jobs: list[MeshJob]
    rows: list[CampaignRow]

    @property
    def accepted_rows(self) -> list[CampaignRow]:
        return [r for r in self.rows if r.accepted]

    @property
    def rejection_rate(self) -> float:
        return 1.0 - len(self.accepted_rows) / len(self.rows) if self.rows else 0.0

    def failures(self) -> list[CampaignRow]:
        """Accepted meshes over tolerance, oracle disagreements, or errors."""
        bad = []
        for r in self.rows:
            if r.error:
                bad.append(r)
            elif r.accepted and not r.normalized <= self.config.tolerance:
                bad.append(r)
            elif r.oracle_diff is not None and not r.oracle_diff <= 1e-10:
                bad.append(r)
        return bad

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BATCH_HEADER + CAMPAIGN_EXTRA)
        for r in self.rows:
            w.writerow(r.cells(self.config.include_timing))
        return buf.getvalue()

    def manifest(self) -> dict:
        cfg = asdict(self.config)
        cfg["rescale_range"] = list(cfg["rescale_range"])
        return {"config": cfg, "generator": "numpy PCG64 (default_rng)", "meshes": [asdict(j) for j in self.jobs]}

    def write(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv())
        path.with_suffix(".manifest.json").write_text(json.dumps(self.manifest(), indent=2) + "\n")


def campaign_jobs(config: CampaignConfig) -> list[MeshJob]:
    """Per seed: one convex mesh followed by its radial rescalings."""
    root = np.random.SeedSequence(config.seed)
    jobs = []
    for k, child in enumerate(root.spawn(config.n_meshes)):
        sample_seq, *rescale_seqs = child.spawn(1 + config.rescalings_per_mesh)
        sample_seed = _seed_of(sample_seq)
        base = f"v{config.n_vertices}-s{k:03d}"
        jobs.append(MeshJob(f"{base}-convex", config.n_vertices, config.distribution, sample_seed))
        for j, seq in enumerate(rescale_seqs):
            jobs.append(
                MeshJob(
                    f"{base}-r{j + 1}",
                    config.n_vertices,
                    config.distribution,
                    sample_seed,
                    config.rescale_range,
                    _seed_of(seq),
                )
            )
    return jobs


def evaluate_mesh(mesh: EmbeddedMesh, method: str = "spin_sum", oracle: bool = True, mesh_id: str = "") -> CampaignRow:
    """Geometric couplings of a mesh, evaluated and cross-checked."""
    row = CampaignRow(mesh_id or mesh.name, mesh.n_vertices, mesh.n_faces, method)
    try:
        row.accepted = validate_closed(mesh).accepted
        graph, records = build_dual(mesh)
        Y = geometric_couplings(graph, records)
        ev = loop_polynomial(graph, Y, method=method)
        row.value, row.normalized, row.seconds = ev.value, ev.normalized_residual, ev.elapsed
        row.regge = regge_action(mesh, records)
        row.concave_edges = sum(r.convexity_sign < 0 for r in records)
        row.convex = row.concave_edges == 0
        if oracle:
            other = "even_subgraph" if ev.method == "spin_sum" else "spin_sum"
            ref = loop_polynomial(graph, Y, method=other)
            row.oracle_diff = abs(ev.value - ref.value) / max(ev.magnitude_scale, ref.magnitude_scale)
    except IsingZerosError as exc:
        row.accepted = False
        row.error = f"{type(exc).__name__}: {exc}".replace("\n", " ")
    return row


def run_zero_campaign(
    config: CampaignConfig,
    workers: int = 1,
    progress: Callable[[CampaignRow], None] | None = None,
) -> CampaignResult:
    jobs = campaign_jobs(config)

    def work(job: MeshJob) -> CampaignRow:
        try:
            mesh = job.build()
        except IsingZerosError as exc:
            return CampaignRow(job.mesh_id, job.n_vertices, 0, config.method, error=f"{type(exc).__name__}: {exc}")
        return evaluate_mesh(mesh, config.method, config.oracle, job.mesh_id)

    rows = []
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            for row in pool.map(work, jobs):
                rows.append(row)
                if progress:
                    progress(row)
    else:
        for job in jobs:
            row = work(job)
            rows.append(row)
            if progress:
                progress(row)
    result = CampaignResult(config, jobs, rows)
    if config.output_path:
        result.write(config.output_path)
    return result


# --- perturbation scan -------------------------------------------------------


def loglog_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line through (log x, log y): (slope, intercept, R^2)."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    return _linear_fit(lx, ly)


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


@dataclass
class PerturbationScan:
    amplitudes: list[float]
    absolute: list[float]
    normalized: list[float]
    slope: float
    intercept: float
    r_squared: float

    def rows(self):
        return list(zip(self.amplitudes, self.absolute, self.normalized))


def run_perturbation_scan(mesh: EmbeddedMesh, amplitudes: Sequence[float], seed: int = 0, method: str = "auto") -> PerturbationScan:
    """|P| at Y0 + a u, with one fixed random direction u in [-1, 1]^E.

    Sharing the direction across amplitudes makes the scan a ray, so the
    log-log slope isolates the order of the zero.
    """
    amps = [float(a) for a in amplitudes]
    if any(a < 0 for a in amps) or amps != sorted(amps):
        raise InvalidParameters("amplitudes must be non-negative and ascending")
    graph, records = build_dual(mesh)
    Y0 = geometric_couplings(graph, records)
    direction = perturb_couplings(np.zeros_like(Y0), 1.0, seed).real
    absolute, normalized = [], []
    for a in amps:
        ev = loop_polynomial(graph, Y0 + a * direction, method=method)
        absolute.append(ev.absolute)
        normalized.append(ev.normalized_residual)
    fit_a = [a for a, v in zip(amps, absolute) if a > 0 and v > 0]
    fit_v = [v for a, v in zip(amps, absolute) if a > 0 and v > 0]
    slope, intercept, r2 = loglog_fit(fit_a, fit_v) if len(fit_a) >= 2 else (math.nan, math.nan, math.nan)
    return PerturbationScan(amps, absolute, normalized, slope, intercept, r2)


# --- sign search -------------------------------------------------------------


@dataclass
class SignSearchResult:
    best_configs: list[tuple[int, ...]]
    best_value: float
    geometric_signs: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    n_zero: int
    full_table: np.ndarray | None = None

    @property
    def matches_geometry(self) -> bool:
        g = self.geometric_signs
        flipped = tuple(-s for s in g)
        return sorted(self.best_configs) == sorted({g, flipped})

    @property
    def closed_under_flip(self) -> bool:
        cfgs = set(self.best_configs)
        return all(tuple(-s for s in c) in cfgs for c in cfgs)


def _config_signs(index: int, n_links: int) -> tuple[int, ...]:
    return tuple(-1 if (index >> l) & 1 else 1 for l in range(n_links))


def run_sign_search(
    mesh: EmbeddedMesh,
    max_links: int = MAX_SIGN_LINKS,
    tolerance: float = ZERO_TOL,
    keep_table: bool = False,
) -> SignSearchResult:
    """|P| for every assignment of phase signs exp(+-i theta_l / 2) to the links.

    The minimizers are the sign vectors whose normalized residual is at
    most ``tolerance``; if there are none, the exact argmin set is returned.
    """
    graph, records = build_dual(mesh)
    n = graph.link_count
    if n > max_links:
        raise SignSpaceTooLarge(f"{n} links exceeds the sign-search limit {max_links}")
    mags = coupling_magnitudes(records)
    theta = np.array([r.dihedral_angle for r in records])
    y_plus = mags * np.exp(0.5j * theta)
    y_minus = mags * np.exp(-0.5j * theta)
    monomials = even_subgraphs(graph)
    gptr = np.zeros(len(monomials) + 1, dtype=np.int64)
    glinks: list[int] = []
    for k, mono in enumerate(monomials):
        glinks.extend(sorted(mono))
        gptr[k + 1] = len(glinks)
    absval, scale = _kernels.sign_table(n, gptr, np.array(glinks, dtype=np.int64), y_plus, y_minus)
    normalized = absval / scale
    zeros = np.flatnonzero(normalized <= tolerance)
    best = zeros if len(zeros) else np.flatnonzero(absval == absval.min())
    return SignSearchResult(
        best_configs=[_config_signs(int(c), n) for c in best],
        best_value=float(absval[best].min()),
        geometric_signs=tuple(r.convexity_sign for r in records),
        edges=tuple(r.vertex_pair for r in records),
        n_zero=len(zeros),
        full_table=absval if keep_table else None,
    )


# --- torus -------------------------------------------------------------------

TORUS_BASE = {"r": 1.0, "R": 2.0, "h": 1.0}

# |P_torus| asymptotics: parameter -> [(value, |P|)] with the others at TORUS_BASE
TORUS_ASYMPTOTICS = {
    "r": [(1e-1, 1.15107e-2), (1e-2, 1.87652e-4), (1e-3, 1.96812e-6), (1e-4, 1.97749e-8)],
    "R": [(1e2, 1.90415e-3), (1e3, 1.98433e-4), (1e4, 1.99279e-5), (1e5, 1.99355e-6)],
    "h": [(1e2, 7.3781e-5), (1e3, 7.91509e-7), (1e4, 7.97082e-9), (1e5, 7.97643e-11)],
}


@dataclass
class TorusRow:
    r: float
    R: float
    h: float
    closed_form: complex
    geometric: complex | None = None

    @property
    def absolute(self) -> float:
        return abs(self.closed_form)


def torus_value(r: float, R: float, h: float, geometric: bool = False) -> TorusRow:
    """Closed-form P_torus at the geometric couplings, optionally re-derived
    from the constructed mesh and the generic evaluator."""
    spec = CanonicalSpec.torus(r, R, h)
    c = torus_couplings(r, R, h)
    row = TorusRow(r, R, h, complex(p_torus(c["Y"], c["hi"], c["he"], c["vi"], c["ve"])))
    if geometric:
        graph, records = build_dual(build_canonical(spec))
        row.geometric = loop_polynomial(graph, geometric_couplings(graph, records), method="spin_sum").value
    return row


def run_torus_sweep(parameter: str, grid: Sequence[float], base: dict | None = None, geometric: bool = False) -> list[TorusRow]:
    if parameter not in ("r", "R", "h"):
        raise InvalidParameters("sweep parameter must be r, R or h")
    params = dict(TORUS_BASE if base is None else base)
    rows = []
    for v in grid:
        params[parameter] = float(v)
        if not (0 < params["r"] < params["R"] and params["h"] > 0):
            raise InvalidParameters(f"invalid torus parameters {params}")
        rows.append(torus_value(params["r"], params["R"], params["h"], geometric))
    return rows


def torus_rows_csv(rows: Sequence[TorusRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "R", "h", "re", "im", "abs", "geometric_re", "geometric_im"])
    for t in rows:
        g = t.geometric
        w.writerow(
            [_fmt(x) for x in (t.r, t.R, t.h, t.closed_form.real, t.closed_form.imag, t.absolute)]
            + [_fmt(None if g is None else g.real), _fmt(None if g is None else g.imag)]
        )
    return buf.getvalue()


# --- scaling study -------------------------------------------------------------


@dataclass
class ScalingPoint:
    n_vertices: int
    faces: int
    median_normalized: float
    median_seconds: float
    residuals: list[float] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)


@dataclass
class ScalingStudy:
    points: list[ScalingPoint]
    time_slope: float
    time_intercept: float
    time_r_squared: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertices", "faces", "median_normalized", "median_seconds"])
        for p in self.points:
            w.writerow([p.n_vertices, p.faces, _fmt(p.median_normalized), f"{p.median_seconds:.6g}"])
        return buf.getvalue()


def run_scaling_study(
    vertex_counts: Sequence[int],
    seeds: Sequence[int],
    rescale_range: tuple[float, float] | None = (1.0, 4.0),
    method: str = "spin_sum",
    repeats: int = 1,
) -> ScalingStudy:
    """Median residual and evaluation time per vertex count.

    Time is the best of ``repeats`` runs per mesh; the fit is
    log(seconds) = slope * n + intercept.
    """
    # compile the kernels once so the first point does not time the JIT
    warm = random_mesh(SamplerConfig(6, seed=0))
    graph, records = build_dual(warm)
    loop_polynomial(graph, geometric_couplings(graph, records), method=method)
    points = []
    for n in vertex_counts:
        residuals, seconds = [], []
        faces = 2 * n - 4
        for s in seeds:
            rescale = RescaleConfig(rescale_range, s + 1) if rescale_range else None
            mesh = random_mesh(SamplerConfig(n, seed=s), rescale)
            graph, records = build_dual(mesh)
            Y = geometric_couplings(graph, records)
            best = math.inf
            for _ in range(repeats):
                t0 = time.perf_counter()
                ev = loop_polynomial(graph, Y, method=method)
                best = min(best, time.perf_counter() - t0)
            residuals.append(ev.normalized_residual)
            seconds.append(best)
        points.append(
            ScalingPoint(n, faces, float(np.median(residuals)), float(np.median(seconds)), residuals, seconds)
        )
    if len(points) >= 2:
        slope, intercept, r2 = _linear_fit(
            np.array([p.n_vertices for p in points], dtype=float), np.log([p.median_seconds for p in points])
        )
    else:
        slope = intercept = r2 = math.nan
    return ScalingStudy(points, slope, intercept, r2)
