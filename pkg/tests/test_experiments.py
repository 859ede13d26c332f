import math

import numpy as np
import pytest

from isingzeros.canonical import CanonicalSpec, build_canonical
from isingzeros.errors import InvalidParameters, SignSpaceTooLarge
from isingzeros.experiments import (
    BATCH_HEADER,
    CampaignConfig,
    campaign_jobs,
    run_perturbation_scan,
    run_scaling_study,
    run_sign_search,
    run_torus_sweep,
    run_zero_campaign,
    torus_value,
)
from isingzeros.fixtures import nine_vertex_nonconvex, six_vertex_two_concave
from isingzeros.graph import build_dual
from isingzeros.ising import geometric_couplings, loop_polynomial
from isingzeros.meshgen import RescaleConfig, SamplerConfig, random_mesh, validate_closed

SMALL = dict(n_meshes=2, n_vertices=9, rescalings_per_mesh=2, seed=123)


def test_campaign_rows_and_csv():
    res = run_zero_campaign(CampaignConfig(**SMALL))
    assert len(res.rows) == 6 and not res.failures()
    assert res.to_csv().splitlines()[0].startswith(",".join(BATCH_HEADER))
    for row in res.rows:
        assert row.normalized <= 1e-9 and row.oracle_diff <= 1e-10
        assert math.isfinite(row.regge)
    convex = [r for r in res.rows if r.mesh_id.endswith("convex")]
    assert all(r.convex and r.concave_edges == 0 for r in convex)
    assert any(not r.convex for r in res.rows)


def test_campaign_deterministic_across_workers(tmp_path):
    a = run_zero_campaign(CampaignConfig(**SMALL, output_path=str(tmp_path / "a.csv")), workers=1)
    b = run_zero_campaign(CampaignConfig(**SMALL, output_path=str(tmp_path / "b.csv")), workers=3)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.manifest.json").exists()
    assert a.manifest()["meshes"] == b.manifest()["meshes"]


def test_manifest_replays_meshes():
    cfg = CampaignConfig(**SMALL)
    for job in campaign_jobs(cfg)[:3]:
        m1, m2 = job.build(), job.build()
        assert np.array_equal(m1.vertices, m2.vertices) and m1.faces == m2.faces


def test_campaign_timing_opt_in():
    res = run_zero_campaign(CampaignConfig(**{**SMALL, "rescalings_per_mesh": 0}, include_timing=True))
    seconds = [line.split(",")[8] for line in res.to_csv().splitlines()[1:]]
    assert all(float(s) >= 0 for s in seconds)


def test_campaign_config_validation():
    with pytest.raises(InvalidParameters):
        CampaignConfig(tolerance=0.0)
    with pytest.raises(InvalidParameters):
        CampaignConfig(n_meshes=0)


# --- perturbation -----------------------------------------------------------------


def test_perturbation_zero_amplitude_is_unperturbed():
    mesh = nine_vertex_nonconvex()
    g, rec = build_dual(mesh)
    base = loop_polynomial(g, geometric_couplings(g, rec))
    scan = run_perturbation_scan(mesh, [0.0, 1e-4])
    assert scan.absolute[0] == base.absolute


def test_perturbation_doubling_ratio():
    scan = run_perturbation_scan(nine_vertex_nonconvex(), [1e-5, 2e-5], seed=3)
    assert scan.absolute[1] / scan.absolute[0] == pytest.approx(2.0, rel=0.3)


def test_perturbation_slope_on_double_pyramid():
    amps = [10.0**k for k in range(-6, 0)]
    scan = run_perturbation_scan(build_canonical(CanonicalSpec.double_pyramid(1.0, 3.0)), amps, seed=1)
    assert 0.8 <= scan.slope <= 1.2


def test_perturbation_rejects_bad_amplitudes():
    with pytest.raises(InvalidParameters):
        run_perturbation_scan(nine_vertex_nonconvex(), [1e-2, 1e-3])


# --- sign search ------------------------------------------------------------------


def test_sign_search_convex_mesh():
    res = run_sign_search(random_mesh(SamplerConfig(7, seed=8)))
    n = len(res.geometric_signs)
    assert sorted(res.best_configs) == [(-1,) * n, (1,) * n]
    assert res.closed_under_flip


def test_sign_search_agrees_with_geometry_on_generated_meshes():
    checked = 0
    for seed in range(8):
        mesh = random_mesh(SamplerConfig(7, seed=seed), RescaleConfig((1, 4), seed + 50))
        if not validate_closed(mesh).accepted:
            continue
        res = run_sign_search(mesh)
        assert res.n_zero == 2 and res.matches_geometry
        checked += 1
    assert checked >= 4


def test_rejected_mesh_can_break_the_zero():
    # seed 3: all seven points lie in one hemisphere, so the hull misses the
    # origin and the radial rescaling folds the surface through itself
    mesh = random_mesh(SamplerConfig(7, seed=3), RescaleConfig((1, 4), 53))
    assert not validate_closed(mesh).accepted
    g, rec = build_dual(mesh)
    assert loop_polynomial(g, geometric_couplings(g, rec)).normalized_residual > 1e-3


def test_sign_search_full_table():
    res = run_sign_search(six_vertex_two_concave(), keep_table=True)
    assert res.full_table.shape == (4096,)
    assert res.best_value == res.full_table.min()


def test_sign_search_limit():
    with pytest.raises(SignSpaceTooLarge):
        run_sign_search(six_vertex_two_concave(), max_links=10)


# --- torus ---------------------------------------------------------------------------


def test_torus_sweep_rows():
    rows = run_torus_sweep("r", [1e-2])
    assert rows[0].absolute == pytest.approx(1.87652e-4, rel=1e-3)
    row = torus_value(1, 2, 1, geometric=True)
    assert abs(row.closed_form - row.geometric) < 1e-12
    with pytest.raises(InvalidParameters):
        run_torus_sweep("r", [3.0])
    with pytest.raises(InvalidParameters):
        run_torus_sweep("q", [1.0])


# --- scaling ---------------------------------------------------------------------------


def test_scaling_study_is_exponential():
    study = run_scaling_study(range(8, 15), seeds=[0, 1, 2], repeats=3)
    times = [p.median_seconds for p in study.points]
    assert all(b >= a for a, b in zip(times, times[1:]))
    assert study.time_r_squared > 0.9
    assert all(p.faces == 2 * p.n_vertices - 4 for p in study.points)
    assert "median_normalized" in study.to_csv()
