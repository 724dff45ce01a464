import json
import math
import statistics
from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leotco.capacity import area_capacity
from leotco.economics import AssetCost, allocate_per_satellite
from leotco.engine import (
    METRICS,
    ConstellationDesign,
    SimulationRequest,
    SimulationSummary,
    run_monte_carlo,
    summarize,
    sweep_constellation_size,
    sweep_subscriber_density,
)
from leotco.errors import ConfigurationError, InvalidInputError
from leotco.link_budget import ShadowingModel

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def request_starlink(starlink, dvbs2):
    return SimulationRequest(starlink.design, dvbs2, satellite_count_override=1000, iterations=100, master_seed=42)


# -- summarize ---------------------------------------------------------------

def test_summarize_examples():
    assert summarize([5, 5, 5]) == (5, 0, 0)
    mean, std, ci = summarize([1, 2, 3, 4, 5])
    assert mean == 3
    assert std == pytest.approx(statistics.stdev([1, 2, 3, 4, 5]))
    assert std == pytest.approx(1.5811, abs=1e-4)
    assert ci == pytest.approx(1.386, abs=1e-3)
    assert summarize([7.25], 0.5) == (7.25, 0, 0)
    with pytest.raises(InvalidInputError):
        summarize([])


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=200))
def test_summarize_matches_statistics(xs):
    mean, std, ci = summarize(xs)
    assert mean == pytest.approx(statistics.fmean(xs), rel=1e-9, abs=1e-6)
    assert std == pytest.approx(statistics.stdev(xs), rel=1e-6, abs=1e-6)
    assert ci == pytest.approx(1.96 * std / math.sqrt(len(xs)), rel=1e-4)


# -- run_monte_carlo -----------------------------------------------------------

def test_single_iteration(request_starlink):
    res = run_monte_carlo(replace(request_starlink, iterations=1))
    d = res.draws[0]
    for name in METRICS:
        m = res.summary.metrics[name]
        assert m.mean == d.metric(name)
        assert m.std == 0 and m.ci95_halfwidth == 0


def test_starlink_fspl_at_1000(request_starlink):
    s = run_monte_carlo(request_starlink).summary
    assert 171.9 <= s.mean("fspl_db") <= 172.9
    assert s.deterministic_fspl_db == pytest.approx(171.4, abs=0.05)
    assert s.coverage_area_km2 == pytest.approx(510_072)


def test_draw_invariants(request_starlink):
    res = run_monte_carlo(request_starlink)
    cov = res.summary.coverage_area_km2
    for d in res.draws:
        assert d.link.cnr_db == d.link.reconstructed_cnr()
        assert d.area_capacity_mbps_km2 * cov == pytest.approx(d.channel_capacity_mbps, rel=1e-9)
    assert [d.iteration for d in res.draws] == list(range(100))


def test_summary_ci_invariant(request_starlink):
    s = run_monte_carlo(request_starlink).summary
    for m in s.metrics.values():
        assert m.ci95_halfwidth == pytest.approx(1.96 * m.std / math.sqrt(100), rel=1e-4)
        assert math.isfinite(m.mean)


def test_deterministic_and_worker_independent(request_starlink):
    a = run_monte_carlo(request_starlink, workers=1)
    b = run_monte_carlo(request_starlink, workers=1)
    c = run_monte_carlo(request_starlink, workers=3)
    assert a == b == c


def test_seed_changes_draws(request_starlink):
    a = run_monte_carlo(request_starlink).draws
    b = run_monte_carlo(replace(request_starlink, master_seed=43)).draws
    assert a != b


def test_iterations_are_prefix_stable(request_starlink):
    short = run_monte_carlo(replace(request_starlink, iterations=10)).draws
    long = run_monte_carlo(replace(request_starlink, iterations=40)).draws
    assert long[:10] == short


def test_ci_shrinks_with_iterations_light_tail(request_starlink):
    # near-normal shadowing: the 1/sqrt(n) law holds across seeds
    for seed in range(5):
        req = replace(request_starlink, master_seed=seed, shadowing=ShadowingModel(1.0, 0.1))
        ci100 = run_monte_carlo(req).summary.metrics["fspl_db"].ci95_halfwidth
        ci400 = run_monte_carlo(replace(req, iterations=400)).summary.metrics["fspl_db"].ci95_halfwidth
        assert ci400 == pytest.approx(ci100 / 2, rel=0.2)


def test_outage_gives_zero_capacity(starlink, dvbs2):
    req = SimulationRequest(
        starlink.design, dvbs2, iterations=20, noise=starlink.design.noise_model(other_losses=80.0)
    )
    s = run_monte_carlo(req).summary
    assert s.mean("channel_capacity_mbps") == 0
    assert s.mean("spectral_efficiency") == 0


@pytest.mark.parametrize(
    "kw", [dict(iterations=0), dict(master_seed=-1), dict(master_seed=2**64), dict(satellite_count_override=0)]
)
def test_request_rejects(starlink, dvbs2, kw):
    with pytest.raises(ConfigurationError):
        SimulationRequest(starlink.design, dvbs2, **kw)


def test_design_rejects(starlink):
    data = starlink.design.to_dict()
    for key, bad in [("altitude_km", 0), ("reuse_factor", 0.5), ("channels", 2.5), ("modulation_cap", "7QAM")]:
        with pytest.raises(ConfigurationError):
            ConstellationDesign.from_dict(data | {key: bad})
    missing = dict(data)
    del missing["frequency_ghz"]
    with pytest.raises(ConfigurationError, match="frequency_ghz"):
        ConstellationDesign.from_dict(missing)


# -- sweeps --------------------------------------------------------------------

def test_sweep_size_golden(starlink, dvbs2):
    golden = json.loads((GOLDEN / "sweep_size_starlink_seed42.json").read_text())
    req = SimulationRequest(starlink.design, dvbs2, iterations=100, master_seed=42)
    out = sweep_constellation_size(req, [g["satellite_count"] for g in golden])
    for s, g in zip(out, golden):
        assert s.mean("fspl_db") == g["fspl_db_mean"]
        assert s.mean("area_capacity_mbps_km2") == g["area_capacity_mbps_km2_mean"]


def test_sweep_size_monotone(starlink, dvbs2):
    req = SimulationRequest(starlink.design, dvbs2, iterations=50, master_seed=3)
    out = sweep_constellation_size(req, list(range(60, 1001, 60)))
    fspl = [s.mean("fspl_db") for s in out]
    cov = [s.coverage_area_km2 for s in out]
    ac = [s.mean("area_capacity_mbps_km2") for s in out]
    assert all(b < a for a, b in zip(fspl, fspl[1:]))
    assert all(b < a for a, b in zip(cov, cov[1:]))
    assert all(b > a for a, b in zip(ac, ac[1:]))


def test_sweep_singleton_matches_run(request_starlink):
    (s,) = sweep_constellation_size(replace(request_starlink, satellite_count_override=None), [1000])
    assert s == run_monte_carlo(request_starlink).summary
    with pytest.raises(InvalidInputError):
        sweep_constellation_size(request_starlink, [])


def test_sweep_size_oneweb_coverage(oneweb, dvbs2):
    (s,) = sweep_constellation_size(SimulationRequest(oneweb.design, dvbs2, iterations=5), [720])
    assert s.coverage_area_km2 == pytest.approx(708_433, abs=0.5)


def test_pinned_summary(starlink):
    s = SimulationSummary.pinned(starlink.design, 11_720)
    assert s.area_capacity == pytest.approx(area_capacity(11_720, 510_072_000 / 5000))
    assert s.satellite_count == 5000
    assert s.metrics["spectral_efficiency"].mean == pytest.approx(2.93)


def test_sweep_density_examples(starlink, kuiper):
    asset = allocate_per_satellite(starlink.cost_book, 5000)
    (r,) = sweep_subscriber_density(SimulationSummary.pinned(starlink.design, 11_720), asset, [0.1], 20)
    assert r.capacity_per_user == pytest.approx(22.98, abs=0.01)
    assert r.capacity_per_user == pytest.approx(24.94, rel=0.10)
    (r,) = sweep_subscriber_density(SimulationSummary.pinned(kuiper.design, 7_530), asset, [5.0], 20)
    assert r.capacity_per_user == pytest.approx(0.19, abs=0.005)
    assert r.capacity_per_user == pytest.approx(0.21, rel=0.15)


@settings(max_examples=30)
@given(st.floats(1e-3, 100))
def test_sweep_density_no_contention(d):
    design = ConstellationDesign("x", 100, 500, 12, 250, 4, 1, 60, 30, 290, 30, 0.5, 100)
    s = SimulationSummary.pinned(design, 1000)
    (r,) = sweep_subscriber_density(s, AssetCost(1, 0.1, 1.5), [d], overbooking_factor=1)
    assert r.capacity_per_user == pytest.approx(s.area_capacity / d, rel=1e-12)


def test_sweep_density_rejects_nonpositive(starlink):
    s = SimulationSummary.pinned(starlink.design, 11_720)
    with pytest.raises(InvalidInputError):
        sweep_subscriber_density(s, AssetCost(1, 0, 1), [0.0])
