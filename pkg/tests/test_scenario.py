import json
import math

import numpy as np
import pytest

from stncg.scenario import (
    DemandModel,
    Scenario,
    ScenarioError,
    derive_compute_capacity,
    generate_demands,
    load_scenario,
    reference_scenario,
    scenario_to_dict,
    standard_normals,
)

REFERENCE_DOC = {
    "topology": {"walker_star": {"planes": 6, "sats_per_plane": 5, "gateway_phase": 0}},
    "demands": {"mean": 20, "sigma": 1.3, "seed": 7},
    "capacities": {"isl": 5, "sgl": 1, "cycles_per_sec": 1e9, "processing_density": 1e8},
    "weights": [0.6, 0.3, 0.1],
    "hops": [5, 5],
}


@pytest.mark.parametrize(
    "cycles,density,slot,expected",
    [(1e9, 1e8, 1.0, 10.0), (3.7e9, 3.7e9, 1.0, 1.0), (2e9, 1e8, 0.5, 10.0)],
)
def test_compute_capacity(cycles, density, slot, expected):
    assert derive_compute_capacity(cycles, density, slot) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("bad", [(0, 1), (1, 0), (-1, 1)])
def test_compute_capacity_rejects_nonpositive(bad):
    with pytest.raises(ScenarioError):
        derive_compute_capacity(*bad)


def test_zero_sigma_gives_the_mean():
    d = generate_demands(DemandModel(20.0, 0.0, seed=3), 50)
    assert np.all(d == 20.0)


def test_large_sample_mean():
    d = generate_demands(DemandModel(20.0, 1.3, seed=11), 1_000_000)
    assert abs(d.mean() - 20.0) / 20.0 < 0.02


def test_same_seed_same_stream():
    m = DemandModel(20.0, 1.3, seed=42)
    assert np.array_equal(generate_demands(m, 30), generate_demands(m, 30))
    assert not np.array_equal(generate_demands(m, 30), generate_demands(DemandModel(20.0, 1.3, seed=43), 30))


def test_stream_prefix_is_stable():
    # odd and even lengths share the same prefix
    assert np.array_equal(standard_normals(5, 7), standard_normals(5, 8)[:7])


def test_stream_matches_documented_recipe():
    words = np.random.Philox(9).random_raw(4)
    u = [((int(w) >> 11) + 0.5) * 2.0**-53 for w in words]
    r = math.sqrt(-2 * math.log(u[0]))
    z0 = r * math.cos(2 * math.pi * u[1])
    z1 = r * math.sin(2 * math.pi * u[1])
    got = standard_normals(9, 3)
    assert got[0] == pytest.approx(z0, abs=1e-15)
    assert got[1] == pytest.approx(z1, abs=1e-15)


def test_normal_stream_moments():
    z = standard_normals(1, 200_000)
    assert abs(z.mean()) < 0.01
    assert abs(z.std() - 1) < 0.01


def test_absolute_sigma_mode():
    m = DemandModel(20.0, 1.3, seed=1, sigma_mode="absolute")
    d = generate_demands(m, 400_000)
    assert d.std() == pytest.approx(1.3, rel=0.02)
    assert d.mean() == pytest.approx(20.0, rel=0.01)


def test_gb_unit_scales_by_eight():
    gbit = generate_demands(DemandModel(20.0, 1.3, seed=2), 10)
    gb = generate_demands(DemandModel(20.0, 1.3, seed=2, unit="GB"), 10)
    assert np.allclose(gb, 8 * gbit)


@pytest.mark.parametrize("kw", [dict(mean=0, sigma=1), dict(mean=1, sigma=-1), dict(mean=1, sigma=1, unit="TB")])
def test_bad_demand_model(kw):
    with pytest.raises(ScenarioError):
        DemandModel(**kw)


def test_load_table1_document():
    sc = load_scenario(REFERENCE_DOC)
    isl = {e.capacity for e in sc.topology.isl_edges}
    sgl = {e.capacity for e in sc.topology.sgl_edges}
    assert isl == {5.0} and sgl == {1.0}
    assert set(sc.compute_capacity) == {10.0}
    assert sc.weights == (0.6, 0.3, 0.1)
    assert sc.slot_duration == 1.0
    assert sc.hops == (5, 5)


def test_slot_duration_scales_rates():
    sc = load_scenario({**REFERENCE_DOC, "slot_duration": 2.0})
    assert {e.capacity for e in sc.topology.isl_edges} == {10.0}
    assert set(sc.compute_capacity) == {20.0}


def test_negative_demand_rejected():
    doc = {**REFERENCE_DOC, "demands": [-1.0] + [1.0] * 29}
    with pytest.raises(ScenarioError):
        load_scenario(doc)


def test_wrong_demand_count_rejected():
    with pytest.raises(ScenarioError):
        load_scenario({**REFERENCE_DOC, "demands": [1.0] * 5})


def test_unit_mismatch_rejected():
    with pytest.raises(ScenarioError):
        load_scenario({**REFERENCE_DOC, "demands": [1.0] * 30, "demand_unit": "MiB"})


def test_gb_list_converted():
    sc = load_scenario({**REFERENCE_DOC, "demands": [1.0] * 30, "demand_unit": "GB"})
    assert set(sc.demands) == {8.0}


def test_unknown_topology_reference(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario({**REFERENCE_DOC, "topology": {"file": str(tmp_path / "nope.json")}})


def test_topology_file_reference(tmp_path, ref_topology):
    (tmp_path / "topo.json").write_text(ref_topology.to_json())
    doc = {**REFERENCE_DOC, "topology": {"file": "topo.json"}}
    (tmp_path / "sc.json").write_text(json.dumps(doc))
    sc = load_scenario(tmp_path / "sc.json")
    assert sc.topology == ref_topology


def test_round_trip():
    sc = load_scenario(REFERENCE_DOC)
    doc = json.loads(json.dumps(scenario_to_dict(sc)))
    assert load_scenario(doc) == sc
    ref = reference_scenario(seed=4, hops=(2, 3))
    assert load_scenario(scenario_to_dict(ref)) == ref


def test_scenario_invariants(ref_topology):
    n = ref_topology.n_satellites
    with pytest.raises(ScenarioError):
        Scenario(ref_topology, (1.0,) * n, (0.0,) * n)
    with pytest.raises(ScenarioError):
        Scenario(ref_topology, (1.0,) * n, (1.0,) * n, hops=(-1, 2))
    with pytest.raises(ScenarioError):
        Scenario(ref_topology, (1.0,) * n, (1.0,) * n, weights=(0.6, -0.3, 0.1))
