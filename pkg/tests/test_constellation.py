import json
from dataclasses import replace

import pytest

from stncg.constellation import (
    GROUND,
    LinkKind,
    Topology,
    TopologyError,
    build_topology,
    build_walker_star,
    make_edge,
    neighbors,
    validate_topology,
)


def test_reference_counts(ref_topology):
    assert ref_topology.n_satellites == 30
    assert len(ref_topology.gateways) == 6
    # 4-regular torus: 30 * 4 / 2
    assert len(ref_topology.isl_edges) == 60
    assert len(ref_topology.sgl_edges) == 6


@pytest.mark.parametrize("planes,k", [(3, 3), (4, 7), (6, 5), (8, 3)])
def test_torus_is_four_regular(planes, k):
    topo = build_walker_star(planes, k, 0, True, 5, 1)
    assert len(topo.isl_edges) == 2 * planes * k
    for s in topo.satellites:
        assert len(topo.isl_neighbors[s]) == 4
    assert validate_topology(topo) == []


def test_grid_neighbours_follow_plane_and_slot():
    topo = build_walker_star(6, 5)
    # satellite (p=2, k=0) is id 11
    assert topo.isl_neighbors[11] == (6, 12, 15, 16)


def test_open_seam_drops_cross_seam_links():
    topo = build_walker_star(6, 5, seam_wrap=False)
    assert len(topo.isl_edges) == 60 - 5
    assert validate_topology(topo) == []


def test_neighbors_of_satellite_and_ground(ref_topology):
    nb = neighbors(ref_topology, 1)
    assert [n for n, _ in nb] == [0, 2, 5, 6, 26]
    assert nb[0][1].kind is LinkKind.SGL
    plain = [n for n, e in neighbors(ref_topology, 2)]
    assert len(plain) == 4
    assert [n for n, _ in neighbors(ref_topology, GROUND)] == list(ref_topology.gateways)
    with pytest.raises(TopologyError):
        neighbors(ref_topology, 31)


def test_edge_lookup_is_direction_free(ref_topology):
    assert ref_topology.edge(1, 2) is ref_topology.edge(2, 1)
    assert ref_topology.edge(0, 6) is ref_topology.edge(6, 0)
    with pytest.raises(TopologyError):
        ref_topology.edge(1, 3)


def test_deterministic_build():
    a = build_walker_star(6, 5)
    b = build_walker_star(6, 5)
    assert a == b
    assert [e.key for e in a.edges] == [e.key for e in b.edges]


@pytest.mark.parametrize(
    "args",
    [(2, 5), (6, 2), (6, 5, 5), (6, 5, -1)],
)
def test_bad_dimensions(args):
    with pytest.raises(TopologyError):
        build_walker_star(*args)


def test_validation_flags_sgl_between_satellites(ref_topology):
    bad = replace(
        ref_topology,
        edges=ref_topology.edges[:-1] + (make_edge(1, 3, LinkKind.SGL, 1.0),),
    )
    report = validate_topology(bad)
    assert any("SGL endpoint must be ground" in r for r in report)


def test_validation_flags_disconnected_isls():
    topo = build_topology(4, [(1, 2), (3, 4)], gateways=(1,))
    assert "ISL graph connected" in validate_topology(topo)


def test_validation_flags_gateway_mismatch(ref_topology):
    bad = replace(ref_topology, gateways=ref_topology.gateways[:-1])
    assert any("gateways" in r for r in validate_topology(bad))


def test_json_round_trip(ref_topology):
    doc = json.loads(ref_topology.to_json())
    assert len(doc["edges"]) == 66
    back = Topology.from_dict(doc)
    assert back == ref_topology
