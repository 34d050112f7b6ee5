import numpy as np
import pytest

from stncg.constellation import build_walker_star
from stncg.master import ColumnPool, DualPrices, MasterError, RowLayout, add_columns, build_rmp, solve_rmp
from stncg.routing import RouteError, enumerate_routes, ground, intersat
from stncg.scenario import reference_scenario


def test_empty_pool_shape(ref_scenario):
    prob = build_rmp(ref_scenario, [])
    topo = ref_scenario.topology
    assert prob.n_cols == 30
    assert prob.n_rows == len(topo.isl_edges) + len(topo.sgl_edges) + 2 * 30 == 60 + 6 + 60


def test_full_duplex_doubles_isl_rows():
    topo = build_walker_star(6, 5, duplex_mode="full-duplex")
    sc = reference_scenario(topology=topo)
    assert build_rmp(sc, []).n_rows == 120 + 6 + 60


def test_route_column_rows(ref_scenario):
    layout = RowLayout(ref_scenario.topology)
    r = intersat(1, 2, 3)
    prob = build_rmp(ref_scenario, [r])
    col = prob.A[:, 30].toarray().ravel()
    expected = {layout.arc_row[(1, 2)], layout.arc_row[(2, 3)], layout.compute_row(3), layout.data_row(1)}
    assert set(np.flatnonzero(col)) == expected
    assert prob.c[30] == pytest.approx(0.3)
    names = prob.row_names
    assert names[layout.compute_row(3)] == "compute_3"
    assert names[layout.data_row(1)] == "data_1"


def test_ground_column_rows(ref_scenario):
    layout = RowLayout(ref_scenario.topology)
    g = ref_scenario.topology.gateways[0]
    nb = ref_scenario.topology.isl_neighbors[g][0]
    prob = build_rmp(ref_scenario, [ground(nb, g)])
    col = prob.A[:, 30].toarray().ravel()
    expected = {layout.arc_row[(nb, g)], layout.sgl_row[g], layout.data_row(nb)}
    assert set(np.flatnonzero(col)) == expected
    assert prob.c[30] == pytest.approx(0.1)


def test_local_columns(ref_scenario):
    layout = RowLayout(ref_scenario.topology)
    prob = build_rmp(ref_scenario, [])
    for s in (1, 17, 30):
        col = prob.A[:, s - 1].toarray().ravel()
        assert set(np.flatnonzero(col)) == {layout.compute_row(s), layout.data_row(s)}
    assert np.all(prob.c == 0.6)


def test_one_hop_variable_count():
    sc = reference_scenario(hops=(1, 1))
    inter, grd = enumerate_routes(sc.topology, 1, 1)
    assert build_rmp(sc, inter + grd).n_cols == 30 + 126


def test_empty_pool_objective_is_local_only(ref_scenario):
    sol = solve_rmp(ref_scenario, ColumnPool())
    a = ref_scenario.weights[0]
    expect = a * np.minimum(ref_scenario.demands, ref_scenario.compute_capacity).sum()
    assert sol.objective == pytest.approx(expect, rel=1e-12)


def test_line_instance(line_scenario):
    sol = solve_rmp(line_scenario, [intersat(1, 2)])
    assert sol.objective == pytest.approx(7.5)
    assert sol.local == pytest.approx([10.0, 0.0])
    assert sol.flows == pytest.approx([5.0])
    assert sol.layer_volumes() == pytest.approx({"local": 10.0, "intersat": 5.0, "ground": 0.0})


def test_duals_feasible_for_pooled_columns(ref_scenario):
    inter, grd = enumerate_routes(ref_scenario.topology, 2, 2)
    sol = solve_rmp(ref_scenario, inter[::7] + grd[::3])
    y = sol.duals
    assert y.min_value() >= -1e-9
    for r in sol.routes:
        assert y.route_slack(r, ref_scenario.weights) >= -1e-9
    for s in ref_scenario.topology.satellites:
        assert y.local_slack(s, 0.6) >= -1e-9
    assert y.dual_objective(ref_scenario) == pytest.approx(sol.objective, rel=1e-9)
    # positive flows sit on tight dual constraints
    for r, f in zip(sol.routes, sol.flows):
        if f > 1e-9:
            assert y.route_slack(r, ref_scenario.weights) == pytest.approx(0.0, abs=1e-9)


def test_dual_roundtrip(ref_scenario):
    layout = RowLayout(ref_scenario.topology)
    y = np.arange(layout.n_rows, dtype=float)
    assert np.array_equal(DualPrices.from_rows(layout, y).to_rows(layout), y)


def test_shared_duals_symmetric(ref_scenario):
    sol = solve_rmp(ref_scenario, enumerate_routes(ref_scenario.topology, 2, 0)[0])
    for (i, j), v in sol.duals.alpha.items():
        assert sol.duals.alpha[(j, i)] == v


def test_add_columns_dedupes(ref_scenario):
    pool = ColumnPool()
    assert add_columns(pool, [intersat(1, 2), intersat(1, 2), intersat(2, 1)]) == 2
    assert add_columns(pool, [intersat(1, 2)]) == 0
    assert len(pool) == 2 and intersat(2, 1) in pool
    assert pool.position(intersat(2, 1)) == 1
    assert (pool.n_intersat, pool.n_ground) == (2, 0)


def test_add_columns_validates(ref_scenario):
    pool = ColumnPool()
    with pytest.raises(RouteError):
        add_columns(pool, [intersat(1, 2, 3, 4)], ref_scenario)
    with pytest.raises(RouteError):
        add_columns(pool, [intersat(1, 3)], ref_scenario)
    assert len(pool) == 0


def test_unknown_link_rejected(ref_scenario):
    with pytest.raises(MasterError):
        build_rmp(ref_scenario, [intersat(1, 3)])


def test_warm_start_matches_cold(ref_scenario):
    inter, grd = enumerate_routes(ref_scenario.topology, 2, 2)
    first = solve_rmp(ref_scenario, inter[:40])
    warm = solve_rmp(ref_scenario, inter[:40] + grd, basis=first.lp.basis)
    cold = solve_rmp(ref_scenario, inter[:40] + grd)
    assert warm.objective == pytest.approx(cold.objective, rel=1e-12)
