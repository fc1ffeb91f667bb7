"""Compression plans, information values, and the compressed global model.

The toy fixtures pin down the carrier assignment rules: a six-node tree
where nodes {1,2,4} hand their data to node 3 and {3,5,6} to node 4, plus
degenerate two-node and star graphs exercising the tie rules.
"""

import numpy as np
import pytest

import oracles
from wsngain import (
    GainVector,
    InconsistentPlan,
    NoiseConfig,
    assemble_global_model,
    assign_carriers,
    build_topology,
    centralized_model,
    decentralized_model,
    gen_centralized_scenario,
    gen_decentralized_scenario,
    information_table,
    information_value,
    random_connected_topology,
)
from wsngain.scenario import DecentralizedScenario

TOY_TREE = build_topology(6, [(1, 3), (2, 3), (3, 4), (4, 5), (4, 6)])


def scalar_link_scenario(gain_12=1.0, gain_21=1.0):
    return DecentralizedScenario(
        topology=build_topology(2, [(1, 2)]),
        link_gain={(1, 2): complex(gain_12), (2, 1): complex(gain_21)},
        sensor_noise_var=np.array([1.0, 1.0]),
        comm_noise_var=1.0,
        theta=1 + 0j,
    )


def test_information_value_scalar_cases():
    scen = scalar_link_scenario()
    ones = GainVector(np.ones(2, dtype=complex))
    # one neighbor, a=h=1: 1/(1+1)
    assert information_value(1, ones, scen) == pytest.approx(0.5)
    doubled = GainVector(np.array([2.0, 2.0], dtype=complex))
    assert information_value(1, doubled, scen) == pytest.approx(0.8)


def test_information_value_two_identical_neighbors():
    topo = build_topology(3, [(1, 2), (1, 3), (2, 3)])
    scen = DecentralizedScenario(
        topology=topo,
        link_gain={(i, j): 1 + 0j for i in (1, 2, 3) for j in (1, 2, 3) if i != j},
        sensor_noise_var=np.ones(3),
        comm_noise_var=1.0,
        theta=1 + 0j,
    )
    assert information_value(1, GainVector(np.ones(3, dtype=complex)), scen) == pytest.approx(1.0)


def test_information_value_matches_dense_oracle():
    # diagonal closed form vs a dense covariance solve on random scenarios
    rng = np.random.default_rng(3)
    for seed in range(5):
        topo = random_connected_topology(7, 0.5, seed=seed)
        scen = gen_decentralized_scenario(topo, NoiseConfig(), 1 + 0j, seed=seed)
        a = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        for sink in range(1, 8):
            parents = topo.neighbors(sink)
            h_rows = np.zeros((len(parents), 7), dtype=complex)
            for r, k in enumerate(parents):
                h_rows[r, k - 1] = scen.link_gain[(sink, k)]
            want = oracles.dense_information(h_rows, a, scen.sensor_noise_var, scen.comm_noise_var)
            got = information_value(sink, a, scen)
            assert got == pytest.approx(want, rel=1e-10)


def test_assign_carriers_toy_tree():
    plan = assign_carriers(TOY_TREE, np.array([2.0, 6.0, 5.0, 7.0, 1.0, 3.0]))
    assert plan.carrier == (3, 3, 4, 3, 4, 4)
    assert plan.retained_rows[2] == (1, 2, 4)  # sink 3
    assert plan.retained_rows[3] == (3, 5, 6)  # sink 4
    assert plan.r == 2 * 5 - 6
    assert plan.m_dim == 6


def test_assign_carriers_two_node():
    plan = assign_carriers(build_topology(2, [(1, 2)]), np.array([9.0, 1.0]))
    assert plan.carrier == (2, 1)
    assert plan.r == 0
    assert plan.m_dim == 2


def test_assign_carriers_tie_to_lowest_index():
    star = build_topology(4, [(1, 2), (1, 3), (1, 4)])
    plan = assign_carriers(star, np.array([1.0, 5.0, 5.0, 2.0]))
    # leaves must choose the center; the center ties 5 vs 5 -> node 2
    assert plan.carrier == (2, 1, 1, 1)


def test_assemble_two_node_model():
    scen = scalar_link_scenario()
    plan = assign_carriers(scen.topology, np.ones(2))
    model = assemble_global_model(plan, scen)
    assert np.array_equal(model.H, np.array([[0, 1], [1, 0]], dtype=complex))
    assert model.noise_map == ((1, 2), (2, 1))


def test_assemble_toy_tree_structure():
    scen = gen_decentralized_scenario(TOY_TREE, NoiseConfig(), 1 + 0j, seed=2)
    plan = assign_carriers(TOY_TREE, np.array([2.0, 6.0, 5.0, 7.0, 1.0, 3.0]))
    model = assemble_global_model(plan, scen)
    assert model.H.shape == (6, 6)
    # one nonzero per row, sink-major: rows of sink 3 cover columns {1,2,4}
    nnz_cols = [int(np.flatnonzero(model.H[r]).item()) + 1 for r in range(6)]
    assert sorted(nnz_cols[:3]) == [1, 2, 4]
    assert sorted(nnz_cols[3:]) == [3, 5, 6]
    for r, (sink, parent) in enumerate(model.noise_map):
        assert model.H[r, parent - 1] == scen.link_gain[(sink, parent)]


def test_assemble_rejects_non_neighbor_rows():
    from wsngain.diffusion import CompressionPlan

    scen = scalar_link_scenario()
    bad = CompressionPlan(carrier=(2, 1), retained_rows=((2,), (2,)), r=0, m_dim=2)
    with pytest.raises(InconsistentPlan):
        assemble_global_model(bad, scen)


def test_single_nonzero_column_property():
    for seed in range(8):
        topo = random_connected_topology(8, 0.4, seed=seed)
        scen = gen_decentralized_scenario(topo, NoiseConfig(), 1 + 0j, seed=seed)
        model, plan = decentralized_model(scen, np.ones(8, dtype=complex))
        assert plan.m_dim == 8
        assert plan.r == 2 * topo.num_edges - 8
        nnz_per_col = (np.abs(model.H) > 0).sum(axis=0)
        assert np.all(nnz_per_col == 1)
        nnz_per_row = (np.abs(model.H) > 0).sum(axis=1)
        assert np.all(nnz_per_row == 1)


def test_carrier_uses_current_gains():
    # raising node 2's gain raises its neighbors' information values, so
    # node 1 hands its data to whichever neighbor hears the boosted node
    topo = build_topology(3, [(1, 2), (1, 3), (2, 3)])
    scen = DecentralizedScenario(
        topology=topo,
        link_gain={(i, j): 1 + 0j for i in (1, 2, 3) for j in (1, 2, 3) if i != j},
        sensor_noise_var=np.ones(3),
        comm_noise_var=1.0,
        theta=1 + 0j,
    )
    _, plan_a = decentralized_model(scen, np.array([1.0, 3.0, 1.0], dtype=complex))
    _, plan_b = decentralized_model(scen, np.array([1.0, 1.0, 3.0], dtype=complex))
    assert plan_a.carrier[0] == 3  # I_3 = 1/2 + 9/10 beats I_2 = 1
    assert plan_b.carrier[0] == 2


def test_information_table_order():
    scen = scalar_link_scenario(gain_12=2.0, gain_21=1.0)
    table = information_table(np.ones(2, dtype=complex), scen)
    assert table[0] == pytest.approx(4.0 / 5.0)  # sink 1 hears node 2 at gain 2
    assert table[1] == pytest.approx(0.5)


def test_centralized_model_passthrough():
    scen = gen_centralized_scenario(5, 3, NoiseConfig(), seed=1)
    model = centralized_model(scen)
    assert np.array_equal(model.H, scen.channel)
    assert model.noise_var == scen.fc_noise_var
    assert model.noise_map is None
