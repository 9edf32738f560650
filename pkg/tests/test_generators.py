import math
import random

import numpy as np
import pytest
from oracles import brute_force_mst_length

from slimenet.generators import (
    LhsPoint,
    Scenario,
    complete_network,
    density_mixture,
    lhs_sample,
    sample_centers,
    slime_network,
    tree_network,
)
from slimenet.graph import build_grid, nearest_node
from slimenet.physarum import PhysarumParams
from slimenet.postprocess import components


def test_sample_centers_deterministic_and_bounded():
    a, b = sample_centers(2, seed=7), sample_centers(2, seed=7)
    assert a.centers == b.centers
    assert a.centers != sample_centers(2, seed=8).centers
    sc = sample_centers(6, seed=1)
    assert sc.N == 6 and len(set(sc.centers)) == 6
    assert all(0.05 <= v <= 0.95 for c in sc.centers for v in c)


def test_sample_centers_uniform_mean():
    pts = np.array([c for s in range(5000) for c in sample_centers(2, seed=s).centers])
    assert len(pts) == 10_000
    assert np.allclose(pts.mean(axis=0), 0.5, atol=0.01)


def test_sample_centers_rejects_single():
    with pytest.raises(ValueError):
        sample_centers(1, seed=0)


def test_sample_centers_on_grid_nodes():
    grid = build_grid(15, 15)
    positions = {(n.x, n.y) for n in grid.nodes.values()}
    for seed in range(30):
        sc = sample_centers(6, seed, grid_dims=(15, 15))
        assert all(c in positions for c in sc.centers)
        assert len({nearest_node(grid, *c) for c in sc.centers}) == 6


def test_scenario_json_round_trip(tmp_path):
    sc = sample_centers(4, seed=3)
    sc.save(tmp_path / "s.json")
    back = Scenario.load(tmp_path / "s.json")
    assert back.centers == sc.centers and back.seed == 3 and back.N == 4


def test_scenario_invariants():
    with pytest.raises(ValueError):
        Scenario([(0.1, 0.1)])
    with pytest.raises(ValueError):
        Scenario([(0.1, 0.1), (0.1, 0.1)])


@pytest.mark.parametrize("N,edges", [(2, 1), (4, 6), (6, 15)])
def test_complete_network_counts(N, edges):
    net = complete_network(sample_centers(N, seed=N))
    assert net.n_nodes == N and net.n_edges == edges
    assert net.center_ids() == list(range(N))


def test_complete_network_lengths():
    net = complete_network(Scenario([(0, 0), (1, 0), (0, 1)]))
    assert sorted(e.length for e in net.edges) == [1.0, 1.0, math.sqrt(2)]


def test_tree_collinear():
    net = tree_network(Scenario([(0, 0), (1, 0), (2, 0)]))
    assert sorted(e.key for e in net.edges) == [(0, 1), (1, 2)]
    assert net.total_length() == 2.0
    assert brute_force_mst_length([(0, 0), (1, 0), (2, 0)]) == 2.0


def test_tree_two_centers():
    (e,) = tree_network(Scenario([(0.1, 0.2), (0.4, 0.6)])).edges
    assert e.length == pytest.approx(0.5)


@pytest.mark.parametrize("seed", range(20))
def test_tree_equals_brute_force_mst(seed):
    rnd = random.Random(seed)
    N = rnd.randint(2, 7)
    sc = sample_centers(N, seed=seed)
    tree = tree_network(sc)
    assert tree.total_length() == brute_force_mst_length(sc.centers)
    assert tree.n_edges == N - 1
    assert len(components(tree)) == 1
    complete = complete_network(sc)
    if N == 2:
        assert tree.total_length() == complete.total_length()
    else:
        assert tree.total_length() < complete.total_length()


def test_slime_two_centers_connect():
    sc = Scenario([(0.2, 0.3), (0.8, 0.7)], seed=1)
    res = slime_network(sc, PhysarumParams(gamma=1.8), (15, 15))
    assert res.connected
    assert res.iterations == 1000
    assert len(res.network.center_ids()) == 2


def test_slime_zero_steps_keeps_grid():
    sc = Scenario([(0.0, 0.0), (1.0, 1.0)], seed=1)
    res = slime_network(sc, PhysarumParams(t_f=0), (6, 6))
    grid = build_grid(6, 6)
    # corner nodes have degree 3, so nothing on the uniform field contracts
    assert {e.key for e in res.network.edges} == {e.key for e in grid.edges}
    assert all(e.diameter == 0.5 for e in res.network.edges)
    assert res.connected


def test_slime_deterministic():
    sc = sample_centers(3, seed=12, grid_dims=(8, 8))
    params = PhysarumParams(t_f=150, gamma=1.4)
    a, b = slime_network(sc, params, (8, 8)), slime_network(sc, params, (8, 8))
    assert a.network == b.network


def _strata(values, lo, hi, n):
    return sorted(min(int((v - lo) / (hi - lo) * n), n - 1) for v in values)


@pytest.mark.parametrize("n", [1, 5, 17, 50, 100, 200])
def test_lhs_stratified(n):
    design = lhs_sample(n, (2, 6), (0.5, 2.5), seed=n)
    assert len(design) == n
    assert _strata([p.gamma for p in design], 0.5, 2.5, n) == list(range(n))
    assert all(2 <= p.N <= 6 and 0.5 <= p.gamma <= 2.5 for p in design)


def test_lhs_gamma_width_002_for_100():
    design = lhs_sample(100, (2, 6), (0.5, 2.5), seed=3)
    cells = sorted(int((p.gamma - 0.5) / 0.02) for p in design)
    assert cells == list(range(100))


def test_lhs_five_points_cover_every_N():
    for seed in range(20):
        design = lhs_sample(5, (2, 6), (0.5, 2.5), seed=seed)
        assert sorted(p.N for p in design) == [2, 3, 4, 5, 6]


def test_lhs_deterministic():
    assert lhs_sample(30, seed=4) == lhs_sample(30, seed=4)
    assert lhs_sample(30, seed=4) != lhs_sample(30, seed=5)
    assert isinstance(lhs_sample(1)[0], LhsPoint)


def test_density_center_cell():
    res = 10
    sc = Scenario([(0.05, 0.05), (0.55, 0.75)])
    raster = density_mixture(sc, res, 0.2)
    other = math.exp(-math.hypot(0.5, 0.7) / 0.2)
    assert raster[0, 0] == pytest.approx(1 + other, abs=1e-12)


def test_density_decays_from_single_center():
    sc = Scenario([(0.25, 0.25), (0.95, 0.95)])
    solo = density_mixture(Scenario([(0.25, 0.25), (50.0, 50.0)]), 20, 0.1)
    row = solo[4, 4:]
    assert np.all(np.diff(row) < 0)
    assert density_mixture(sc, 20, 0.1).shape == (20, 20)


def test_density_symmetric_pair():
    sc = Scenario([(0.3, 0.5), (0.7, 0.5)])
    raster = density_mixture(sc, 32, 0.15)
    assert np.max(np.abs(raster - raster[:, ::-1])) <= 1e-12
