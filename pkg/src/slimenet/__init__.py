"""Grow transportation networks with adaptive-flow dynamics and compare them
against complete and spanning-tree baselines on cost and detour indicators."""

from .generators import (
    LhsPoint,
    Scenario,
    complete_network,
    density_mixture,
    lhs_sample,
    sample_centers,
    slime_network,
    tree_network,
)
from .graph import Edge, NetworkError, Node, SpatialNetwork, build_grid, load_network, save_network, snap_centers
from .metrics import IndicatorPair, indicators, pareto_front, relative_length, relative_performance, shortest_path_lengths
from .physarum import (
    FlowScenario,
    Fixed,
    MultiCenter,
    PhysarumParams,
    PressureField,
    RandomPair,
    SingularNetworkError,
    compute_flows,
    conductance,
    run,
    solve_pressures,
    update_diameters,
)
from .postprocess import clean, contract_degree2, keep_center_components, prune

__version__ = "0.1.0"
