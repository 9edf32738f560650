"""Adaptive-flow (slime mould) dynamics on a spatial network.

Each step injects currents at some nodes, solves the node pressures under
Kirchhoff conservation, derives edge flows from the Ohm-like relation
``phi = D / (Z L) * (p_src - p_dst)``, then relaxes every diameter towards
``|phi|^gamma / (1 + |phi|^gamma)`` with an explicit Euler step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Protocol

import numpy as np
import scipy.sparse as sp
from scipy import linalg
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

from . import rng as rngmod
from .graph import Edge, SpatialNetwork

# diameters below this are treated as a closed tube
DIAMETER_FLOOR = 1e-12
# length threshold used by the trajectory dump
VISIBLE_DIAMETER = 0.05
# reduced systems up to this size are solved with dense Cholesky
DENSE_LIMIT = 1500


class SingularNetworkError(RuntimeError):
    """Current-carrying nodes are not mutually reachable through open edges."""

    def __init__(self, message: str, component: list[int] | None = None, step: int | None = None):
        super().__init__(message)
        self.component = component or []
        self.step = step


@dataclass(frozen=True)
class PhysarumParams:
    gamma: float = 1.8
    dt: float = 0.05
    I0: float = 1.0
    Z_default: float = 1.0
    D0: float = 0.5
    t_f: int = 1000
    eps_conv: float = 0.0

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not 0 < self.dt <= 1:
            raise ValueError(f"dt must lie in (0, 1], got {self.dt}")
        if not self.I0 > 0:
            raise ValueError(f"I0 must be positive, got {self.I0}")
        if not self.Z_default > 0:
            raise ValueError(f"Z_default must be positive, got {self.Z_default}")
        if not self.D0 > 0:
            raise ValueError(f"D0 must be positive, got {self.D0}")
        if self.t_f < 0:
            raise ValueError(f"t_f must be non-negative, got {self.t_f}")
        if not self.eps_conv >= 0:
            raise ValueError(f"eps_conv must be non-negative, got {self.eps_conv}")


@dataclass(frozen=True)
class FlowScenario:
    """Injected current per node: positive for sources, negative for sinks."""

    currents: Mapping[int, float]

    def __post_init__(self) -> None:
        scale = max((abs(v) for v in self.currents.values()), default=0.0)
        if abs(math.fsum(self.currents.values())) > 1e-12 * max(scale, 1.0):
            raise ValueError("injected currents must sum to zero")

    def gauge_node(self) -> int | None:
        """Sink with the most negative current, lowest id on ties."""
        sinks = [(v, nid) for nid, v in self.currents.items() if v < 0]
        return min(sinks)[1] if sinks else None


@dataclass
class PressureField:
    pressures: dict[int, float]
    gauge: int | None

    def __getitem__(self, node_id: int) -> float:
        return self.pressures[node_id]


class FlowScheduler(Protocol):
    def draw(self, rng: np.random.Generator) -> FlowScenario: ...


def _check_centers(centers) -> tuple[int, ...]:
    centers = tuple(sorted(centers))
    if len(centers) < 2:
        raise ValueError("random flow schedulers need at least two centers")
    return centers


@dataclass(frozen=True)
class MultiCenter:
    """One random center injects I0, all the others share the sink equally."""

    centers: tuple[int, ...]
    I0: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "centers", _check_centers(self.centers))

    def draw(self, rng: np.random.Generator) -> FlowScenario:
        src = self.centers[rng.integers(len(self.centers))]
        share = -self.I0 / (len(self.centers) - 1)
        return FlowScenario({c: (self.I0 if c == src else share) for c in self.centers})


@dataclass(frozen=True)
class RandomPair:
    """A random ordered pair of distinct centers acts as source and sink."""

    centers: tuple[int, ...]
    I0: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "centers", _check_centers(self.centers))

    def draw(self, rng: np.random.Generator) -> FlowScenario:
        i, j = rng.choice(len(self.centers), size=2, replace=False)
        return FlowScenario({self.centers[i]: self.I0, self.centers[j]: -self.I0})


@dataclass(frozen=True)
class Fixed:
    scenario: FlowScenario

    def draw(self, rng: np.random.Generator) -> FlowScenario:
        return self.scenario


def conductance(edge: Edge) -> float:
    return edge.diameter / (edge.impedance * edge.length)


class _Arrays:
    """Dense index view of a network used by the step kernels."""

    def __init__(self, net: SpatialNetwork):
        self.ids = net.node_ids()
        self.index = {nid: k for k, nid in enumerate(self.ids)}
        self.n = len(self.ids)
        self.src = np.array([self.index[e.src] for e in net.edges], dtype=np.int64)
        self.dst = np.array([self.index[e.dst] for e in net.edges], dtype=np.int64)
        self.length = np.array([e.length for e in net.edges], dtype=float)
        self.impedance = np.array([e.impedance for e in net.edges], dtype=float)
        self.diameter = np.array([e.diameter for e in net.edges], dtype=float)
        adj = sp.coo_matrix((np.ones(len(self.src)), (self.src, self.dst)), shape=(self.n, self.n))
        self.connected = connected_components(adj, directed=False)[0] <= 1

    def currents(self, scenario: FlowScenario) -> np.ndarray:
        b = np.zeros(self.n)
        for nid, v in scenario.currents.items():
            if nid not in self.index:
                raise KeyError(f"scenario references unknown node {nid}")
            b[self.index[nid]] = v
        return b

    def conductance(self) -> np.ndarray:
        return self.diameter / (self.impedance * self.length)


def _solve(a: _Arrays, g: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pressures with Kirchhoff balance ``L p = b``, one gauge per loaded component."""
    n = a.n
    p = np.zeros(n)
    if not b.any():
        return p
    open_ = g > 0
    s, d, w = a.src[open_], a.dst[open_], g[open_]
    if open_.all() and a.connected:
        labels = np.zeros(n, dtype=np.int64)
    else:
        adj = sp.coo_matrix((np.ones(len(w)), (s, d)), shape=(n, n))
        _, labels = connected_components(adj, directed=False)

    loaded = np.unique(labels[b != 0])
    scale = np.abs(b).sum()
    free = np.zeros(n, dtype=bool)
    for comp in loaded:
        members = np.flatnonzero(labels == comp)
        net_current = b[members].sum()
        if abs(net_current) > 1e-9 * scale:
            ids = [a.ids[k] for k in members]
            raise SingularNetworkError(
                f"component {ids[:10]}{'...' if len(ids) > 10 else ''} has unbalanced "
                f"injected current {net_current:.3g}: sources and sinks are disconnected",
                component=ids,
            )
        # members are in ascending id order, so argmin breaks ties by lowest id
        gauge = members[np.argmin(b[members])]
        free[members] = True
        free[gauge] = False

    idx = np.flatnonzero(free)
    if not len(idx):
        return p
    if len(idx) <= DENSE_LIMIT:
        lap = np.bincount(s * n + d, w, n * n) + np.bincount(d * n + s, w, n * n)
        lap = lap.reshape(n, n)
        lap[np.diag_indices(n)] = -lap.sum(axis=1)
        lap = -lap[np.ix_(idx, idx)]
        try:
            p[idx] = linalg.cho_solve(linalg.cho_factor(lap, check_finite=False), b[idx],
                                      check_finite=False)
        except linalg.LinAlgError:
            # near-closed tubes can spoil definiteness in floating point
            p[idx] = linalg.solve(lap, b[idx], check_finite=False)
    else:
        deg = np.bincount(s, w, n) + np.bincount(d, w, n)
        lap = sp.csr_matrix(
            (np.concatenate([-w, -w, deg]),
             (np.concatenate([s, d, np.arange(n)]), np.concatenate([d, s, np.arange(n)]))),
            shape=(n, n),
        )
        p[idx] = spsolve(lap[idx][:, idx].tocsc(), b[idx])
    return p


def _relax(diameter: np.ndarray, flow: np.ndarray, params: PhysarumParams) -> float:
    f = np.abs(flow)
    with np.errstate(divide="ignore", over="ignore"):
        target = 1.0 / (1.0 + f ** (-params.gamma))
    delta = params.dt * (target - diameter)
    new = diameter + delta
    new[new < DIAMETER_FLOOR] = 0.0
    change = float(np.abs(new - diameter).sum())
    diameter[:] = new
    return change


def solve_pressures(net: SpatialNetwork, scenario: FlowScenario) -> PressureField:
    a = _Arrays(net)
    p = _solve(a, a.conductance(), a.currents(scenario))
    return PressureField(dict(zip(a.ids, p.tolist())), scenario.gauge_node())


def compute_flows(net: SpatialNetwork, p: PressureField) -> None:
    """Set ``edge.flow`` on every edge; positive means src to dst."""
    for e in net.edges:
        e.flow = conductance(e) * (p[e.src] - p[e.dst])


def update_diameters(net: SpatialNetwork, params: PhysarumParams) -> float:
    """Euler step of the diameter dynamics; returns the total absolute change."""
    d = np.array([e.diameter for e in net.edges], dtype=float)
    change = _relax(d, np.array([e.flow for e in net.edges], dtype=float), params)
    for e, v in zip(net.edges, d.tolist()):
        e.diameter = v
    return change


@dataclass
class RunResult:
    network: SpatialNetwork
    iterations: int
    converged: bool = False
    trajectory: list[tuple[int, float, float]] = field(default_factory=list)


def run(
    net: SpatialNetwork,
    params: PhysarumParams,
    scheduler: FlowScheduler,
    seed: int,
    record_trajectory: bool = False,
) -> RunResult:
    """Iterate the dynamics on a private copy of ``net``.

    Stops after ``params.t_f`` steps, or earlier once the total diameter
    change of a step drops below ``params.eps_conv`` (when that is positive).
    """
    out = net.copy()
    a = _Arrays(out)
    rng = rngmod.stream(seed, rngmod.FLOWS)
    conductance_scale = 1.0 / (a.impedance * a.length)
    flow = np.zeros(len(out.edges))
    trajectory = []
    steps, converged = 0, False
    while steps < params.t_f:
        scenario = scheduler.draw(rng)
        g = a.diameter * conductance_scale
        try:
            p = _solve(a, g, a.currents(scenario))
        except SingularNetworkError as exc:
            raise SingularNetworkError(f"step {steps}: {exc}", exc.component, steps) from exc
        flow = g * (p[a.src] - p[a.dst])
        change = _relax(a.diameter, flow, params)
        steps += 1
        if record_trajectory:
            visible = float(a.length[a.diameter >= VISIBLE_DIAMETER].sum())
            trajectory.append((steps, change, visible))
        if params.eps_conv > 0 and change < params.eps_conv:
            converged = True
            break
    for e, d, phi in zip(out.edges, a.diameter.tolist(), flow.tolist()):
        e.diameter = d
        e.flow = phi
    return RunResult(out, steps, converged, trajectory)
