"""Scenarios, baseline networks, the slime-mould generator and LHS designs."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rng as rngmod
from .graph import CENTER, Edge, Node, SpatialNetwork, build_grid, nearest_node, snap_centers
from .physarum import MultiCenter, PhysarumParams, run
from .postprocess import clean

CENTER_MARGIN = 0.05
DEFAULT_GRID = (15, 15)


@dataclass
class Scenario:
    centers: list[tuple[float, float]]
    seed: int = 0
    density_r0: float = 0.1
    density_resolution: int = 64
    N: int = field(init=False)

    def __post_init__(self) -> None:
        self.centers = [(float(x), float(y)) for x, y in self.centers]
        self.N = len(self.centers)
        if self.N < 2:
            raise ValueError(f"a scenario needs at least two centers, got {self.N}")
        if len(set(self.centers)) != self.N:
            raise ValueError("scenario centers must be distinct")

    def to_json(self) -> str:
        return json.dumps(
            {
                "N": self.N,
                "seed": self.seed,
                "centers": [list(c) for c in self.centers],
                "density_r0": self.density_r0,
                "density_resolution": self.density_resolution,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        data = json.loads(text)
        sc = cls(
            [tuple(c) for c in data["centers"]],
            int(data.get("seed", 0)),
            float(data.get("density_r0", 0.1)),
            int(data.get("density_resolution", 64)),
        )
        if "N" in data and int(data["N"]) != sc.N:
            raise ValueError(f"config declares N={data['N']} but lists {sc.N} centers")
        return sc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        return cls.from_json(Path(path).read_text())


def sample_centers(
    N: int,
    seed: int,
    margin: float = CENTER_MARGIN,
    grid_dims: tuple[int, int] | None = None,
) -> Scenario:
    """Draw N centers uniformly on ``[margin, 1 - margin]^2``.

    With ``grid_dims`` set, a draw whose nearest grid node is already taken
    is redrawn, and the returned centers sit exactly on their grid nodes, so
    every generator sees the same positions.
    """
    if N < 2:
        raise ValueError(f"need at least two centers, got {N}")
    gen = rngmod.stream(seed, rngmod.CENTERS)
    lo, hi = margin, 1.0 - margin
    if grid_dims is None:
        pts = gen.uniform(lo, hi, size=(N, 2))
        return Scenario([tuple(p) for p in pts.tolist()], seed)
    grid = build_grid(*grid_dims)
    if N > grid.n_nodes:
        raise ValueError(f"{N} centers do not fit on a {grid_dims} grid")
    taken: list[int] = []
    while len(taken) < N:
        x, y = gen.uniform(lo, hi, size=2).tolist()
        nid = nearest_node(grid, x, y)
        if nid not in taken:
            taken.append(nid)
    return Scenario([(grid.nodes[n].x, grid.nodes[n].y) for n in taken], seed)


def _center_nodes(scenario: Scenario) -> list[Node]:
    return [Node(k, x, y, CENTER) for k, (x, y) in enumerate(scenario.centers)]


def complete_network(scenario: Scenario) -> SpatialNetwork:
    nodes = _center_nodes(scenario)
    edges = [
        Edge(a.id, b.id, math.hypot(a.x - b.x, a.y - b.y), 1.0)
        for i, a in enumerate(nodes)
        for b in nodes[i + 1 :]
    ]
    return SpatialNetwork.from_parts(nodes, edges)


def tree_network(scenario: Scenario) -> SpatialNetwork:
    """Repeatedly link the two closest components until one remains.

    Component distance is the minimum over cross pairs, so this is
    single-linkage merging and yields the Euclidean minimum spanning tree.
    """
    nodes = _center_nodes(scenario)
    label = list(range(len(nodes)))
    edges: list[Edge] = []
    while len(edges) < len(nodes) - 1:
        best = None
        for i, a in enumerate(nodes):
            for b in nodes[i + 1 :]:
                if label[a.id] == label[b.id]:
                    continue
                d = math.hypot(a.x - b.x, a.y - b.y)
                if best is None or d < best[0]:
                    best = (d, a.id, b.id)
        d, i, j = best
        edges.append(Edge(i, j, d, 1.0))
        old, new = label[j], label[i]
        label = [new if c == old else c for c in label]
    return SpatialNetwork.from_parts(nodes, edges)


@dataclass
class SlimeResult:
    network: SpatialNetwork
    connected: bool
    iterations: int
    raw: SpatialNetwork


def slime_network(
    scenario: Scenario,
    params: PhysarumParams = PhysarumParams(),
    grid_dims: tuple[int, int] = DEFAULT_GRID,
) -> SlimeResult:
    """Grow a network on a grid between the scenario centers and clean it up."""
    grid = build_grid(*grid_dims)
    grid.set_diameters(params.D0)
    for e in grid.edges:
        e.impedance = params.Z_default
    grid = snap_centers(grid, scenario.centers)
    scheduler = MultiCenter(tuple(grid.center_ids()), params.I0)
    result = run(grid, params, scheduler, scenario.seed)
    designed, connected = clean(result.network)
    return SlimeResult(designed, connected, result.iterations, result.network)


@dataclass(frozen=True)
class LhsPoint:
    N: int
    gamma: float
    # continuous draw on [N_min, N_max + 1) before truncation
    N_draw: float | None = field(default=None, compare=False)


def lhs_sample(
    n_points: int,
    N_range: tuple[int, int] = (2, 6),
    gamma_range: tuple[float, float] = (0.5, 2.5),
    seed: int = 0,
) -> list[LhsPoint]:
    """Latin hypercube over (N, gamma).

    Each axis is cut into ``n_points`` equal strata with one draw per
    stratum, and strata are paired by independent random permutations. The
    integer axis is sampled on ``[N_min, N_max + 1)`` and truncated.
    """
    if n_points < 1:
        raise ValueError(f"n_points must be positive, got {n_points}")
    n_lo, n_hi = N_range
    g_lo, g_hi = gamma_range
    if n_hi < n_lo or g_hi < g_lo:
        raise ValueError("empty parameter range")
    gen = rngmod.stream(seed, rngmod.LHS)
    units = []
    for _ in range(2):
        strata = gen.permutation(n_points)
        units.append((strata + gen.random(n_points)) / n_points)
    n_span = n_hi + 1 - n_lo
    out = []
    for u_n, u_g in zip(units[0].tolist(), units[1].tolist()):
        draw = n_lo + u_n * n_span
        out.append(LhsPoint(min(int(math.floor(draw)), n_hi), g_lo + u_g * (g_hi - g_lo), draw))
    return out


def density_mixture(scenario: Scenario, resolution: int | None = None, r0: float | None = None) -> np.ndarray:
    """Exponential mixture ``sum_c exp(-|x - c| / r0)`` sampled at cell centers.

    Row ``i`` of the raster is at ``y = (i + 0.5) / resolution``.
    """
    resolution = scenario.density_resolution if resolution is None else resolution
    r0 = scenario.density_r0 if r0 is None else r0
    if resolution < 1 or not r0 > 0:
        raise ValueError("resolution must be >= 1 and r0 > 0")
    ticks = (np.arange(resolution) + 0.5) / resolution
    xs, ys = np.meshgrid(ticks, ticks)
    raster = np.zeros((resolution, resolution))
    for cx, cy in scenario.centers:
        raster += np.exp(-np.hypot(xs - cx, ys - cy) / r0)
    return raster
