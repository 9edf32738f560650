"""Cost and performance indicators, and 2-D Pareto fronts (both minimized)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .graph import SpatialNetwork


@dataclass(frozen=True)
class IndicatorPair:
    length_rel: float
    perf_rel: float
    valid: bool = True


def _centers(net: SpatialNetwork, centers: Sequence[int] | None) -> list[int]:
    ids = net.center_ids() if centers is None else list(centers)
    if len(ids) < 2:
        raise ValueError("indicators need at least two centers")
    return ids


def _euclid(net: SpatialNetwork, a: int, b: int) -> float:
    na, nb = net.nodes[a], net.nodes[b]
    return math.hypot(na.x - nb.x, na.y - nb.y)


def relative_length(net: SpatialNetwork, centers: Sequence[int] | None = None) -> float:
    """Total link length over the length of the complete graph on the centers."""
    ids = _centers(net, centers)
    full = math.fsum(_euclid(net, a, b) for a, b in combinations(ids, 2))
    return net.total_length() / full


def shortest_path_lengths(net: SpatialNetwork, sources: Sequence[int]) -> dict[int, dict[int, float]]:
    """Length-weighted distances from each source; unreachable nodes map to ``inf``."""
    ids = net.node_ids()
    index = {nid: k for k, nid in enumerate(ids)}
    n = len(ids)
    rows = [index[e.src] for e in net.edges]
    cols = [index[e.dst] for e in net.edges]
    graph = sp.csr_matrix(([e.length for e in net.edges], (rows, cols)), shape=(n, n))
    dist = dijkstra(graph, directed=False, indices=[index[s] for s in sources])
    dist = np.atleast_2d(dist)
    return {s: dict(zip(ids, row.tolist())) for s, row in zip(sources, dist)}


def relative_performance(net: SpatialNetwork, centers: Sequence[int] | None = None) -> float:
    """Mean detour ratio network/Euclidean over unordered center pairs.

    Returns ``nan`` when some pair of centers is not connected.
    """
    ids = _centers(net, centers)
    dist = shortest_path_lengths(net, ids)
    ratios = []
    for a, b in combinations(ids, 2):
        d = dist[a][b]
        if math.isinf(d):
            return math.nan
        ratios.append(d / _euclid(net, a, b))
    return math.fsum(ratios) / len(ratios)


def indicators(net: SpatialNetwork, centers: Sequence[int] | None = None) -> IndicatorPair:
    perf = relative_performance(net, centers)
    return IndicatorPair(relative_length(net, centers), perf, not math.isnan(perf))


def dominates(p: IndicatorPair, q: IndicatorPair) -> bool:
    return (
        p.length_rel <= q.length_rel
        and p.perf_rel <= q.perf_rel
        and (p.length_rel < q.length_rel or p.perf_rel < q.perf_rel)
    )


def pareto_mask(lengths: Sequence[float], perfs: Sequence[float]) -> list[bool]:
    """Non-dominated flags for paired objective values; duplicates all survive."""
    order = sorted(range(len(lengths)), key=lambda k: (lengths[k], perfs[k]))
    keep = [False] * len(lengths)
    best_before = math.inf
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and lengths[order[j]] == lengths[order[i]]:
            j += 1
        group_best = perfs[order[i]]
        if group_best < best_before:
            for k in order[i:j]:
                keep[k] = perfs[k] == group_best
        best_before = min(best_before, group_best)
        i = j
    return keep


def pareto_front(points: Sequence[IndicatorPair]) -> list[IndicatorPair]:
    mask = pareto_mask([p.length_rel for p in points], [p.perf_rel for p in points])
    return [p for p, m in zip(points, mask) if m]
