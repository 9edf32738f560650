"""Turn a diameter field into a design network.

The fixed pipeline is ``prune -> keep_center_components -> contract_degree2``
(see :func:`clean`).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import replace

from .graph import Edge, SpatialNetwork

PRUNE_EPS = 0.05


def prune(net: SpatialNetwork, eps: float = PRUNE_EPS) -> SpatialNetwork:
    """Drop edges thinner than ``eps`` and the regular nodes they leave isolated."""
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    edges = [e for e in net.edges if e.diameter >= eps]
    touched = {e.src for e in edges} | {e.dst for e in edges}
    keep = [nid for nid, n in net.nodes.items() if n.is_center or nid in touched]
    return net.subnetwork(keep, edges)


def components(net: SpatialNetwork) -> list[list[int]]:
    """Connected components as sorted id lists, ordered by their smallest id."""
    seen: set[int] = set()
    out = []
    for start in net.node_ids():
        if start in seen:
            continue
        seen.add(start)
        comp, queue = [], deque([start])
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in net.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        out.append(sorted(comp))
    return out


def keep_center_components(net: SpatialNetwork) -> tuple[SpatialNetwork, bool]:
    """Keep only components holding a center; report whether all centers share one."""
    with_centers = [c for c in components(net) if any(net.nodes[n].is_center for n in c)]
    keep = {n for c in with_centers for n in c}
    edges = [e for e in net.edges if e.src in keep]
    return net.subnetwork(keep, edges), len(with_centers) <= 1


def _series(chain: list[Edge]) -> tuple[float, float]:
    length = math.fsum(e.length for e in chain)
    if any(e.diameter == 0 for e in chain):
        return length, 0.0
    resistance = math.fsum(e.impedance * e.length / e.diameter for e in chain)
    return length, length / resistance


def _better(a: Edge, b: Edge) -> bool:
    return (a.length, -a.diameter) < (b.length, -b.diameter)


def _contract_once(net: SpatialNetwork) -> SpatialNetwork | None:
    inner = {
        nid for nid, n in net.nodes.items() if not n.is_center and net.degree(nid) == 2
    }
    if not inner:
        return None
    removed_nodes: set[int] = set()
    removed_edges: set[int] = set()
    new_edges: dict[tuple[int, int], Edge] = {}
    edge_pos = {id(e): k for k, e in enumerate(net.edges)}

    for start in sorted(inner):
        if start in removed_nodes:
            continue
        ends, chains = [], []
        for first in net.incident(start):
            prev, cur, chain = start, first.other(start), [first]
            while cur in inner and cur != start:
                nxt = next(e for e in net.incident(cur) if e.other(cur) != prev)
                prev, cur = cur, nxt.other(cur)
                chain.append(nxt)
            ends.append(cur)
            chains.append(chain)
        interior = {start}
        for chain, end in zip(chains, ends):
            node = start
            for e in chain:
                node = e.other(node)
                if node != end:
                    interior.add(node)
        removed_nodes |= interior
        if ends[0] == start:
            # isolated ring of pass-through nodes
            removed_edges |= {edge_pos[id(e)] for e in chains[0]}
            continue
        a, b = ends
        # walk from a to b: reversed first half then second half
        path = list(reversed(chains[0])) + chains[1]
        removed_edges |= {edge_pos[id(e)] for e in path}
        if a == b:
            continue
        length, diameter = _series(path)
        lead = path[0]
        flow = lead.flow if lead.src == a else -lead.flow
        src, dst = (a, b) if a < b else (b, a)
        merged = Edge(src, dst, length, diameter, 1.0, flow if src == a else -flow)
        key = merged.key
        if key not in new_edges or _better(merged, new_edges[key]):
            new_edges[key] = merged

    kept: list[Edge] = []
    for k, e in enumerate(net.edges):
        if k in removed_edges:
            continue
        rival = new_edges.get(e.key)
        if rival is not None:
            if _better(rival, e):
                continue
            del new_edges[e.key]
        kept.append(replace(e))
    kept.extend(new_edges[k] for k in sorted(new_edges))
    keep_nodes = [nid for nid in net.nodes if nid not in removed_nodes]
    return net.subnetwork(keep_nodes, kept)


def contract_degree2(net: SpatialNetwork) -> SpatialNetwork:
    """Collapse every chain of degree-2 regular nodes into a single link.

    The merged link carries the summed length and the series-equivalent
    diameter ``L_total / sum(Z_i L_i / D_i)`` with unit impedance, so the
    end-to-end resistance is unchanged. Chains closing on themselves are
    dropped; parallel links produced by merging keep the shorter one (the
    wider one on ties). Repeats until no contractible node is left.
    """
    out = net.copy()
    while True:
        nxt = _contract_once(out)
        if nxt is None or nxt == out:
            return out
        out = nxt


def clean(net: SpatialNetwork, eps: float = PRUNE_EPS) -> tuple[SpatialNetwork, bool]:
    pruned, connected = keep_center_components(prune(net, eps))
    return contract_degree2(pruned), connected
