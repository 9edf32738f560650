"""Spatial network data model, grid construction and CSV io."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

REGULAR = "regular"
CENTER = "center"
NODE_KINDS = (REGULAR, CENTER)


class NetworkError(ValueError):
    """Raised for structurally invalid networks or malformed network files."""


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float
    kind: str = REGULAR

    @property
    def is_center(self) -> bool:
        return self.kind == CENTER


@dataclass
class Edge:
    src: int
    dst: int
    length: float
    diameter: float = 0.0
    impedance: float = 1.0
    flow: float = 0.0

    @property
    def key(self) -> tuple[int, int]:
        return (self.src, self.dst) if self.src < self.dst else (self.dst, self.src)

    def other(self, node_id: int) -> int:
        return self.dst if node_id == self.src else self.src


def fmt(value: float) -> str:
    return format(value, ".12g")


def distance(a: Node, b: Node) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass
class SpatialNetwork:
    """Undirected planar network without self-loops or multi-edges.

    Topology is treated as fixed once built; only per-edge diameters and
    flows are mutated, and only by the dynamics. Structural transformations
    return new networks.
    """

    nodes: dict[int, Node]
    edges: list[Edge]
    _adjacency: dict[int, list[int]] = field(init=False, repr=False, compare=False)
    _edge_index: dict[tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._adjacency, self._edge_index = self._build_index()

    @classmethod
    def from_parts(cls, nodes: Iterable[Node], edges: Iterable[Edge]) -> "SpatialNetwork":
        node_map: dict[int, Node] = {}
        for node in nodes:
            if node.id in node_map:
                raise NetworkError(f"duplicate node id {node.id}")
            node_map[node.id] = node
        return cls(node_map, list(edges))

    def _build_index(self):
        adjacency: dict[int, list[int]] = {nid: [] for nid in self.nodes}
        edge_index: dict[tuple[int, int], int] = {}
        for k, e in enumerate(self.edges):
            if e.src == e.dst:
                raise NetworkError(f"self-loop on node {e.src}")
            if e.src not in self.nodes or e.dst not in self.nodes:
                raise NetworkError(f"edge {e.src}-{e.dst} references an unknown node")
            if e.key in edge_index:
                raise NetworkError(f"duplicate edge {e.key[0]}-{e.key[1]}")
            if not e.length > 0 or not e.impedance > 0 or not e.diameter >= 0:
                raise NetworkError(f"edge {e.src}-{e.dst} violates L>0, Z>0, D>=0")
            edge_index[e.key] = k
            adjacency[e.src].append(k)
            adjacency[e.dst].append(k)
        return adjacency, edge_index

    def check_index(self) -> bool:
        """Rebuild the adjacency index and compare it with the cached one."""
        return self._build_index() == (self._adjacency, self._edge_index)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpatialNetwork):
            return NotImplemented
        return self.nodes == other.nodes and sorted(
            self.edges, key=lambda e: e.key
        ) == sorted(other.edges, key=lambda e: e.key)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def node_ids(self) -> list[int]:
        return sorted(self.nodes)

    def center_ids(self) -> list[int]:
        return sorted(nid for nid, n in self.nodes.items() if n.is_center)

    def incident(self, node_id: int) -> list[Edge]:
        return [self.edges[k] for k in self._adjacency[node_id]]

    def neighbors(self, node_id: int) -> list[int]:
        return [self.edges[k].other(node_id) for k in self._adjacency[node_id]]

    def degree(self, node_id: int) -> int:
        return len(self._adjacency[node_id])

    def edge(self, a: int, b: int) -> Edge | None:
        k = self._edge_index.get((a, b) if a < b else (b, a))
        return None if k is None else self.edges[k]

    def total_length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    def copy(self) -> "SpatialNetwork":
        return SpatialNetwork(dict(self.nodes), [replace(e) for e in self.edges])

    def subnetwork(self, node_ids: Iterable[int], edges: Iterable[Edge]) -> "SpatialNetwork":
        keep = set(node_ids)
        return SpatialNetwork(
            {nid: self.nodes[nid] for nid in sorted(keep)},
            [replace(e) for e in edges],
        )

    def set_diameters(self, value: float) -> None:
        for e in self.edges:
            e.diameter = value


def build_grid(
    rows: int,
    cols: int,
    extent: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0),
) -> SpatialNetwork:
    """Grid of rows x cols nodes with orthogonal and diagonal links.

    ``extent`` is ``(xmin, ymin, xmax, ymax)``. Node ids run row-major from
    the lower-left corner. Edges start with zero diameter.
    """
    if rows < 1 or cols < 1:
        raise NetworkError(f"grid dimensions must be positive, got {rows}x{cols}")
    xmin, ymin, xmax, ymax = extent
    if not (xmax > xmin and ymax > ymin):
        raise NetworkError(f"degenerate extent {extent}")
    hx = (xmax - xmin) / (cols - 1) if cols > 1 else 0.0
    hy = (ymax - ymin) / (rows - 1) if rows > 1 else 0.0

    def nid(r: int, c: int) -> int:
        return r * cols + c

    nodes = [
        Node(nid(r, c), xmin + c * hx, ymin + r * hy)
        for r in range(rows)
        for c in range(cols)
    ]
    diag = math.hypot(hx, hy)
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append(Edge(nid(r, c), nid(r, c + 1), hx))
            if r + 1 < rows:
                edges.append(Edge(nid(r, c), nid(r + 1, c), hy))
            if r + 1 < rows and c + 1 < cols:
                edges.append(Edge(nid(r, c), nid(r + 1, c + 1), diag))
                edges.append(Edge(nid(r, c + 1), nid(r + 1, c), diag))
    return SpatialNetwork.from_parts(nodes, edges)


def nearest_node(net: SpatialNetwork, x: float, y: float) -> int:
    """Closest node to (x, y); ties go to the lowest id."""
    best, best_d = -1, math.inf
    for nid in net.node_ids():
        n = net.nodes[nid]
        d = math.hypot(n.x - x, n.y - y)
        if d < best_d:
            best, best_d = nid, d
    if best < 0:
        raise NetworkError("cannot snap onto an empty network")
    return best


def snap_centers(net: SpatialNetwork, centers: Sequence[tuple[float, float]]) -> SpatialNetwork:
    """Return a copy of ``net`` with the node nearest each position flagged as center."""
    chosen: dict[int, tuple[float, float]] = {}
    for x, y in centers:
        nid = nearest_node(net, x, y)
        if nid in chosen and chosen[nid] != (x, y):
            raise NetworkError(
                f"centers {chosen[nid]} and {(x, y)} both snap to node {nid}"
            )
        chosen[nid] = (x, y)
    out = net.copy()
    for nid in chosen:
        out.nodes[nid] = replace(out.nodes[nid], kind=CENTER)
    return out


def save_network(net: SpatialNetwork, nodes_file: str | Path, edges_file: str | Path) -> None:
    with open(nodes_file, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "x", "y", "kind"])
        for nid in net.node_ids():
            n = net.nodes[nid]
            w.writerow([n.id, fmt(n.x), fmt(n.y), n.kind])
    with open(edges_file, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["src", "dst", "length", "impedance"])
        for e in net.edges:
            # implicit length: reloaded from coordinates without rounding
            straight = e.length == distance(net.nodes[e.src], net.nodes[e.dst])
            w.writerow([e.src, e.dst, "" if straight else fmt(e.length), fmt(e.impedance)])


def _parse_float(raw: str, what: str, where: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise NetworkError(f"{where}: bad {what} {raw!r}") from None
    if not math.isfinite(value):
        raise NetworkError(f"{where}: non-finite {what}")
    return value


def _rows(path: str | Path, required: Sequence[str]):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise NetworkError(f"{path}:1: missing column(s) {', '.join(missing)}")
        for row in reader:
            yield f"{path}:{reader.line_num}", row


def load_network(nodes_file: str | Path, edges_file: str | Path) -> SpatialNetwork:
    """Read a network from the node and edge CSV files.

    Empty ``length`` cells are filled with the Euclidean distance between the
    endpoints and empty ``impedance`` cells default to 1.
    """
    nodes: dict[int, Node] = {}
    for where, row in _rows(nodes_file, ("id", "x", "y")):
        try:
            nid = int(row["id"])
        except (TypeError, ValueError):
            raise NetworkError(f"{where}: bad node id {row['id']!r}") from None
        if nid in nodes:
            raise NetworkError(f"{where}: duplicate node id {nid}")
        kind = (row.get("kind") or REGULAR).strip()
        if kind not in NODE_KINDS:
            raise NetworkError(f"{where}: unknown node kind {kind!r}")
        nodes[nid] = Node(
            nid, _parse_float(row["x"], "x", where), _parse_float(row["y"], "y", where), kind
        )

    edges: list[Edge] = []
    seen: set[tuple[int, int]] = set()
    for where, row in _rows(edges_file, ("src", "dst")):
        try:
            src, dst = int(row["src"]), int(row["dst"])
        except (TypeError, ValueError):
            raise NetworkError(f"{where}: bad endpoint ids") from None
        for end in (src, dst):
            if end not in nodes:
                raise NetworkError(f"{where}: edge references unknown node {end}")
        if src == dst:
            raise NetworkError(f"{where}: self-loop on node {src}")
        key = (min(src, dst), max(src, dst))
        if key in seen:
            raise NetworkError(f"{where}: duplicate edge {key[0]}-{key[1]}")
        seen.add(key)
        raw_len = (row.get("length") or "").strip()
        if raw_len:
            length = _parse_float(raw_len, "length", where)
            if length <= 0:
                raise NetworkError(f"{where}: non-positive length {length}")
        else:
            length = distance(nodes[src], nodes[dst])
            if length <= 0:
                raise NetworkError(f"{where}: coincident endpoints give zero length")
        raw_z = (row.get("impedance") or "").strip()
        impedance = _parse_float(raw_z, "impedance", where) if raw_z else 1.0
        if impedance <= 0:
            raise NetworkError(f"{where}: non-positive impedance {impedance}")
        edges.append(Edge(src, dst, length, impedance=impedance))
    return SpatialNetwork(nodes, edges)
