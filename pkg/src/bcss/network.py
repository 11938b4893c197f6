"""Transport network and its time-space expansion.

The physical network is a set of stations (one or more charging depots,
several swap stations) joined by undirected road edges measured in whole
time steps.  Edges longer than one step are split with synthetic pass-through
nodes so that every edge of the expanded network takes exactly one step;
trucks may never park at a synthetic node.  The time-space network then
carries, per step, one parking arc per real node plus two directed travel
arcs per unit edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class NodeKind(str, Enum):
    BCS = "BCS"
    BSS = "BSS"
    VIRTUAL = "VIRTUAL"


class NetworkError(ValueError):
    """Raised for malformed transport networks."""


@dataclass(frozen=True)
class TransportNode:
    id: int
    kind: NodeKind


@dataclass(frozen=True)
class TransportEdge:
    a: int
    b: int
    travel_time: int = 1


@dataclass(frozen=True)
class TransportNetwork:
    nodes: tuple[TransportNode, ...]
    edges: tuple[TransportEdge, ...]

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise NetworkError(f"node ids must be contiguous from 1, got {sorted(ids)}")
        kinds = {n.kind for n in self.nodes}
        if NodeKind.BCS not in kinds or NodeKind.BSS not in kinds:
            raise NetworkError("network needs at least one BCS and one BSS node")
        known = set(ids)
        for e in self.edges:
            if e.a not in known:
                raise NetworkError(f"edge references unknown node {e.a}")
            if e.b not in known:
                raise NetworkError(f"edge references unknown node {e.b}")
            if e.a == e.b:
                raise NetworkError(f"edge endpoints must be distinct, got ({e.a}, {e.b})")
            if e.travel_time < 1:
                raise NetworkError(f"edge ({e.a}, {e.b}) travel_time must be >= 1")

    def node(self, node_id: int) -> TransportNode:
        return self.nodes[node_id - 1]

    @property
    def real_nodes(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind != NodeKind.VIRTUAL]

    @property
    def bss_nodes(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind == NodeKind.BSS]

    @property
    def bcs_nodes(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind == NodeKind.BCS]

    @property
    def virtual_nodes(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind == NodeKind.VIRTUAL]

    def is_unit(self) -> bool:
        return all(e.travel_time == 1 for e in self.edges)


def expand_virtual_nodes(net: TransportNetwork) -> TransportNetwork:
    """Split every multi-step edge into unit edges through fresh pass-through nodes.

    A d-step edge becomes a path of d unit edges via d-1 new nodes; unit edges
    and real nodes are untouched, so expanding an already-expanded network is
    the identity.  New node ids are allocated after all existing ids.
    """
    if net.is_unit():
        return net
    nodes = list(net.nodes)
    edges: list[TransportEdge] = []
    next_id = len(nodes) + 1
    for e in sorted(net.edges, key=lambda e: (e.a, e.b)):
        if e.travel_time == 1:
            edges.append(e)
            continue
        prev = e.a
        for _ in range(e.travel_time - 1):
            nodes.append(TransportNode(next_id, NodeKind.VIRTUAL))
            edges.append(TransportEdge(prev, next_id, 1))
            prev = next_id
            next_id += 1
        edges.append(TransportEdge(prev, e.b, 1))
    return TransportNetwork(tuple(nodes), tuple(edges))


@dataclass(frozen=True)
class TimeSpaceNetwork:
    """Arc structure of the unit-edge network repeated over a horizon.

    The arc set is identical at every step: ``arcs[k] = (i, j)`` where i == j
    is a parking arc (real nodes only) and i != j a directed travel arc.
    """

    network: TransportNetwork
    horizon: int
    arcs: tuple[tuple[int, int], ...]
    arc_index: dict[tuple[int, int], int] = field(repr=False)
    out_arcs: dict[int, tuple[int, ...]] = field(repr=False)
    in_arcs: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def steps(self) -> range:
        """1-indexed time steps."""
        return range(1, self.horizon + 1)

    def parking_arc(self, node: int) -> int:
        return self.arc_index[(node, node)]

    def arcs_per_step(self) -> int:
        return len(self.arcs)


def build_tsn(net: TransportNetwork, horizon: int) -> TimeSpaceNetwork:
    """Build the time-space arc sets for an already unit-expanded network."""
    if horizon < 1:
        raise NetworkError(f"horizon must be >= 1, got {horizon}")
    if not net.is_unit():
        raise NetworkError("network must be virtual-node expanded before TSN construction")
    arcs: list[tuple[int, int]] = [(i, i) for i in net.real_nodes]
    for e in net.edges:
        arcs.append((e.a, e.b))
        arcs.append((e.b, e.a))
    arcs.sort()
    index = {arc: k for k, arc in enumerate(arcs)}
    out_arcs: dict[int, list[int]] = {n.id: [] for n in net.nodes}
    in_arcs: dict[int, list[int]] = {n.id: [] for n in net.nodes}
    for k, (i, j) in enumerate(arcs):
        out_arcs[i].append(k)
        in_arcs[j].append(k)
    return TimeSpaceNetwork(
        network=net,
        horizon=horizon,
        arcs=tuple(arcs),
        arc_index=index,
        out_arcs={n: tuple(v) for n, v in out_arcs.items()},
        in_arcs={n: tuple(v) for n, v in in_arcs.items()},
    )


def shortest_steps(net: TransportNetwork, src: int) -> dict[int, int]:
    """BFS step counts from src, weighting each edge by its travel_time."""
    # Dijkstra on small graphs; travel times are small integers.
    import heapq

    dist = {src: 0}
    heap = [(0, src)]
    adj: dict[int, list[tuple[int, int]]] = {n.id: [] for n in net.nodes}
    for e in net.edges:
        adj[e.a].append((e.b, e.travel_time))
        adj[e.b].append((e.a, e.travel_time))
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, 1 << 30):
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist.get(v, 1 << 30):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist
