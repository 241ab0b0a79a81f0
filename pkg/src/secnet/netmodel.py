"""Directed acyclic erasure networks.

Every edge is a broadcast erasure channel: the head vertex receives each
transmitted packet with probability ``1 - delta`` and an eavesdropper sitting
on the edge receives it, independently, with probability ``1 - delta_e``.

Network file format (line oriented, ``#`` starts a comment)::

    node <id>
    edge <id> <tail> <head> <delta> <delta_e>
    source <id>        # repeatable for multi-source networks
    sink <id>
"""

from __future__ import annotations

import graphlib
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import networkx as nx

DEFAULT_MAX_PATHS = 100_000


class NetworkError(ValueError):
    """Invalid network description."""


class NetworkFormatError(NetworkError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class PathLimitError(RuntimeError):
    """Path enumeration exceeded its budget."""

    def __init__(self, count: int, limit: int) -> None:
        super().__init__(f"path enumeration reached {count} paths, above the limit of {limit}")
        self.count = count
        self.limit = limit


@dataclass(frozen=True)
class EdgeChannel:
    id: str
    tail: str
    head: str
    delta: float
    delta_e: float

    def __post_init__(self) -> None:
        for name in ("delta", "delta_e"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0) or math.isnan(value):
                raise NetworkError(f"edge {self.id}: {name}={value} outside [0, 1]")

    @property
    def capacity(self) -> float:
        """Delivered packets per channel use under ARQ."""
        return 1.0 - self.delta


@dataclass(frozen=True)
class Path:
    edges: tuple[str, ...]
    origin: str
    terminus: str

    def __contains__(self, edge_id: object) -> bool:
        return edge_id in self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def label(self) -> str:
        return ">".join(self.edges)


@dataclass(frozen=True)
class Network:
    vertices: tuple[str, ...]
    edges: tuple[EdgeChannel, ...]
    sources: tuple[str, ...]
    destination: str
    _by_id: dict[str, EdgeChannel] = field(init=False, repr=False, compare=False)
    _in: dict[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)
    _out: dict[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)
    _order: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise NetworkError("duplicate vertex ids")
        by_id: dict[str, EdgeChannel] = {}
        incoming: dict[str, list[str]] = {v: [] for v in self.vertices}
        outgoing: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.id in by_id:
                raise NetworkError(f"duplicate edge id {e.id!r}")
            for end in (e.tail, e.head):
                if end not in vset:
                    raise NetworkError(f"edge {e.id} references unknown vertex {end!r}")
            by_id[e.id] = e
            outgoing[e.tail].append(e.id)
            incoming[e.head].append(e.id)
        if not self.sources:
            raise NetworkError("no source vertex")
        if len(set(self.sources)) != len(self.sources):
            raise NetworkError("sources must be distinct vertices")
        for v in (*self.sources, self.destination):
            if v not in vset:
                raise NetworkError(f"unknown terminal vertex {v!r}")
        if self.destination in self.sources:
            raise NetworkError("a source coincides with the destination")

        sorter = graphlib.TopologicalSorter({v: () for v in self.vertices})
        for e in self.edges:
            sorter.add(e.head, e.tail)
        try:
            order = tuple(sorter.static_order())
        except graphlib.CycleError as exc:
            raise NetworkError(f"cycle detected through {exc.args[1]}") from None

        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_in", {v: tuple(ids) for v, ids in incoming.items()})
        object.__setattr__(self, "_out", {v: tuple(ids) for v, ids in outgoing.items()})
        object.__setattr__(self, "_order", order)

    @classmethod
    def build(
        cls,
        edges: Iterable[tuple[str, str, str, float, float]],
        source: str | Sequence[str],
        destination: str,
        vertices: Iterable[str] = (),
    ) -> Network:
        """Convenience constructor from ``(id, tail, head, delta, delta_e)`` tuples."""
        chans = tuple(EdgeChannel(i, t, h, float(d), float(de)) for i, t, h, d, de in edges)
        seen: dict[str, None] = dict.fromkeys(vertices)
        for c in chans:
            seen.setdefault(c.tail)
            seen.setdefault(c.head)
        sources = (source,) if isinstance(source, str) else tuple(source)
        for v in (*sources, destination):
            seen.setdefault(v)
        return cls(tuple(seen), chans, sources, destination)

    @property
    def source(self) -> str:
        if len(self.sources) != 1:
            raise NetworkError(f"expected a single source, network has {len(self.sources)}")
        return self.sources[0]

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, edge_id: str) -> EdgeChannel:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise KeyError(f"unknown edge {edge_id!r}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._by_id

    def in_edges(self, v: str) -> tuple[str, ...]:
        return self._in[v]

    def out_edges(self, v: str) -> tuple[str, ...]:
        return self._out[v]

    def internal_vertices(self, exempt: Iterable[str] | None = None) -> list[str]:
        """Vertices subject to flow conservation (all but sources and destination)."""
        skip = set(self.sources) | {self.destination} if exempt is None else set(exempt)
        return [v for v in self.vertices if v not in skip]

    def with_edge(self, edge_id: str, **changes: float) -> Network:
        """Copy of the network with one edge's probabilities replaced."""
        edges = tuple(
            EdgeChannel(e.id, e.tail, e.head, changes.get("delta", e.delta), changes.get("delta_e", e.delta_e))
            if e.id == edge_id
            else e
            for e in self.edges
        )
        if edge_id not in self._by_id:
            raise KeyError(f"unknown edge {edge_id!r}")
        return Network(self.vertices, edges, self.sources, self.destination)


def parse_network(text: str) -> Network:
    vertices: dict[str, None] = {}
    edges: list[EdgeChannel] = []
    edge_lines: dict[str, int] = {}
    sources: list[str] = []
    sink: str | None = None
    explicit_nodes = False

    def prob(token: str, lineno: int) -> float:
        try:
            value = float(token)
        except ValueError:
            raise NetworkFormatError(lineno, f"not a probability: {token!r}") from None
        if not (0.0 <= value <= 1.0):
            raise NetworkFormatError(lineno, f"probability {token} outside [0, 1]")
        return value

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        kind, args = tokens[0], tokens[1:]
        if kind == "node":
            if len(args) != 1:
                raise NetworkFormatError(lineno, "expected: node <id>")
            explicit_nodes = True
            vertices.setdefault(args[0])
        elif kind == "edge":
            if len(args) != 5:
                raise NetworkFormatError(lineno, "expected: edge <id> <tail> <head> <delta> <deltaE>")
            eid, tail, head = args[:3]
            if eid in edge_lines:
                raise NetworkFormatError(lineno, f"duplicate edge id {eid!r} (first on line {edge_lines[eid]})")
            edge_lines[eid] = lineno
            edges.append(EdgeChannel(eid, tail, head, prob(args[3], lineno), prob(args[4], lineno)))
        elif kind == "source":
            if len(args) != 1:
                raise NetworkFormatError(lineno, "expected: source <id>")
            if args[0] in sources:
                raise NetworkFormatError(lineno, f"source {args[0]!r} listed twice")
            sources.append(args[0])
        elif kind == "sink":
            if len(args) != 1:
                raise NetworkFormatError(lineno, "expected: sink <id>")
            if sink is not None:
                raise NetworkFormatError(lineno, "sink given twice")
            sink = args[0]
        else:
            raise NetworkFormatError(lineno, f"unknown directive {kind!r}")

    if not sources:
        raise NetworkError("missing 'source' line")
    if sink is None:
        raise NetworkError("missing 'sink' line")

    if explicit_nodes:
        # nodes declared explicitly must cover every reference
        for e in edges:
            for end in (e.tail, e.head):
                if end not in vertices:
                    raise NetworkFormatError(edge_lines[e.id], f"edge {e.id} references unknown vertex {end!r}")
        for v in (*sources, sink):
            if v not in vertices:
                raise NetworkError(f"terminal {v!r} is not a declared node")
    else:
        for e in edges:
            vertices.setdefault(e.tail)
            vertices.setdefault(e.head)
        for v in (*sources, sink):
            vertices.setdefault(v)

    return Network(tuple(vertices), tuple(edges), tuple(sources), sink)


def serialize_network(net: Network) -> str:
    lines = [f"node {v}" for v in net.vertices]
    lines += [f"edge {e.id} {e.tail} {e.head} {e.delta!r} {e.delta_e!r}" for e in net.edges]
    lines += [f"source {s}" for s in net.sources]
    lines.append(f"sink {net.destination}")
    return "\n".join(lines) + "\n"


def topological_order(net: Network) -> tuple[str, ...]:
    return net._order


def _walk_paths(net: Network, origin: str) -> Iterator[tuple[str, ...]]:
    stack: list[tuple[str, tuple[str, ...]]] = [(origin, ())]
    while stack:
        v, prefix = stack.pop()
        # reversed keeps the output in edge-declaration order
        for eid in reversed(net.out_edges(v)):
            path = prefix + (eid,)
            yield path
            stack.append((net.edge(eid).head, path))


def enumerate_source_rooted_paths(
    net: Network, origin: str, max_paths: int = DEFAULT_MAX_PATHS
) -> list[Path]:
    """All directed paths leaving ``origin``, prefixes included.

    On a DAG every directed path is simple. Paths whose terminus is the
    destination form the Alice-Bob subset (see :func:`destination_paths`).
    """
    if origin not in net.vertices:
        raise KeyError(f"unknown vertex {origin!r}")
    out: list[Path] = []
    for edges in _walk_paths(net, origin):
        if len(out) >= max_paths:
            raise PathLimitError(len(out) + 1, max_paths)
        out.append(Path(edges, origin, net.edge(edges[-1]).head))
    out.sort(key=lambda p: (len(p.edges), p.edges))
    return out


def destination_paths(net: Network, paths: Iterable[Path]) -> list[Path]:
    return [p for p in paths if p.terminus == net.destination]


def _reachable(net: Network) -> dict[str, set[str]]:
    reach: dict[str, set[str]] = {}
    for v in reversed(topological_order(net)):
        r = {v}
        for eid in net.out_edges(v):
            r |= reach[net.edge(eid).head]
        reach[v] = r
    return reach


def edge_partial_order(net: Network) -> set[tuple[str, str]]:
    """Pairs ``(g, j)`` with edge ``g`` strictly upstream of edge ``j``."""
    reach = _reachable(net)
    pairs = set()
    for g in net.edges:
        downstream = reach[g.head]
        for j in net.edges:
            if j.id != g.id and j.tail in downstream:
                pairs.add((g.id, j.id))
    return pairs


def max_flow(
    net: Network,
    capacities: Mapping[str, float],
    sources: Sequence[str] | None = None,
) -> float:
    """Maximum flow from the source(s) to the destination."""
    srcs = tuple(net.sources if sources is None else sources)
    g = nx.DiGraph()
    g.add_nodes_from(net.vertices)
    for e in net.edges:
        cap = float(capacities[e.id])
        if cap < 0 or not math.isfinite(cap):
            raise ValueError(f"edge {e.id}: capacity {cap} must be finite and nonnegative")
        if g.has_edge(e.tail, e.head):
            g[e.tail][e.head]["capacity"] += cap
        else:
            g.add_edge(e.tail, e.head, capacity=cap)
    if len(srcs) == 1:
        root = srcs[0]
    else:
        root = ("__super_source__",)
        for s in srcs:
            g.add_edge(root, s)  # no capacity attribute means unbounded
    return float(nx.maximum_flow_value(g, root, net.destination))


def erasure_capacities(net: Network) -> dict[str, float]:
    return {e.id: e.capacity for e in net.edges}
