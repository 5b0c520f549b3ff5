"""Static shortest-path routing over the declared links."""
from collections import Counter
from dataclasses import dataclass

import networkx as nx

from .spec import ScenarioSpec, ValidationError


@dataclass(frozen=True)
class EgressPort:
    """Directed link end at a switch. cpid numbers ports in link order from 1."""
    cpid: int
    node: str
    peer: str
    link_id: str
    capacity_bps: float
    delay_ns: int

    @property
    def name(self) -> str:
        return f"{self.node}->{self.peer}"


def build_graph(spec: ScenarioSpec) -> nx.Graph:
    graph = nx.Graph()
    hosts = set(spec.hosts)
    for node in spec.nodes:
        graph.add_node(node, kind="host" if node in hosts else "switch")
    for link in spec.links:
        if graph.has_edge(link.a, link.b):
            raise ValidationError("one link per node pair", f"{link.a}-{link.b}")
        graph.add_edge(link.a, link.b, link_id=link.link_id,
                       capacity_bps=link.capacity_bps, delay_ns=link.delay_ns)
    return graph


def flow_paths(spec: ScenarioSpec, graph: nx.Graph | None = None) -> dict[str, tuple[str, ...]]:
    """Hop-count shortest path per flow, source to sink inclusive.

    Raises:
        ValidationError: an endpoint is missing or unreachable, or a path
            crosses another host
    """
    graph = build_graph(spec) if graph is None else graph
    paths = {}
    for flow in spec.flows:
        for node in (flow.source, flow.sink):
            if node not in graph:
                raise ValidationError("flow endpoints exist", f"{flow.flow_id}: {node}")
        try:
            path = tuple(nx.shortest_path(graph, flow.source, flow.sink))
        except nx.NetworkXNoPath:
            raise ValidationError("flow endpoints connected",
                                  f"{flow.flow_id}: {flow.source} -> {flow.sink}") from None
        if any(graph.nodes[n]["kind"] == "host" for n in path[1:-1]):
            raise ValidationError("paths cross only switches", f"{flow.flow_id}: {path}")
        paths[flow.flow_id] = path
    return paths


def egress_ports(spec: ScenarioSpec) -> list[EgressPort]:
    """Every switch-side link end, numbered in declaration order."""
    switches = set(spec.switches)
    ports = []
    for link in spec.links:
        for node, peer in ((link.a, link.b), (link.b, link.a)):
            if node in switches:
                ports.append(EgressPort(len(ports) + 1, node, peer, link.link_id,
                                        link.capacity_bps, link.delay_ns))
    return ports


def port_flow_counts(spec: ScenarioSpec,
                     paths: dict[str, tuple[str, ...]] | None = None) -> Counter:
    """Number of flows leaving through each (switch, next hop) pair."""
    paths = flow_paths(spec) if paths is None else paths
    counts: Counter = Counter()
    switches = set(spec.switches)
    for path in paths.values():
        for node, nxt in zip(path, path[1:]):
            if node in switches:
                counts[(node, nxt)] += 1
    return counts


def bottleneck_port(spec: ScenarioSpec,
                    paths: dict[str, tuple[str, ...]] | None = None) -> EgressPort:
    """Port carrying the most flows; ties go to the lowest cpid."""
    counts = port_flow_counts(spec, paths)
    ports = egress_ports(spec)
    if not ports:
        raise ValidationError("at least one switch", spec.name)
    return max(ports, key=lambda p: (counts[(p.node, p.peer)], -p.cpid))
