# Copyright (C) 2026 Reactive-DSP Authors
#
# This program is free software: you can redistribute it and/or modify it under the terms of the GNU
# General Public License as published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without
# even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with this program. If not,
#  see <https://www.gnu.org/licenses/>.

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import networkx as nx

from reactive_dsp.dataplane.config import ConnectorConfig, StageKind, TopologyConfig
from reactive_dsp.dataplane.connector import Connector
from reactive_dsp.dataplane.errors import (CyclicTopology, DanglingPort, PortAlreadyBound,
                                           RateMismatch, TopologyError)
from reactive_dsp.dataplane.operations import resolve_operation
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.stage import StageDescriptor
from reactive_dsp.utilities.config_manager import ConfigManager


class Topology:
    """
    Stage graph with one connector per edge. Each stage has at most one input port and
    `out_ports` output ports; every port binds exactly one connector.

    Stages keep their insertion (wiring) order, which is also the tie-break of the topological
    order.
    """

    def __init__(self, name: str = "topology", connector_config: Optional[ConnectorConfig] = None,
                 init_range: SampleRange = SampleRange(0, 1600),
                 logger: Optional[logging.Logger] = None):
        self.name = name
        self.connector_config = connector_config or ConnectorConfig()
        self.init_range = init_range
        self.logger = logger or logging.getLogger(__name__)
        self.graph = nx.DiGraph()
        self._stages: Dict[str, StageDescriptor] = {}

    # ----------------------------------------------------------------------------------------------
    #  Construction
    # ----------------------------------------------------------------------------------------------

    def add_stage(self, descriptor: StageDescriptor) -> StageDescriptor:
        """Register a stage; names are unique."""
        if descriptor.name in self._stages:
            raise TopologyError(f"Stage {descriptor.name} already exists in {self.name}")
        self._stages[descriptor.name] = descriptor
        self.graph.add_node(descriptor.name, order=len(self._stages))
        return descriptor

    def connect(self, up: str, down: str, rate: int, sample_width: int) -> Connector:
        """
        Bind a new connector between a free output port of up and the input port of down.

        Raises:
            PortAlreadyBound: If no free port is left on either side.
            RateMismatch: If rate or width differ from the stage declarations.
            TopologyError: If a stage is unknown or has no port of the needed direction.
        """
        upstream, downstream = self.stage(up), self.stage(down)
        if upstream.is_sink:
            raise TopologyError(f"Sink {up} has no output port")
        if downstream.is_source:
            raise TopologyError(f"Source {down} has no input port")
        if self.graph.out_degree(up) >= upstream.out_ports:
            raise PortAlreadyBound(f"All {upstream.out_ports} output ports of {up} are bound")
        if self.graph.in_degree(down) >= 1 or self.graph.has_edge(up, down):
            raise PortAlreadyBound(f"Input port of {down} is already bound")
        if upstream.out_rate != rate or downstream.in_rate != rate:
            raise RateMismatch(f"Connector {up}->{down} rate {rate} differs from the stage rates "
                               f"{upstream.out_rate}/{downstream.in_rate}")
        if upstream.out_width != sample_width or downstream.in_width != sample_width:
            raise RateMismatch(f"Connector {up}->{down} width {sample_width} differs from the "
                               f"stage widths {upstream.out_width}/{downstream.in_width}")
        connector = Connector(up, down, rate, sample_width, self.connector_config.capacity_frames)
        self.graph.add_edge(up, down, connector=connector)
        self.logger.debug(f"Connected {up}->{down} rate={rate} width={sample_width}")
        return connector

    def disconnect(self, up: str, down: str):
        """Remove an edge and its connector."""
        if not self.graph.has_edge(up, down):
            raise TopologyError(f"No edge {up}->{down} in {self.name}")
        self.graph.remove_edge(up, down)

    def validate(self) -> "Topology":
        """
        Check the topology is a connected DAG with bound ports, a source and a sink.

        Raises:
            CyclicTopology: If the graph has a cycle.
            DanglingPort: If a port is unbound.
            TopologyError: If there is no source, no sink, or the graph is disconnected.
        """
        if not self.sources:
            raise TopologyError(f"Topology {self.name} has no source")
        if not self.sinks:
            raise TopologyError(f"Topology {self.name} has no sink")
        if not nx.is_directed_acyclic_graph(self.graph):
            cycle = [u for u, _ in nx.find_cycle(self.graph)]
            raise CyclicTopology(f"Topology {self.name} has a cycle through {cycle}")
        for name, descriptor in self._stages.items():
            if not descriptor.is_source and self.graph.in_degree(name) != 1:
                raise DanglingPort(f"Input port of {name} is not connected")
            if not descriptor.is_sink and self.graph.out_degree(name) != descriptor.out_ports:
                raise DanglingPort(f"{descriptor.out_ports - self.graph.out_degree(name)} output "
                                   f"port(s) of {name} are not connected")
        if not nx.is_weakly_connected(self.graph):
            raise TopologyError(f"Topology {self.name} is not connected")
        return self

    # ----------------------------------------------------------------------------------------------
    #  Queries
    # ----------------------------------------------------------------------------------------------

    def stage(self, name: str) -> StageDescriptor:
        """Descriptor by name."""
        try:
            return self._stages[name]
        except KeyError as e:
            raise TopologyError(f"Unknown stage {name} in {self.name}") from e

    @property
    def stages(self) -> List[StageDescriptor]:
        """Descriptors in wiring order."""
        return list(self._stages.values())

    @property
    def sources(self) -> List[str]:
        """Source names in wiring order."""
        return [n for n, d in self._stages.items() if d.is_source]

    @property
    def sinks(self) -> List[str]:
        """Sink names in wiring order."""
        return [n for n, d in self._stages.items() if d.is_sink]

    @property
    def edges(self) -> List[Tuple[str, str]]:
        """Edges in topological order of their upstream stage."""
        return [(u, v) for u in self.order() for v in self.downstream(u)]

    def order(self) -> List[str]:
        """Topological order, ties broken by wiring order."""
        position = {name: i for i, name in enumerate(self._stages)}
        return list(nx.lexicographical_topological_sort(self.graph, key=position.get))

    def upstream(self, name: str) -> Optional[str]:
        """The stage feeding name, if any."""
        predecessors = list(self.graph.predecessors(name))
        return predecessors[0] if predecessors else None

    def downstream(self, name: str) -> List[str]:
        """Stages fed by name, in wiring order."""
        position = {n: i for i, n in enumerate(self._stages)}
        return sorted(self.graph.successors(name), key=position.get)

    def connector(self, up: str, down: str) -> Connector:
        """Connector of an edge."""
        return self.graph.edges[up, down]['connector']

    def depth(self) -> int:
        """Number of stages on the longest source-to-sink path."""
        return nx.dag_longest_path_length(self.graph) + 1

    def describe(self) -> str:
        """One line per edge, in wiring order."""
        return "\n".join(f"{u}->{v} rate={self.connector(u, v).rate} "
                         f"width={self.connector(u, v).sample_width}" for u, v in self.edges)


def build_topology(config: TopologyConfig, logger: Optional[logging.Logger] = None) -> Topology:
    """
    Build and validate a topology from its declarative form. Operations are resolved through the
    operation registry.
    """
    topology = Topology(config.name, config.connector, config.initial_range(), logger)
    fan_out = {s.name: sum(1 for e in config.edges if e.up == s.name) for s in config.stages}
    for stage in config.stages:
        out_rate = 0 if stage.kind is StageKind.SINK else stage.out_rate
        topology.add_stage(StageDescriptor(
            name=stage.name,
            kind=stage.kind,
            compute=resolve_operation(stage),
            in_rate=stage.in_rate,
            out_rate=out_rate,
            in_width=stage.in_width,
            out_width=stage.out_width,
            out_ports=max(fan_out[stage.name], 1)))
    for edge in config.edges:
        topology.connect(edge.up, edge.down, edge.rate, edge.width)
    return topology.validate()


def load_topology(path: Path, logger: Optional[logging.Logger] = None) -> Topology:
    """
    Read a topology file.

    Raises:
        FileNotFoundError: If the path does not exist.
    """
    manager = ConfigManager(path, TopologyConfig)
    if logger is not None:
        manager.attach_logger(logger)
    return build_topology(manager.load(), logger)
