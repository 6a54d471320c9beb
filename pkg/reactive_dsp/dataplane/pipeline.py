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
from typing import Dict, List, Mapping, Optional, Tuple

from reactive_dsp.dataplane.connector import Connector
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.stage import Stage
from reactive_dsp.dataplane.topology import Topology


class SourceStream:
    """A finite byte stream feeding a source."""

    def __init__(self, data: bytes, sample_width: int):
        if len(data) % sample_width:
            raise ValueError(f"Stream of {len(data)} bytes is not a whole number of "
                             f"{sample_width}-byte samples")
        self.data = bytes(data)
        self.sample_width = sample_width
        self.samples = len(data) // sample_width

    def window(self, cursor: int) -> SampleRange:
        """Samples available from cursor to the end of the stream."""
        return SampleRange(cursor, max(0, self.samples - cursor))

    def read(self, sample_range: SampleRange) -> bytes:
        """Bytes of a range."""
        return self.data[sample_range.index * self.sample_width:
                         sample_range.end * self.sample_width]


class Pipeline:
    """
    Runtime of a validated topology: one Stage per descriptor, a fresh connector per edge, a stream
    per source and the bytes collected by every sink. Both schedulers drive a Pipeline.
    """

    def __init__(self, topology: Topology, inputs: Optional[Mapping[str, bytes]] = None,
                 logger: Optional[logging.Logger] = None):
        """
        Args:
            topology(Topology): The stage graph; validated here.
            inputs(Mapping[str, bytes]): Stream bytes per source name (missing = empty).
            logger(logging.Logger): Logger handed to the stages.
        """
        self.topology = topology.validate()
        self.logger = logger or logging.getLogger(__name__)
        self.stages: Dict[str, Stage] = {d.name: Stage(d, self.logger) for d in topology.stages}
        inputs = inputs or {}
        unknown = set(inputs) - set(topology.sources)
        if unknown:
            raise ValueError(f"Input streams for unknown sources: {sorted(unknown)}")
        self.streams: Dict[str, SourceStream] = {
            name: SourceStream(inputs.get(name, b""), topology.stage(name).in_width)
            for name in topology.sources}
        self.connectors: Dict[Tuple[str, str], Connector] = {
            (u, v): Connector(u, v, topology.connector(u, v).rate,
                              topology.connector(u, v).sample_width,
                              topology.connector_config.capacity_frames)
            for u, v in topology.edges}
        self.retired: Dict[str, bytes] = {}

    # ----------------------------------------------------------------------------------------------
    #  Sources
    # ----------------------------------------------------------------------------------------------

    def source_window(self, name: str) -> SampleRange:
        """Stream window available to a source from its cursor on."""
        stage = self.stages[name]
        cursor = self.topology.init_range.index if stage.in_cursor is None else stage.in_cursor
        return self.streams[name].window(cursor)

    def has_frame(self, name: str) -> bool:
        """True if the source can still estimate a full frame."""
        return self.source_window(name).size >= self.stages[name].descriptor.in_rate

    def total_frames(self, name: str) -> int:
        """Frames a source will produce over the whole stream."""
        window = self.streams[name].window(self.topology.init_range.index)
        return window.size // self.stages[name].descriptor.in_rate

    # ----------------------------------------------------------------------------------------------
    #  Estimate / compute
    # ----------------------------------------------------------------------------------------------

    def estimate(self, name: str, upstream: Optional[SampleRange] = None) -> SampleRange:
        """Estimate on a stage; sources default to their stream window."""
        if upstream is None:
            upstream = self.source_window(name)
        return self.stages[name].estimate(upstream)

    def compute(self, name: str, sample_range: SampleRange) -> SampleRange:
        """Compute an estimated range, wiring the stage's connectors and stream."""
        stage = self.stages[name]
        upstream = self.topology.upstream(name)
        connector_in = self.connectors[(upstream, name)] if upstream else None
        connectors_out = [self.connectors[(name, d)] for d in self.topology.downstream(name)]
        source_data = None
        if stage.descriptor.is_source:
            source_data = self.streams[name].read(stage.planned_input(sample_range))
        return stage.compute(sample_range, connector_in, connectors_out, source_data)

    # ----------------------------------------------------------------------------------------------
    #  Rewiring
    # ----------------------------------------------------------------------------------------------

    def rewire(self, topology: Topology) -> List[str]:
        """
        Switch to a new topology between two ticks. Stages and connectors present in both keep
        their runtime state; a new connector starts at the next output ordinal of its upstream
        stage. The bytes collected by dropped sinks stay available in `retired`.

        Returns:
            List[str]: Names of the dropped stages.
        """
        topology.validate()
        names = {d.name for d in topology.stages}
        dropped = [name for name in self.stages if name not in names]
        for name in dropped:
            stage = self.stages.pop(name)
            if stage.descriptor.is_sink:
                self.retired[name] = bytes(stage.collected)
        for descriptor in topology.stages:
            if descriptor.name not in self.stages:
                self.stages[descriptor.name] = Stage(descriptor, self.logger)

        connectors = {}
        for up, down in topology.edges:
            connector = self.connectors.get((up, down))
            if connector is None:
                template = topology.connector(up, down)
                connector = Connector(up, down, template.rate, template.sample_width,
                                      topology.connector_config.capacity_frames,
                                      start=self.stages[up].out_cursor)
            connectors[(up, down)] = connector
        self.connectors = connectors
        self.topology = topology
        return dropped

    # ----------------------------------------------------------------------------------------------
    #  Results
    # ----------------------------------------------------------------------------------------------

    def output(self, sink: str) -> bytes:
        """Bytes collected by a sink."""
        return bytes(self.stages[sink].collected)

    def outputs(self) -> Dict[str, bytes]:
        """Bytes collected by every sink."""
        return {name: self.output(name) for name in self.topology.sinks}

    def counters(self) -> Dict[str, Dict[str, int]]:
        """Per-stage estimate/compute/skip counters."""
        return {name: {'estimates': s.estimates, 'computes': s.computes, 'skips': s.skips}
                for name, s in self.stages.items()}

    def sink_items(self) -> List[int]:
        """Computes per sink, in wiring order."""
        return [self.stages[name].computes for name in self.topology.sinks]
