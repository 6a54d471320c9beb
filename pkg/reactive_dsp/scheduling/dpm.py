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

"""
Data-Pull Model: lazy, demand-driven evaluation from the sinks backward. A pull on a sink
recursively asks each upstream stage for the range it needs, computing every stage at most once per
range; produced ranges are cached per edge so a second consumer is served from the buffer.
Execution is strictly sequential: one stage compute per tick.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Mapping, Optional, Tuple

from reactive_dsp.dataplane.errors import InsufficientData
from reactive_dsp.dataplane.pipeline import Pipeline
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.topology import Topology
from reactive_dsp.kernel.program import Reaction
from reactive_dsp.kernel.signals import SignalEvent
from reactive_dsp.kernel.trace import TraceWriter
from reactive_dsp.scheduling.protocol import compute_signal, fire_signal


@dataclass(frozen=True)
class PullRequest:
    """One demand in a pull chain: the stage asked to compute, the input it consumes, its depth."""
    requester: str
    range: SampleRange
    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f"Pull depth must be >= 0, got {self.depth}")
        if self.range.size == 0:
            raise ValueError(f"Pull request of {self.requester} for an empty range")


class DpmScheduler:
    """
    Sequential pull scheduler over a Pipeline. Every compute takes one tick and is recorded as a
    reaction in the kernel trace format (Fire_<x> plus Compute_<x>2<w>=<range> per output edge).
    """

    def __init__(self, topology: Topology, inputs: Optional[Mapping[str, bytes]] = None,
                 trace: Optional[TraceWriter] = None, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self.pipeline = Pipeline(topology, inputs, self.logger)
        self.topology = self.pipeline.topology
        self.trace = trace
        self.tick = 0
        self.reactions: List[Reaction] = []
        self.requests: List[PullRequest] = []
        self._ready: Dict[Tuple[str, str], Deque[SampleRange]] = {
            edge: deque() for edge in self.topology.edges}
        self._chain = self.topology.depth()
        self.first_source_compute: Optional[int] = None
        self.last_sink_compute: Optional[int] = None

    def _record(self, name: str, produced: SampleRange):
        descriptor = self.pipeline.stages[name].descriptor
        if descriptor.is_source and self.first_source_compute is None:
            self.first_source_compute = self.tick
        if descriptor.is_sink:
            self.last_sink_compute = self.tick
        outputs = {SignalEvent(fire_signal(name), None, self.tick)}
        outputs |= {SignalEvent(compute_signal(name, w), produced, self.tick)
                    for w in self.topology.downstream(name)}
        reaction = Reaction(self.tick, frozenset(), frozenset(outputs), 1)
        self.reactions.append(reaction)
        if self.trace is not None:
            self.trace.write(reaction)
        self.tick += 1

    def _produce(self, name: str, depth: int) -> SampleRange:
        """Compute the next range of a stage, pulling upstream first when its input is missing."""
        if depth >= self._chain:
            raise RuntimeError(f"Pull chain through {name} deeper than the topology")
        if self.pipeline.stages[name].descriptor.is_source:
            if not self.pipeline.has_frame(name):
                raise InsufficientData(f"Source {name} exhausted")
            estimated = self.pipeline.estimate(name)
        else:
            up = self.topology.upstream(name)
            queue = self._ready[(up, name)]
            if not queue:
                self._produce(up, depth + 1)
            estimated = self.pipeline.estimate(name, queue.popleft())
        self.requests.append(PullRequest(name, self.pipeline.stages[name].planned_input(estimated),
                                         depth))
        produced = self.pipeline.compute(name, estimated)
        self._record(name, produced)
        for down in self.topology.downstream(name):
            self._ready[(name, down)].append(produced)
        return produced

    def pull(self, sink: str, want: Optional[SampleRange] = None) -> bytes:
        """
        Demand data at a sink.

        Args:
            sink(str): A sink of the topology.
            want(SampleRange): Range of sink input ordinals to deliver; one frame when omitted.

        Returns:
            bytes: The sink bytes computed by this pull.

        Raises:
            ValueError: If sink is not a sink or want lies before the sink's cursor.
            InsufficientData: If the source stream is exhausted.
        """
        stage = self.pipeline.stages[sink]
        if not stage.descriptor.is_sink:
            raise ValueError(f"{sink} is not a sink")
        if want is not None and stage.in_cursor is not None and want.index < stage.in_cursor:
            raise ValueError(f"Sink {sink}: range {want} lies before the read cursor "
                             f"{stage.in_cursor}")
        before = len(stage.collected)
        self._produce(sink, 0)
        while want is not None and stage.computed_end < want.end:
            self._produce(sink, 0)
        return bytes(stage.collected[before:])

    def run(self, items: Optional[int] = None) -> Dict[str, bytes]:
        """
        Pull every sink round-robin, `items` frames each (until the streams run out when None).

        Returns:
            Dict[str, bytes]: Bytes collected per sink.
        """
        active = list(self.topology.sinks)
        pulled = {sink: 0 for sink in active}
        while active:
            for sink in list(active):
                if items is not None and pulled[sink] >= items:
                    active.remove(sink)
                    continue
                try:
                    self.pull(sink)
                    pulled[sink] += 1
                except InsufficientData:
                    self.logger.debug(f"Sink {sink} drained after {pulled[sink]} pulls")
                    active.remove(sink)
        self.logger.info(self.summary_line())
        return self.pipeline.outputs()

    @property
    def span(self) -> int:
        """Ticks from the first source compute to the last sink compute, both included."""
        if self.first_source_compute is None or self.last_sink_compute is None:
            return 0
        return self.last_sink_compute - self.first_source_compute + 1

    def summary_line(self) -> str:
        """`stages=<n> ticks=<t> produced=<p> consumed=<c>`."""
        stages = self.pipeline.stages
        produced = sum(stages[s].computes for s in self.topology.sources)
        consumed = sum(stages[s].computes - stages[s].skips for s in self.topology.sinks)
        return f"stages={len(stages)} ticks={self.tick} produced={produced} consumed={consumed}"


def pull(scheduler: DpmScheduler, sink: str, want: Optional[SampleRange] = None) -> bytes:
    """Module-level form of DpmScheduler.pull."""
    return scheduler.pull(sink, want)
