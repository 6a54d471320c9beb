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
The estimate/compute contract of a DSP stage.

Estimating plans the next output range from the data made available upstream; computing processes
exactly one estimated range, in estimation order, moving data from the input connector to every
output connector. A range is computed at most once.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from reactive_dsp.dataplane.config import StageKind
from reactive_dsp.dataplane.connector import Connector
from reactive_dsp.dataplane.errors import BufferOverrun, InsufficientData, SkipRange, StaleRange
from reactive_dsp.dataplane.sample_range import SampleRange

Operation = Callable[[SampleRange, bytes], bytes]


def passthrough(_: SampleRange, data: bytes) -> bytes:
    """Identity operation."""
    return data


@dataclass(frozen=True)
class StageDescriptor:
    """
    Static description of a stage.

    For sources `in_rate`/`in_width` describe the input stream; a source in_rate of 0 means equal to
    out_rate. Sinks have no output port, so their out_rate is 0.
    """
    name: str
    kind: StageKind = StageKind.INTERMEDIATE
    compute: Operation = field(default=passthrough, compare=False)
    in_rate: int = 0
    out_rate: int = 0
    in_width: int = 1
    out_width: int = 1
    out_ports: int = 1

    def __post_init__(self):
        match self.kind:
            case StageKind.SOURCE:
                if self.out_rate <= 0:
                    raise ValueError(f"Source {self.name} needs a positive out_rate")
                if self.in_rate == 0:
                    object.__setattr__(self, 'in_rate', self.out_rate)
            case StageKind.SINK:
                if self.out_rate != 0:
                    raise ValueError(f"Sink {self.name} has no output port")
                object.__setattr__(self, 'out_ports', 0)
                if self.in_rate <= 0:
                    raise ValueError(f"Sink {self.name} needs a positive in_rate")
            case StageKind.INTERMEDIATE:
                if self.in_rate <= 0 or self.out_rate <= 0:
                    raise ValueError(f"Stage {self.name} needs positive in_rate and out_rate")
        if self.kind is not StageKind.SINK and self.out_ports < 1:
            raise ValueError(f"Stage {self.name} needs at least one output port")

    @property
    def is_source(self) -> bool:
        """True for sources."""
        return self.kind is StageKind.SOURCE

    @property
    def is_sink(self) -> bool:
        """True for sinks."""
        return self.kind is StageKind.SINK

    def output_size(self, input_size: int) -> int:
        """Rate-ratio law: floor(input_size * out_rate / in_rate); sinks echo their input size."""
        if self.is_sink:
            return input_size
        return input_size * self.out_rate // self.in_rate


@dataclass
class _Planned:
    """An estimated, not yet computed, range."""
    output: SampleRange
    input: SampleRange
    skipped: bool


class Stage:
    """
    Runtime state of one stage: cursors, planned ranges and counters.

    Output ordinals of a sink are its input ordinals.
    """

    def __init__(self, descriptor: StageDescriptor, logger: Optional[logging.Logger] = None):
        self.descriptor = descriptor
        self.logger = logger or logging.getLogger(__name__)
        self.in_cursor: Optional[int] = None
        self.out_cursor = 0
        self._planned: "OrderedDict[int, _Planned]" = OrderedDict()
        self.computed_end = 0
        self.collected = bytearray()

        self.estimates = 0
        self.computes = 0
        self.skips = 0
        self.samples_in = 0
        self.samples_out = 0

    @property
    def name(self) -> str:
        """Stage name."""
        return self.descriptor.name

    @property
    def pending(self) -> Sequence[SampleRange]:
        """Estimated ranges awaiting compute, oldest first."""
        return tuple(p.output for p in self._planned.values())

    def planned_input(self, sample_range: SampleRange) -> SampleRange:
        """Input range behind an estimated output range."""
        plan = self._planned.get(sample_range.index)
        if plan is None:
            raise StaleRange(f"Stage {self.name}: range {sample_range} is not pending")
        return plan.input

    # ----------------------------------------------------------------------------------------------
    #  Estimating
    # ----------------------------------------------------------------------------------------------

    def peek(self, upstream: SampleRange) -> SampleRange:
        """What estimate would return, without reserving anything."""
        plan = self._plan(upstream)
        return SampleRange.skip(plan.output.index) if plan.skipped else plan.output

    def _plan(self, upstream: SampleRange) -> _Planned:
        descriptor = self.descriptor
        cursor = upstream.index if self.in_cursor is None else self.in_cursor
        out_index = self._initial_out(cursor) if self.in_cursor is None else self.out_cursor

        if descriptor.is_source:
            if cursor < upstream.index:
                raise InsufficientData(f"Stage {self.name}: window {upstream} starts after the "
                                       f"cursor {cursor}")
            if upstream.end - cursor < descriptor.in_rate:
                raise InsufficientData(f"Stage {self.name}: window {upstream} holds less than "
                                       f"{descriptor.in_rate} samples from {cursor}")
            return _Planned(SampleRange(out_index, descriptor.out_rate),
                            SampleRange(cursor, descriptor.in_rate), False)

        if upstream.index < cursor:
            raise StaleRange(f"Stage {self.name}: input {upstream} already consumed "
                             f"(cursor {cursor})")
        if upstream.index > cursor:
            raise InsufficientData(f"Stage {self.name}: input {upstream} leaves a gap after "
                                   f"{cursor}")
        if upstream.is_skip:
            planned_in = SampleRange(cursor, descriptor.in_rate)
            return _Planned(SampleRange(out_index, descriptor.output_size(planned_in.size)),
                            planned_in, True)
        frames = upstream.size // descriptor.in_rate
        if frames == 0:
            raise InsufficientData(f"Stage {self.name}: input {upstream} smaller than the frame "
                                   f"of {descriptor.in_rate} samples")
        planned_in = SampleRange(cursor, frames * descriptor.in_rate)
        return _Planned(SampleRange(out_index, descriptor.output_size(planned_in.size)),
                        planned_in, False)

    def _initial_out(self, in_index: int) -> int:
        """Output ordinal matching the first input ordinal."""
        if self.descriptor.is_sink:
            return in_index
        return self.descriptor.output_size(in_index)

    def estimate(self, upstream: SampleRange) -> SampleRange:
        """
        Plan the next range.

        Args:
            upstream(SampleRange): For a source, the available stream window; otherwise the range
                produced upstream (or its skip marker).

        Returns:
            SampleRange: The output range to compute, or the skip marker at its index.

        Raises:
            InsufficientData: If the upstream window is smaller than a frame.
            StaleRange: If the upstream range was already consumed.
        """
        plan = self._plan(upstream)
        self.in_cursor = plan.input.end
        self.out_cursor = plan.output.end
        self._planned[plan.output.index] = plan
        self.estimates += 1
        return SampleRange.skip(plan.output.index) if plan.skipped else plan.output

    # ----------------------------------------------------------------------------------------------
    #  Computing
    # ----------------------------------------------------------------------------------------------

    def compute(self, sample_range: SampleRange, connector_in: Optional[Connector] = None,
                connectors_out: Sequence[Connector] = (),
                source_data: Optional[bytes] = None) -> SampleRange:
        """
        Compute the oldest estimated range.

        Args:
            sample_range(SampleRange): A range returned by estimate.
            connector_in(Connector): Input connector (non-sources).
            connectors_out(Sequence[Connector]): One connector per bound output port.
            source_data(bytes): Stream bytes of the planned input (sources).

        Returns:
            SampleRange: The produced range, or the skip marker if the range was skipped.

        Raises:
            StaleRange: If the range was already computed, never estimated, or out of order.
            BufferOverrun: If an output connector cannot take the range.
        """
        plan = self._planned.get(sample_range.index)
        if plan is None:
            raise StaleRange(f"Stage {self.name}: range {sample_range} already computed or never "
                             f"estimated")
        if sample_range.index != next(iter(self._planned)):
            raise StaleRange(f"Stage {self.name}: range {sample_range} computed out of order")
        descriptor = self.descriptor

        output = None
        skipped = plan.skipped
        if not skipped:
            if descriptor.is_source:
                data = source_data
                if data is None or len(data) != plan.input.size * descriptor.in_width:
                    raise InsufficientData(f"Stage {self.name}: source data for {plan.input} "
                                           f"missing or short")
            else:
                data = connector_in.read(plan.input)
            try:
                output = descriptor.compute(plan.input, data)
            except SkipRange as e:
                self.logger.warning(f"Stage {self.name} skipped {plan.input}: {e}")
                skipped = True
            if output is not None and not descriptor.is_sink and \
                    len(output) != plan.output.size * descriptor.out_width:
                raise ValueError(f"Stage {self.name}: operation returned {len(output)} bytes for "
                                 f"{plan.output} of width {descriptor.out_width}")

        for connector in connectors_out:
            if plan.output.size > connector.free:
                raise BufferOverrun(f"Stage {self.name}: connector {connector.name} cannot take "
                                    f"{plan.output}")
        for connector in connectors_out:
            if skipped:
                connector.skip(plan.output)
            else:
                connector.write(plan.output, output)
        if connector_in is not None:
            connector_in.release(plan.input)
        if descriptor.is_sink and not skipped:
            self.collected.extend(output)

        del self._planned[sample_range.index]
        self.computed_end = plan.output.end
        self.computes += 1
        self.samples_in += plan.input.size
        if skipped:
            self.skips += 1
            return SampleRange.skip(plan.output.index)
        self.samples_out += plan.output.size
        return plan.output

    def __repr__(self):
        return f"Stage({self.name}, in={self.in_cursor}, out={self.out_cursor})"


def estimate(stage: Stage, upstream: SampleRange) -> SampleRange:
    """Module-level form of Stage.estimate."""
    return stage.estimate(upstream)


def compute(stage: Stage, sample_range: SampleRange, connector_in: Optional[Connector] = None,
            connector_out: Optional[Connector] = None,
            source_data: Optional[bytes] = None) -> SampleRange:
    """Module-level form of Stage.compute for single-output stages."""
    outputs = (connector_out,) if connector_out is not None else ()
    return stage.compute(sample_range, connector_in, outputs, source_data)
