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
Side-by-side runs of the pull and reactive schedulers on one topology and input.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

import numpy as np

from reactive_dsp.dataplane.config import StageKind
from reactive_dsp.dataplane.stage import StageDescriptor
from reactive_dsp.dataplane.topology import Topology
from reactive_dsp.scheduling.config import SchedulerConfig, TimingMode
from reactive_dsp.scheduling.dpm import DpmScheduler
from reactive_dsp.scheduling.drm import PipelineRun
from reactive_dsp.scheduling.errors import OutputDivergence


@dataclass
class SchedulerReport:
    """Tick totals of both schedulers; outputs are identical when the report exists."""
    dpm_ticks: int
    drm_ticks: int
    items: int
    outputs: Dict[str, bytes] = field(default_factory=dict, repr=False)

    @property
    def speedup(self) -> float:
        """dpm_ticks / drm_ticks."""
        return self.dpm_ticks / self.drm_ticks if self.drm_ticks else 0.0

    def as_record(self) -> Dict[str, object]:
        """Structured form, without the output bytes."""
        return {'dpm_ticks': self.dpm_ticks, 'drm_ticks': self.drm_ticks, 'items': self.items,
                'speedup': round(self.speedup, 3)}


def unit_cost_chain(stages: int = 7, rate: int = 1, width: int = 1,
                    logger: Optional[logging.Logger] = None) -> Topology:
    """
    A source, `stages - 2` pass-through stages and a sink, all at one rate: every stage costs one
    tick per item.
    """
    if stages < 2:
        raise ValueError(f"A chain needs at least a source and a sink, got {stages} stages")
    topology = Topology(f"chain{stages}", logger=logger)
    names = [f"s{i}" for i in range(stages)]
    for i, name in enumerate(names):
        kind = StageKind.SOURCE if i == 0 else \
            StageKind.SINK if i == stages - 1 else StageKind.INTERMEDIATE
        topology.add_stage(StageDescriptor(name, kind, in_rate=rate,
                                           out_rate=0 if kind is StageKind.SINK else rate,
                                           in_width=width, out_width=width))
    for up, down in zip(names, names[1:]):
        topology.connect(up, down, rate, width)
    return topology.validate()


def random_inputs(topology: Topology, items: int, seed: int = 0) -> Dict[str, bytes]:
    """`items` frames of random bytes for every source."""
    rng = np.random.default_rng(seed)
    inputs = {}
    for name in topology.sources:
        stage = topology.stage(name)
        inputs[name] = rng.integers(0, 256, items * stage.in_rate * stage.in_width,
                                    dtype=np.uint8).tobytes()
    return inputs


def compare_schedulers(topology: Topology, items: int,
                       inputs: Optional[Mapping[str, bytes]] = None, seed: int = 0,
                       mode: TimingMode = TimingMode.ONE_TICK,
                       logger: Optional[logging.Logger] = None) -> SchedulerReport:
    """
    Run both schedulers to completion on the same input and compare.

    Tick totals count from the first source compute to the last sink compute.

    Args:
        topology(Topology): A valid topology.
        items(int): Frames per source (used when inputs are generated).
        inputs(Mapping[str, bytes]): Input streams; random bytes from `seed` when omitted.
        seed(int): Seed of the generated input.
        mode(TimingMode): Timing of the reactive run; one_tick makes every stage cost one tick.
        logger(logging.Logger): Optional logger.

    Raises:
        OutputDivergence: If the sinks did not collect identical bytes.
    """
    logger = logger or logging.getLogger(__name__)
    inputs = dict(inputs) if inputs is not None else random_inputs(topology, items, seed)

    pull = DpmScheduler(topology, inputs, logger=logger)
    pulled = pull.run()

    run = PipelineRun(topology, inputs, SchedulerConfig(mode=mode), logger=logger)
    try:
        pushed = run.run().outputs()
    finally:
        run.close()

    for sink in topology.sinks:
        if pulled[sink] != pushed[sink]:
            raise OutputDivergence(f"Sink {sink}: pull scheduler collected {len(pulled[sink])} "
                                   f"bytes, reactive scheduler {len(pushed[sink])}, "
                                   f"contents differ")
    report = SchedulerReport(pull.span, run.span, items, pushed)
    logger.info(f"Scheduler comparison on {topology.name}: {report.as_record()}")
    return report
