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
Verification models: the control plane of a topology under the two-tick protocol, optionally with
an injected fault, composed with the protocol observers.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from reactive_dsp.dataplane.config import StageKind
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.stage import StageDescriptor
from reactive_dsp.dataplane.topology import Topology
from reactive_dsp.gsm.chain import DOWNLINK_STAGES
from reactive_dsp.kernel.program import Program
from reactive_dsp.scheduling.config import TimingMode
from reactive_dsp.scheduling.drm import build_drm
from reactive_dsp.scheduling.protocol import Bug, ack_signal, compute_signal, fire_signal
from reactive_dsp.verification.compose import compose
from reactive_dsp.verification.config import VerificationConfig
from reactive_dsp.verification.emission import EmissionVerdict, check_all
from reactive_dsp.verification.fsm import Fsm, default_alphabet, extract_fsm
from reactive_dsp.verification.minimize import minimize
from reactive_dsp.verification.observers import (ObserverSpec, make_observer_s1, make_observer_s2,
                                                 make_observer_s3)


def control_chain(names: Sequence[str] = DOWNLINK_STAGES,
                  logger: Optional[logging.Logger] = None) -> Topology:
    """
    A chain of pass-through stages: only the graph matters to the control plane. The default names
    are those of the downlink, giving the 7-stage downlink control model.
    """
    if len(names) < 2:
        raise ValueError(f"A control chain needs a source and a sink, got {list(names)}")
    topology = Topology('control', logger=logger)
    for i, name in enumerate(names):
        kind = StageKind.SOURCE if i == 0 else \
            StageKind.SINK if i == len(names) - 1 else StageKind.INTERMEDIATE
        topology.add_stage(StageDescriptor(name, kind, in_rate=1,
                                           out_rate=0 if kind is StageKind.SINK else 1))
    for up, down in zip(names, names[1:]):
        topology.connect(up, down, 1, 1)
    return topology.validate()


def liveness_pairs(topology: Topology) -> List[Tuple[str, str]]:
    """
    (Is, Os) per stage by module class: (ack from downstream, compute to downstream) for a source,
    (fire, ack to upstream) for an intermediate stage, (compute from upstream, ack to upstream) for
    a sink.
    """
    pairs = []
    for name in topology.order():
        descriptor, up = topology.stage(name), topology.upstream(name)
        if descriptor.is_source:
            down = topology.downstream(name)[0]
            pairs.append((ack_signal(down, name), compute_signal(name, down)))
        elif descriptor.is_sink:
            pairs.append((compute_signal(up, name), ack_signal(name, up)))
        else:
            pairs.append((fire_signal(name), ack_signal(name, up)))
    return pairs


def protocol_observers(program: Program, topology: Topology, selection: Sequence[str],
                       bound: int) -> List[ObserverSpec]:
    """The selected observers (s1, s2, s3) instantiated on the protocol signals of a topology."""
    observers = []
    for key in selection:
        match key.lower():
            case 's1':
                observers.append(make_observer_s1(program, topology.edges))
            case 's2':
                responses = [ack_signal(sink, topology.upstream(sink)) for sink in topology.sinks]
                observers.append(make_observer_s2(program, bound,
                                                  fire_signal(topology.sources[0]), responses))
            case 's3':
                observers.append(make_observer_s3(program, bound, liveness_pairs(topology)))
            case _:
                raise ValueError(f"Unknown observer {key}")
    return observers


@dataclass
class VerificationModel:
    """A control program composed with its observers, and how it was built."""
    topology: Topology
    base: Program
    program: Program
    observers: Tuple[ObserverSpec, ...]
    bug: Bug
    bug_stage: Optional[str]
    bound: int

    @property
    def violations(self) -> List[str]:
        """Violation signals of the observers, in composition order."""
        return [o.violation.name for o in self.observers]

    def options(self) -> Dict[str, Any]:
        """Build options, as recorded in witness files."""
        return {'topology': self.topology.name, 'bug': self.bug.value,
                'bug_stage': self.bug_stage, 'bound': self.bound,
                'observers': [o.name.lower() for o in self.observers]}


def build_model(topology: Optional[Topology] = None, *, bug: Bug = Bug.NONE,
                bug_stage: Optional[str] = None, observers: Sequence[str] = ('s1', 's2', 's3'),
                bound: int = 14, logger: Optional[logging.Logger] = None) -> VerificationModel:
    """
    Build the two-tick control program of a topology and compose the selected observers.

    Args:
        topology(Topology): Stage graph; the 7-stage downlink control chain when omitted.
        bug(Bug): Fault to inject.
        bug_stage(str): Stage receiving the fault (protocol default when omitted).
        observers(Sequence[str]): Any of s1, s2, s3.
        bound(int): Tick bound D of S2 and S3.
        logger(logging.Logger): Optional logger.
    """
    logger = logger or logging.getLogger(__name__)
    topology = topology if topology is not None else control_chain(logger=logger)
    base = build_drm(topology, TimingMode.TWO_TICK, bug=bug, bug_stage=bug_stage, logger=logger)
    specs = tuple(protocol_observers(base, topology, observers, bound))
    program = compose(base, specs, logger)
    logger.info(f"Model {topology.name}: {len(topology.stages)} stages, bug={bug.value}, "
                f"observers={[s.name for s in specs]}, D={bound}")
    return VerificationModel(topology, base, program, specs, bug, bug_stage, bound)


@dataclass
class VerificationReport:
    """Extracted FSM (minimised if requested) and the verdict of every violation signal."""
    fsm: Fsm
    verdicts: List[EmissionVerdict]

    @property
    def passed(self) -> bool:
        """True if every violation signal is never emitted."""
        return not any(v.emitted for v in self.verdicts)


def verify_model(model: VerificationModel, config: Optional[VerificationConfig] = None,
                 logger: Optional[logging.Logger] = None) -> VerificationReport:
    """
    Extract the FSM of a composed model and check the emission status of its violation signals.

    Raises:
        StateExplosion: If the model has more reachable states than config.max_states.
    """
    logger = logger or logging.getLogger(__name__)
    config = config or VerificationConfig()
    alphabet = default_alphabet(model.program, SampleRange.parse(config.init_range))
    fsm = extract_fsm(model.program, alphabet, max_states=config.max_states,
                      workers=config.workers, logger=logger)
    if config.minimize:
        fsm = minimize(fsm, logger)
    return VerificationReport(fsm, check_all(fsm, model.violations, logger))
