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
Control automata of the data-reactive protocol.

Every stage x is represented by up to three automata:

- the stage automaton `x` (INIT, IDLE and, in two-tick mode, COMP) holding one credit per output
  port. A credit is the right to hand one more range downstream; it is spent when the stage fires
  and given back by the downstream acknowledgement. A stage fires when it holds data and every
  output port has a credit or receives its ack in the same tick.
- the input latch `x_latch` (non-sources) remembering that upstream handed over a range. It emits
  `Ready2Receive_x` while empty and `Full_x` while full.
- the Rendez-Vous automaton `x_rv` (non-sources, two-tick mode) answering every `Mark` from
  upstream with `Take`, and with `Cancel` as soon as x is ready to receive.

A launcher automaton instantiates the stages on `IP_Addr` and hands the initial ack to every source
on `InitRange`. Emissions that depend only on the control state are state emissions, which keeps
every reaction constructive.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Protocol, Sequence, Tuple

from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.topology import Topology
from reactive_dsp.kernel.automaton import ControlAutomaton, Emission, Transition, emit
from reactive_dsp.kernel.guards import TRUE, Guard, all_of, sig
from reactive_dsp.kernel.signals import SignalDirection, SignalId, SignalKind, pure, valued
from reactive_dsp.scheduling.config import TimingMode

LAUNCHER = 'Launcher'
IP_ADDR = 'IP_Addr'
INIT_RANGE = 'InitRange'
USER_QUIT = 'User_Quit'


class Bug(Enum):
    """Protocol faults that can be injected into the control model."""
    NONE = 'none'
    EARLY_ACK = 'early_ack'
    DROPPED_CANCEL = 'dropped_cancel'
    MISSING_SINK_ACK = 'missing_sink_ack'


# --------------------------------------------------------------------------------------------------
#  Signal names
# --------------------------------------------------------------------------------------------------

def mark_signal(up: str, down: str) -> str:
    """Range announced by up to down when up fires."""
    return f"Mark_{up}2{down}"


def compute_signal(up: str, down: str) -> str:
    """Range handed over by up to down."""
    return f"Compute_{up}2{down}"


def ack_signal(down: str, up: str) -> str:
    """Acknowledgement from down to up."""
    return f"Ack_{down}2{up}"


def take_signal(down: str, up: str) -> str:
    """Rendez-Vous take from down to up."""
    return f"Take_{down}2{up}"


def cancel_signal(down: str, up: str) -> str:
    """Rendez-Vous cancel from down to up."""
    return f"Cancel_{down}2{up}"


def ready_signal(stage: str) -> str:
    """Present while stage can receive a range."""
    return f"Ready2Receive_{stage}"


def fire_signal(stage: str) -> str:
    """Present when stage fires."""
    return f"Fire_{stage}"


def full_signal(stage: str) -> str:
    """Present while the input latch of stage holds a range."""
    return f"Full_{stage}"


def module_signal(stage: str) -> str:
    """Instantiation of stage by the launcher."""
    return f"{stage}_module"


def data_signal(source: str) -> str:
    """Environment input telling a gated source that a frame is available."""
    return f"Data_{source}"


def latch_name(stage: str) -> str:
    """Name of the input latch automaton."""
    return f"{stage}_latch"


def rendezvous_name(stage: str) -> str:
    """Name of the Rendez-Vous automaton."""
    return f"{stage}_rv"


# --------------------------------------------------------------------------------------------------
#  Roles and states
# --------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class StageRole:
    """Position of a stage in the graph: its upstream stage and its downstream stages."""
    name: str
    upstream: Optional[str]
    downstream: Tuple[str, ...]

    @property
    def is_source(self) -> bool:
        """True without upstream."""
        return self.upstream is None

    @property
    def is_sink(self) -> bool:
        """True without downstream."""
        return not self.downstream


def roles_of(topology: Topology) -> List[StageRole]:
    """Roles of every stage in topological order."""
    return [StageRole(name, topology.upstream(name), tuple(topology.downstream(name)))
            for name in topology.order()]


@dataclass(frozen=True)
class LocalState:
    """Control state of a stage automaton: its phase and one credit per output port."""
    phase: str
    credits: Tuple[bool, ...] = ()

    def encode(self) -> str:
        """State name used in the automaton, e.g. 'IDLE:10'."""
        if self.phase == 'INIT' or not self.credits:
            return self.phase
        return f"{self.phase}:{''.join('1' if c else '0' for c in self.credits)}"

    @classmethod
    def decode(cls, text: str) -> "LocalState":
        """Inverse of encode."""
        phase, _, bits = text.partition(':')
        return cls(phase, tuple(bit == '1' for bit in bits))


class PayloadProvider(Protocol):
    """Supplies the range payloads of Mark and Compute signals at run time."""

    def mark(self, stage: str) -> SampleRange:
        """Range estimated by stage in the current tick."""

    def handed_over(self, stage: str) -> SampleRange:
        """Range stage hands downstream in the current tick."""


@dataclass(frozen=True)
class ProtocolOptions:
    """Variant of the protocol to generate."""
    mode: TimingMode = TimingMode.TWO_TICK
    bug: Bug = Bug.NONE
    bug_stage: Optional[str] = None
    gated: bool = False


# --------------------------------------------------------------------------------------------------
#  Automata
# --------------------------------------------------------------------------------------------------

class StageAutomatonFactory:
    """Builds the automata of one stage."""

    def __init__(self, role: StageRole, options: ProtocolOptions,
                 provider: Optional[PayloadProvider] = None):
        self.role = role
        self.options = options
        self.provider = provider
        self.two_tick = options.mode is TimingMode.TWO_TICK
        self.bug = options.bug if options.bug_stage == role.name else Bug.NONE
        self._acks = [ack_signal(w, role.name) for w in role.downstream]

    # Emission helpers

    def _ranged(self, name: str, getter: str) -> Emission:
        if self.provider is None:
            return emit(name)
        stage = self.role.name
        method = getattr(self.provider, getter)
        return emit(name, compute=lambda _values: method(stage))

    def _marks(self) -> List[Emission]:
        return [self._ranged(mark_signal(self.role.name, w), 'mark')
                for w in self.role.downstream]

    def _computes(self) -> List[Emission]:
        return [self._ranged(compute_signal(self.role.name, w), 'handed_over')
                for w in self.role.downstream]

    def _upstream_ack(self) -> List[Emission]:
        if self.role.is_source or self.bug in (Bug.EARLY_ACK, Bug.MISSING_SINK_ACK):
            return []
        return [emit(ack_signal(self.role.name, self.role.upstream))]

    def _data_guard(self) -> Guard:
        if not self.role.is_source:
            return sig(full_signal(self.role.name))
        return sig(data_signal(self.role.name)) if self.options.gated else TRUE

    def _fired_emissions(self) -> List[Emission]:
        emissions = [emit(fire_signal(self.role.name))] + self._marks()
        if not self.two_tick:
            emissions += self._computes() + self._upstream_ack()
        elif self.bug is Bug.EARLY_ACK:
            emissions += [emit(ack_signal(self.role.name, self.role.upstream)),
                          emit(cancel_signal(self.role.name, self.role.upstream))]
        return emissions

    # Transition generation

    def _from_idle(self, state: LocalState) -> Iterator[Tuple[Guard, LocalState, List[Emission]]]:
        missing = [j for j, credit in enumerate(state.credits) if not credit]
        fire_guard = all_of(self._data_guard(), *(sig(self._acks[j]) for j in missing))
        spent = LocalState('COMP' if self.two_tick else 'IDLE', (False,) * len(state.credits))
        yield fire_guard, spent, self._fired_emissions()
        for received in itertools.product((False, True), repeat=len(missing)):
            if not any(received):
                continue
            literals = [sig(self._acks[j]) if got else ~sig(self._acks[j])
                        for j, got in zip(missing, received)]
            credits = list(state.credits)
            for j, got in zip(missing, received):
                credits[j] = credits[j] or got
            yield all_of(~fire_guard, *literals), LocalState('IDLE', tuple(credits)), []

    def _from_comp(self, state: LocalState) -> Iterator[Tuple[Guard, LocalState, List[Emission]]]:
        for received in itertools.product((False, True), repeat=len(state.credits)):
            literals = [sig(a) if got else ~sig(a) for a, got in zip(self._acks, received)]
            yield all_of(*literals), LocalState('IDLE', tuple(received)), []

    def stage(self) -> ControlAutomaton:
        """The stage automaton."""
        name = self.role.name
        start = LocalState('IDLE', (not self.role.is_source,) * len(self.role.downstream))
        transitions = [Transition('INIT', sig(module_signal(name)), start.encode())]
        order = [start]
        seen = {start}
        state_emissions: Dict[str, List[Emission]] = {}
        for state in order:
            if state.phase == 'COMP':
                state_emissions[state.encode()] = self._computes() + self._upstream_ack()
                outgoing = self._from_comp(state)
            else:
                outgoing = self._from_idle(state)
            for guard, target, emissions in outgoing:
                transitions.append(Transition(state.encode(), guard, target.encode(),
                                              tuple(emissions)))
                if target not in seen:
                    seen.add(target)
                    order.append(target)
        return ControlAutomaton(name, ['INIT'] + [s.encode() for s in order], 'INIT',
                                transitions, state_emissions,
                                suspendable=not self.role.is_sink and self.two_tick)

    def latch(self) -> ControlAutomaton:
        """The input latch of a non-source stage."""
        name = self.role.name
        arrived = sig(compute_signal(self.role.upstream, name))
        fired = sig(fire_signal(name))
        return ControlAutomaton(
            latch_name(name), ['EMPTY', 'FULL'], 'EMPTY',
            [Transition('EMPTY', arrived, 'FULL'),
             Transition('FULL', fired & ~arrived, 'EMPTY')],
            state_emissions={'EMPTY': [emit(ready_signal(name))],
                             'FULL': [emit(full_signal(name))]})

    def rendezvous(self) -> ControlAutomaton:
        """The Rendez-Vous automaton of a non-source stage (two-tick mode)."""
        name, up = self.role.name, self.role.upstream
        marked, ready = sig(mark_signal(up, name)), sig(ready_signal(name))
        take, cancel = emit(take_signal(name, up)), emit(cancel_signal(name, up))
        if self.bug is Bug.DROPPED_CANCEL:
            return ControlAutomaton(rendezvous_name(name), ['FREE'], 'FREE',
                                    [Transition('FREE', marked, 'FREE', (take,))])
        return ControlAutomaton(
            rendezvous_name(name), ['FREE', 'HELD'], 'FREE',
            [Transition('FREE', marked & ready, 'FREE', (take, cancel)),
             Transition('FREE', marked & ~ready, 'HELD', (take,)),
             Transition('HELD', ready & marked, 'FREE', (take, cancel)),
             Transition('HELD', ready & ~marked, 'FREE', (cancel,)),
             Transition('HELD', ~ready & marked, 'HELD', (take,))])

    def automata(self) -> List[ControlAutomaton]:
        """Every automaton of the stage."""
        automata = [self.stage()]
        if not self.role.is_source:
            automata.append(self.latch())
            if self.two_tick:
                automata.append(self.rendezvous())
        return automata


def launcher_automaton(roles: Sequence[StageRole]) -> ControlAutomaton:
    """
    Await IP_Addr and instantiate every stage, then await InitRange and send the initial ack to
    every source. Both awaits are non-immediate: tick 0 only arms the launcher.
    """
    modules = tuple(emit(module_signal(r.name)) for r in roles)
    initial_acks = tuple(emit(ack_signal(w, r.name)) for r in roles if r.is_source
                         for w in r.downstream)
    return ControlAutomaton(LAUNCHER, ['START', 'WAIT_IP', 'WAIT_INIT', 'RUNNING'], 'START',
                            [Transition('START', TRUE, 'WAIT_IP'),
                             Transition('WAIT_IP', sig(IP_ADDR), 'WAIT_INIT', modules),
                             Transition('WAIT_INIT', sig(INIT_RANGE), 'RUNNING', initial_acks)])


def protocol_signals(roles: Sequence[StageRole], options: ProtocolOptions,
                     valued_ranges: bool) -> List[SignalId]:
    """Declarations of every signal the protocol uses."""
    output, local = SignalDirection.OUTPUT, SignalDirection.LOCAL
    signals = [pure(IP_ADDR, SignalDirection.INPUT),
               valued(INIT_RANGE, SignalKind.RANGE, SignalDirection.INPUT),
               pure(USER_QUIT, SignalDirection.INPUT)]

    def ranged(name):
        return valued(name, SignalKind.RANGE, output) if valued_ranges else pure(name, output)

    for role in roles:
        signals += [pure(module_signal(role.name), local), pure(fire_signal(role.name), output)]
        if role.is_source and options.gated:
            signals.append(pure(data_signal(role.name), SignalDirection.INPUT))
        if not role.is_source:
            signals += [pure(ready_signal(role.name), output), pure(full_signal(role.name), local)]
        for down in role.downstream:
            signals += [ranged(mark_signal(role.name, down)),
                        ranged(compute_signal(role.name, down)),
                        pure(ack_signal(down, role.name), output)]
            if options.mode is TimingMode.TWO_TICK:
                signals += [pure(take_signal(down, role.name), output),
                            pure(cancel_signal(down, role.name), output)]
    return signals
