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
Observers: automata composed in parallel with a program that emit a violation signal whenever a
safety property fails. Observers read program inputs and outputs only and never emit anything but
their violation, so they cannot change the observed behaviour.
"""

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional, Sequence, Tuple

from reactive_dsp.kernel.automaton import ControlAutomaton, Transition, emit
from reactive_dsp.kernel.guards import any_of, pre, sig
from reactive_dsp.kernel.program import Program
from reactive_dsp.kernel.signals import SignalDirection, SignalId, pure
from reactive_dsp.scheduling.protocol import compute_signal, ready_signal
from reactive_dsp.verification.errors import UnknownSignal

S1_VIOLATED = 'S1_VIOLATED'
S2_VIOLATED = 'S2_VIOLATED'
S3_VIOLATED = 'S3_VIOLATED'

ALIASES = {
    S1_VIOLATED: 'violated_deadlockfreedom',
    S2_VIOLATED: 'violated_correctness',
    S3_VIOLATED: 'violated_liveness',
}


@dataclass(frozen=True)
class ObserverSpec:
    """
    One observed property: the automata checking it (parallel instances share the violation
    signal) and the parameters it was built with.
    """
    name: str
    automata: Tuple[ControlAutomaton, ...]
    violation: SignalId
    parameters: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.automata:
            raise ValueError(f"Observer {self.name} has no automaton")
        for automaton in self.automata:
            extra = automaton.emitted_signals() - {self.violation.name}
            if extra:
                raise ValueError(f"Observer {self.name}: {automaton.name} emits {sorted(extra)} "
                                 f"besides {self.violation.name}")

    @property
    def automaton(self) -> ControlAutomaton:
        """The first (usually only) automaton."""
        return self.automata[0]

    @property
    def alias(self) -> Optional[str]:
        """Alternative name of the violation signal, if any."""
        return ALIASES.get(self.violation.name)


def _require(program: Program, names: Iterable[str], observer: str):
    missing = sorted(set(names) - set(program.signals))
    if missing:
        raise UnknownSignal(f"Observer {observer} references undeclared signals {missing}")


def _check_bound(bound: int, observer: str):
    if bound < 1:
        raise ValueError(f"Observer {observer} needs a tick bound >= 1, got {bound}")


def _violation(name: str) -> SignalId:
    return pure(name, SignalDirection.OUTPUT)


# --------------------------------------------------------------------------------------------------
#  Protocol observers
# --------------------------------------------------------------------------------------------------

def make_observer_s1(program: Program, edges: Sequence[Tuple[str, str]],
                     violation: str = S1_VIOLATED) -> ObserverSpec:
    """
    Deadlock freedom: a stage hands a range downstream only if the receiver was ready to receive in
    the previous tick.

    Args:
        program(Program): The observed program.
        edges(Sequence[Tuple[str, str]]): (upstream, downstream) stage pairs to watch.
        violation(str): Name of the violation signal.

    Raises:
        UnknownSignal: If a Compute or Ready2Receive signal of an edge is not declared.
    """
    computes = [(compute_signal(u, v), ready_signal(v)) for u, v in edges]
    _require(program, [name for pair in computes for name in pair], 'S1')
    guard = any_of(*(sig(c) & ~pre(r) for c, r in computes))
    automaton = ControlAutomaton('S1', ['WATCH'], 'WATCH',
                                 [Transition('WATCH', guard, 'WATCH', (emit(violation),))])
    return ObserverSpec('S1', (automaton,), _violation(violation), {'edges': tuple(edges)})


def _countdown(name: str, bound: int, trigger, response: str, violation: str,
               rearm: bool) -> ControlAutomaton:
    """WAIT, then COUNT_0 .. COUNT_{bound-1} after the trigger; the response ends the count."""
    answered, silent = sig(response), ~sig(response)
    counts = [f"COUNT_{j}" for j in range(bound)]
    after = 'WAIT' if rearm else 'DONE'
    transitions = [Transition('WAIT', trigger, counts[0])]
    for j, state in enumerate(counts):
        transitions.append(Transition(state, answered, after))
        if j + 1 < bound:
            transitions.append(Transition(state, silent, counts[j + 1]))
        else:
            transitions.append(Transition(state, silent, after, (emit(violation),)))
    states = ['WAIT'] + counts + ([] if rearm else ['DONE'])
    return ControlAutomaton(name, states, 'WAIT', transitions)


def make_observer_s2(program: Program, bound: int, trigger: str, responses: Sequence[str],
                     violation: str = S2_VIOLATED) -> ObserverSpec:
    """
    Correctness: once `trigger` occurs, each response signal (the ack of a sink to its upstream)
    occurs within `bound` ticks. Checked once, from the first trigger.

    Raises:
        UnknownSignal: If trigger or a response is not declared.
        ValueError: If bound < 1.
    """
    _check_bound(bound, 'S2')
    _require(program, [trigger, *responses], 'S2')
    automata = tuple(_countdown(f"S2_{response}", bound, sig(trigger), response, violation,
                                rearm=False)
                     for response in responses)
    return ObserverSpec('S2', automata, _violation(violation),
                        {'bound': bound, 'trigger': trigger, 'responses': tuple(responses)})


def make_observer_s3(program: Program, bound: int, pairs: Sequence[Tuple[str, str]],
                     violation: str = S3_VIOLATED) -> ObserverSpec:
    """
    Bounded liveness: whenever Is holds, Os holds in the same tick or within `bound` ticks. One
    instance per (Is, Os) pair, all emitting the same violation.

    Raises:
        UnknownSignal: If a signal of a pair is not declared.
        ValueError: If bound < 1.
    """
    _check_bound(bound, 'S3')
    _require(program, [name for pair in pairs for name in pair], 'S3')
    automata = tuple(_countdown(f"S3_{start}", bound, sig(start) & ~sig(end), end, violation,
                                rearm=True)
                     for start, end in pairs)
    return ObserverSpec('S3', automata, _violation(violation),
                        {'bound': bound, 'pairs': tuple(pairs)})


# --------------------------------------------------------------------------------------------------
#  Generic observers
# --------------------------------------------------------------------------------------------------

def make_response_observer(program: Program, name: str, first: str, second: str, response: str,
                           release: str, violation: str) -> ObserverSpec:
    """
    When `first` and `second` hold together, `response` must hold in the next tick unless
    `release` does.

    Raises:
        UnknownSignal: If a referenced signal is not declared.
    """
    _require(program, [first, second, response, release], name)
    armed = sig(first) & sig(second)
    met = sig(response) | sig(release)
    automaton = ControlAutomaton(name, ['IDLE', 'ARMED'], 'IDLE', [
        Transition('IDLE', armed, 'ARMED'),
        Transition('ARMED', met & armed, 'ARMED'),
        Transition('ARMED', met & ~armed, 'IDLE'),
        Transition('ARMED', ~met & armed, 'ARMED', (emit(violation),)),
        Transition('ARMED', ~met & ~armed, 'IDLE', (emit(violation),)),
    ])
    return ObserverSpec(name, (automaton,), _violation(violation),
                        {'first': first, 'second': second, 'response': response,
                         'release': release})
