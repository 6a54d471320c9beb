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
The synchronous program: a parallel composition of control automata sharing one broadcast signal
valuation per tick.

A reaction is computed constructively. Signals start unknown, except environment inputs which are
present if provided and absent otherwise. At every micro-step each undecided automaton whose guard
outcome is already determined commits to its transition (or to staying put), and the emissions of
the committed transitions join the valuation. A signal becomes absent as soon as no undecided
automaton can still emit it. Guards are evaluated against the valuation at the start of the
micro-step, so committed emissions become visible to the next micro-step only.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from reactive_dsp.kernel.automaton import ControlAutomaton, Emission, Transition
from reactive_dsp.kernel.config import KernelConfig
from reactive_dsp.kernel.errors import (ConflictingValuedEmission, DuplicateSignal,
                                        FixpointDivergence, IncompatibleSnapshot, NotSuspendable,
                                        NotSuspended, ProgramHalted, UndeclaredInput,
                                        UnknownSignalInGuard)
from reactive_dsp.kernel.signals import SignalDirection, SignalEvent, SignalId

InputSet = Union[Iterable[Union[SignalEvent, str]], Mapping[str, Any], None]


@dataclass(frozen=True)
class GlobalState:
    """
    Everything that determines the next reaction: the control state of each automaton, the
    suspension flags, the previous-tick presence of the signals read through pre(...) and whether
    the program was halted. The tick counter is deliberately not part of it.
    """
    states: Tuple[str, ...]
    suspended: Tuple[bool, ...]
    previous: FrozenSet[str] = frozenset()
    halted: bool = False
    layout: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def state_of(self, automaton: str) -> str:
        """Control state of a named automaton."""
        return self.states[self.layout.index(automaton)]


@dataclass(frozen=True)
class Reaction:
    """Result of one tick."""
    tick: int
    inputs: FrozenSet[SignalEvent]
    outputs: FrozenSet[SignalEvent]
    micro_steps: int
    emitters: Tuple[Tuple[str, str], ...] = ()

    def emitted(self, name: str) -> bool:
        """True if the program emitted name in this tick."""
        return any(e.name == name for e in self.outputs)

    def present(self, name: str) -> bool:
        """True if name was present, as an input or an output."""
        return self.emitted(name) or any(e.name == name for e in self.inputs)

    def value(self, name: str) -> Any:
        """Payload of a present signal, None if absent or pure."""
        for e in self.outputs | self.inputs:
            if e.name == name:
                return e.value
        return None

    @property
    def output_names(self) -> FrozenSet[str]:
        """Names of the emitted signals."""
        return frozenset(e.name for e in self.outputs)

    def emitted_by(self, automaton: str) -> FrozenSet[str]:
        """Signals emitted by one automaton in this tick."""
        return frozenset(s for a, s in self.emitters if a == automaton)


class Program:
    """
    An executable synchronous program.

    Note:
        A Program holds mutable execution state and must not be shared between threads; use clone()
        to hand an independent copy to another thread.
    """

    def __init__(self, automata: Sequence[ControlAutomaton], signals: Sequence[SignalId],
                 halt_signal: Optional[str] = None, config: Optional[KernelConfig] = None,
                 logger: Optional[logging.Logger] = None):
        """
        Args:
            automata(Sequence[ControlAutomaton]): Automata composed in parallel.
            signals(Sequence[SignalId]): Every signal the program uses.
            halt_signal(str): Optional input whose presence aborts the whole program.
            config(KernelConfig): Kernel settings.
            logger(logging.Logger): Optional logger; the module logger is used otherwise.

        Raises:
            DuplicateSignal: If two signals share a name.
            UnknownSignalInGuard: If a guard or emission uses an undeclared signal.
            ValueError: On duplicate automaton names or invalid emissions.
        """
        self.logger = logger or logging.getLogger(__name__)
        self.config = config or KernelConfig()
        self.automata: Tuple[ControlAutomaton, ...] = tuple(automata)
        self.signals: Dict[str, SignalId] = {}
        for signal in signals:
            if signal.name in self.signals:
                raise DuplicateSignal(f"Signal {signal.name} declared more than once")
            self.signals[signal.name] = signal
        self.halt_signal = halt_signal

        self._index = {a.name: i for i, a in enumerate(self.automata)}
        if len(self._index) != len(self.automata):
            raise ValueError("Automaton names must be unique within a program")
        self._validate()

        self._inputs = frozenset(n for n, s in self.signals.items()
                                 if s.direction is SignalDirection.INPUT)
        self._pre_tracked = frozenset().union(*(a.pre_signals() for a in self.automata))
        self._bindings: List[Tuple[int, str, str]] = []
        self._micro_cap = self.config.max_micro_steps or len(self.signals) + 1
        self._fingerprint: Optional[str] = None

        self.tick = 0
        self._states: List[str] = [a.initial for a in self.automata]
        self._suspended: List[bool] = [False] * len(self.automata)
        self._previous: FrozenSet[str] = frozenset()
        self._halted = False

    # ----------------------------------------------------------------------------------------------
    #  Declaration Checks
    # ----------------------------------------------------------------------------------------------

    def _validate(self):
        """Check every signal reference against the declarations."""
        if self.halt_signal is not None:
            self._require_input(self.halt_signal, "halt signal")
        for automaton in self.automata:
            for name in automaton.read_signals() | automaton.pre_signals():
                if name not in self.signals:
                    raise UnknownSignalInGuard(f"Automaton {automaton.name} reads undeclared "
                                               f"signal {name}")
            for emission in automaton.all_emissions():
                self._check_emission(automaton, emission)

    def _require_input(self, name: str, role: str):
        signal = self.signals.get(name)
        if signal is None:
            raise UnknownSignalInGuard(f"The {role} {name} is not declared")
        if signal.direction is not SignalDirection.INPUT:
            raise ValueError(f"The {role} {name} must be an input signal")

    def _check_emission(self, automaton: ControlAutomaton, emission: Emission):
        signal = self.signals.get(emission.signal)
        if signal is None:
            raise UnknownSignalInGuard(f"Automaton {automaton.name} emits undeclared signal "
                                       f"{emission.signal}")
        if signal.direction is SignalDirection.INPUT:
            raise ValueError(f"Automaton {automaton.name} emits input signal {signal.name}")
        if signal.valued != emission.has_payload:
            raise ValueError(f"Automaton {automaton.name}: emission of {signal.name} does not "
                             f"match its kind {signal.kind.value}")
        if emission.copy_of is not None and emission.copy_of not in self.signals:
            raise UnknownSignalInGuard(f"Automaton {automaton.name} copies undeclared signal "
                                       f"{emission.copy_of}")
        if emission.value is not None and not signal.accepts(emission.value):
            raise ValueError(f"Automaton {automaton.name}: constant {emission.value!r} is not a "
                             f"valid payload for {signal.name}")

    # ----------------------------------------------------------------------------------------------
    #  Properties
    # ----------------------------------------------------------------------------------------------

    @property
    def inputs(self) -> FrozenSet[str]:
        """Names of the environment input signals."""
        return self._inputs

    @property
    def outputs(self) -> FrozenSet[str]:
        """Names of the signals the program may emit."""
        return frozenset(self.signals) - self._inputs

    @property
    def halted(self) -> bool:
        """True after the halt signal aborted the program."""
        return self._halted

    @property
    def finite_control(self) -> bool:
        """True if no emission payload is computed by host code."""
        return not any(e.host_evaluated for a in self.automata for e in a.all_emissions())

    @property
    def state_count(self) -> int:
        """Sum of the automata state-set sizes."""
        return sum(len(a.states) for a in self.automata)

    @property
    def suspension_bindings(self) -> Tuple[Tuple[str, str, str], ...]:
        """(automaton, take, cancel) of every bound suspension, in binding order."""
        return tuple((self.automata[i].name, t, c) for i, t, c in self._bindings)

    def automaton(self, name: str) -> ControlAutomaton:
        """Look up an automaton by name."""
        try:
            return self.automata[self._index[name]]
        except KeyError as e:
            raise KeyError(f"No automaton named {name}") from e

    def state_of(self, name: str) -> str:
        """Current control state of an automaton."""
        self.automaton(name)
        return self._states[self._index[name]]

    def is_suspended(self, name: str) -> bool:
        """Current suspension flag of an automaton."""
        self.automaton(name)
        return self._suspended[self._index[name]]

    def fingerprint(self) -> str:
        """Digest of the program structure, stable across processes."""
        if self._fingerprint is None:
            parts = [f"signal {s.name} {s.kind.value} {s.direction.value}"
                     for s in sorted(self.signals.values(), key=lambda s: s.name)]
            parts.extend(a.describe() for a in self.automata)
            parts.extend(f"bind {self.automata[i].name} {t} {c}" for i, t, c in self._bindings)
            parts.append(f"halt {self.halt_signal}")
            self._fingerprint = hashlib.sha256("\n".join(parts).encode()).hexdigest()
        return self._fingerprint

    # ----------------------------------------------------------------------------------------------
    #  Suspension
    # ----------------------------------------------------------------------------------------------

    def _suspendable_index(self, name: str) -> int:
        automaton = self.automaton(name)
        if not automaton.suspendable:
            raise NotSuspendable(f"Automaton {name} is not declared suspendable")
        return self._index[name]

    def suspend(self, name: str):
        """
        Suspend an automaton from the next reaction on: it holds its state and emits nothing.

        Raises:
            NotSuspendable: If the automaton is not declared suspendable.
        """
        self._suspended[self._suspendable_index(name)] = True

    def resume(self, name: str):
        """
        Re-enable a suspended automaton from its held state.

        Raises:
            NotSuspendable: If the automaton is not declared suspendable.
            NotSuspended: If it is not currently suspended.
        """
        index = self._suspendable_index(name)
        if not self._suspended[index]:
            raise NotSuspended(f"Automaton {name} is not suspended")
        self._suspended[index] = False

    def bind_suspension(self, name: str, take: str, cancel: str):
        """
        Let signals drive the suspension of an automaton: presence of take in tick t suspends it
        for tick t + 1 onward, presence of cancel in tick t resumes it for tick t + 1. When both
        are present cancel wins. Binding the same pair twice has no further effect.

        Raises:
            NotSuspendable: If the automaton is not declared suspendable.
            UnknownSignalInGuard: If take or cancel are not declared.
        """
        index = self._suspendable_index(name)
        for signal in (take, cancel):
            if signal not in self.signals:
                raise UnknownSignalInGuard(f"Suspension signal {signal} is not declared")
        if (index, take, cancel) not in self._bindings:
            self._bindings.append((index, take, cancel))
            self._fingerprint = None

    # ----------------------------------------------------------------------------------------------
    #  Snapshot
    # ----------------------------------------------------------------------------------------------

    def snapshot(self) -> GlobalState:
        """Capture the global state."""
        return GlobalState(tuple(self._states), tuple(self._suspended), self._previous,
                           self._halted, tuple(self._index))

    def restore(self, state: GlobalState):
        """
        Reinstate a captured global state.

        Raises:
            IncompatibleSnapshot: If the state belongs to a structurally different program.
        """
        if state.layout and state.layout != tuple(self._index):
            raise IncompatibleSnapshot("Snapshot was taken on a program with different automata")
        if len(state.states) != len(self.automata) or len(state.suspended) != len(self.automata):
            raise IncompatibleSnapshot("Snapshot size does not match the program")
        for automaton, current in zip(self.automata, state.states):
            if current not in automaton.states:
                raise IncompatibleSnapshot(f"State {current} unknown to automaton "
                                           f"{automaton.name}")
        if not state.previous <= self._pre_tracked:
            raise IncompatibleSnapshot("Snapshot tracks signals this program does not read")
        self._states = list(state.states)
        self._suspended = list(state.suspended)
        self._previous = state.previous
        self._halted = state.halted

    def clone(self) -> "Program":
        """An independent program with the same structure and current global state."""
        twin = object.__new__(Program)
        twin.__dict__.update(self.__dict__)
        twin._bindings = list(self._bindings)
        twin._states = list(self._states)
        twin._suspended = list(self._suspended)
        return twin

    # ----------------------------------------------------------------------------------------------
    #  Reaction
    # ----------------------------------------------------------------------------------------------

    def _normalise_inputs(self, inputs: InputSet) -> Dict[str, Any]:
        """Turn the accepted input forms into a name -> payload mapping, checking each one."""
        if inputs is None:
            items = []
        elif isinstance(inputs, Mapping):
            items = list(inputs.items())
        else:
            items = [(i, None) if isinstance(i, str) else (i.name, i.value) for i in inputs]

        present: Dict[str, Any] = {}
        for name, value in items:
            signal = self.signals.get(name)
            if signal is None or signal.direction is not SignalDirection.INPUT:
                raise UndeclaredInput(f"{name} is not a declared input signal")
            if not signal.accepts(value):
                raise UndeclaredInput(f"Invalid payload {value!r} for input {name}")
            if name in present and present[name] != value:
                raise ConflictingValuedEmission(f"Input {name} given twice with unequal payloads")
            present[name] = value
        return present

    def _emit(self, present: Dict[str, Any], emitters: set, owner: str, emission: Emission) -> bool:
        """Add one emission to the valuation; returns True if the signal is new."""
        value = emission.resolve(present)
        signal = self.signals[emission.signal]
        if signal.valued and not signal.accepts(value):
            raise ConflictingValuedEmission(f"{owner} emitted {signal.name} with invalid payload "
                                            f"{value!r}")
        emitters.add((owner, signal.name))
        if signal.name in present:
            if present[signal.name] != value:
                raise ConflictingValuedEmission(
                    f"{signal.name} emitted with payloads {present[signal.name]} and {value} "
                    f"in tick {self.tick}")
            return False
        present[signal.name] = value
        return True

    def _decide(self, automaton: ControlAutomaton, state: str, lookup) -> Tuple[bool, Any]:
        """Return (decided, transition or None) for one automaton under a partial valuation."""
        unknown = False
        for transition in automaton.outgoing(state):
            outcome = transition.guard.evaluate(lookup)
            if outcome is True:
                return True, transition
            if outcome is None:
                unknown = True
        return (not unknown), None

    def react(self, inputs: InputSet = None) -> Reaction:
        """
        Execute one synchronous tick.

        Args:
            inputs: Present environment inputs, as SignalEvents, pure signal names, or a mapping of
                name to payload.

        Returns:
            Reaction: The tick's inputs, outputs and micro-step count.

        Raises:
            UndeclaredInput: If an input is not a declared input or carries a bad payload.
            ProgramHalted: If the halt signal already aborted the program.
            FixpointDivergence: If the reaction has no constructive solution within the cap.
            ConflictingValuedEmission: If a valued signal receives two unequal payloads.
        """
        if self._halted:
            raise ProgramHalted(f"Program halted; reaction at tick {self.tick} refused")
        present = self._normalise_inputs(inputs)
        tick = self.tick
        in_events = frozenset(SignalEvent(n, v, tick) for n, v in present.items())

        if self.halt_signal is not None and self.halt_signal in present:
            self.logger.info(f"Halt signal {self.halt_signal} received at tick {tick}")
            self._halted = True
            self.tick += 1
            return Reaction(tick, in_events, frozenset(), 1)

        emitters: set = set()
        active = [i for i in range(len(self.automata)) if not self._suspended[i]]
        micro_steps = 0
        if any([self._emit(present, emitters, self.automata[i].name, e)
                for i in active for e in self.automata[i].emissions_in(self._states[i])]):
            micro_steps += 1

        absent = set(self._inputs - present.keys())
        previous = self._previous

        def lookup(atom):
            when, name = atom
            if when == 'pre':
                return name in previous
            if name in present:
                return True
            return False if name in absent else None

        undecided = set(active)
        chosen: Dict[int, Optional[Transition]] = {}
        while undecided:
            possible = set()
            for i in undecided:
                for transition in self.automata[i].outgoing(self._states[i]):
                    if transition.guard.evaluate(lookup) is not False:
                        possible.update(transition.emitted)
            absent = set(self.signals) - present.keys() - possible

            decided = {}
            for i in sorted(undecided):
                done, transition = self._decide(self.automata[i], self._states[i], lookup)
                if done:
                    decided[i] = transition
            if not decided:
                names = sorted(self.automata[i].name for i in undecided)
                raise FixpointDivergence(f"No constructive reaction at tick {tick}: automata "
                                         f"{names} wait on each other")

            grew = False
            for i, transition in sorted(decided.items()):
                if transition is not None:
                    for emission in transition.emissions:
                        grew |= self._emit(present, emitters, self.automata[i].name, emission)
            if grew:
                micro_steps += 1
                if micro_steps > self._micro_cap:
                    raise FixpointDivergence(f"Reaction at tick {tick} exceeded "
                                             f"{self._micro_cap} micro-steps")
            chosen.update(decided)
            undecided -= decided.keys()

        # Commit
        for i, transition in chosen.items():
            if transition is not None:
                self._states[i] = transition.target
        for index, take, cancel in self._bindings:
            if cancel in present:
                self._suspended[index] = False
            elif take in present:
                self._suspended[index] = True
        self._previous = frozenset(n for n in self._pre_tracked if n in present)
        self.tick += 1

        outputs = frozenset(SignalEvent(n, v, tick) for n, v in present.items()
                            if n not in self._inputs)
        return Reaction(tick, in_events, outputs, max(micro_steps, 1), tuple(sorted(emitters)))


def declare_program(automata: Sequence[ControlAutomaton], signals: Sequence[SignalId],
                    **kwargs) -> Program:
    """
    Compose automata into a Program with every automaton in its initial state and tick 0.

    Raises:
        DuplicateSignal: If two signals share a name.
        NondeterministicAutomaton: Raised while building an automaton with overlapping guards.
        UnknownSignalInGuard: If a reference is not declared.
    """
    return Program(automata, signals, **kwargs)
