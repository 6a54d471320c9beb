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

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Tuple

import networkx as nx

from reactive_dsp.kernel.errors import NondeterministicAutomaton, UnreachableState
from reactive_dsp.kernel.guards import Guard, jointly_satisfiable


@dataclass(frozen=True)
class Emission:
    """
    Template of a signal emission. The payload is either a constant (`value`), the payload of
    another signal present in the same tick (`copy_of`, the `?X` form) or the result of a host
    function applied to the payloads present so far (`compute`). Pure signals take none of them.
    """
    signal: str
    value: Any = None
    copy_of: Optional[str] = None
    compute: Optional[Callable[[Mapping[str, Any]], Any]] = None

    @property
    def has_payload(self) -> bool:
        """True if any payload form is set."""
        return self.value is not None or self.copy_of is not None or self.compute is not None

    @property
    def host_evaluated(self) -> bool:
        """True when the payload comes from host code rather than the control program."""
        return self.compute is not None

    def resolve(self, values: Mapping[str, Any]) -> Any:
        """
        Produce the payload given the payloads of the signals present so far.

        Raises:
            RuntimeError: If the copied signal is not present.
        """
        if self.compute is not None:
            return self.compute(values)
        if self.copy_of is not None:
            if self.copy_of not in values:
                raise RuntimeError(f"Emission of {self.signal} copies absent signal "
                                   f"{self.copy_of}")
            return values[self.copy_of]
        return self.value

    def __str__(self):
        if self.copy_of is not None:
            return f"{self.signal}(?{self.copy_of})"
        if self.compute is not None:
            return f"{self.signal}(<host>)"
        return self.signal if self.value is None else f"{self.signal}({self.value})"


def emit(signal: str, value: Any = None, *, copy_of: Optional[str] = None,
         compute: Optional[Callable[[Mapping[str, Any]], Any]] = None) -> Emission:
    """Shorthand for an Emission."""
    return Emission(signal, value, copy_of, compute)


@dataclass(frozen=True)
class Transition:
    """A guarded transition; taking it emits `emissions` and moves to `target`."""
    source: str
    guard: Guard
    target: str
    emissions: Tuple[Emission, ...] = ()

    @property
    def emitted(self) -> Tuple[str, ...]:
        """Names of the emitted signals."""
        return tuple(e.signal for e in self.emissions)


class ControlAutomaton:
    """
    A guarded finite automaton: the unit of control-plane composition.

    Each tick the automaton either takes the single transition of its current state whose guard
    holds, or stays where it is and emits nothing beyond its state emissions. State emissions are
    emitted in every tick the automaton is active in that state (await/pause bodies such as
    'ready to receive').

    Note:
        Construction validates the automaton: the initial state is declared, transitions only use
        declared states, no two guards of one state can hold together and every state is
        reachable from the initial one.
    """

    def __init__(self, name: str, states: Sequence[str], initial: str,
                 transitions: Iterable[Transition],
                 state_emissions: Optional[Mapping[str, Iterable[Emission]]] = None,
                 suspendable: bool = False):
        """
        Args:
            name(str): Unique automaton name within a program.
            states(Sequence[str]): The finite state set.
            initial(str): Initial state.
            transitions(Iterable[Transition]): Guarded transitions.
            state_emissions(Mapping[str, Iterable[Emission]]): Per-state emissions.
            suspendable(bool): Whether the automaton may be suspended (Rendez-Vous).

        Raises:
            ValueError: On undeclared states.
            NondeterministicAutomaton: If two guards of one state overlap.
            UnreachableState: If a state cannot be reached from the initial state.
        """
        self.name = name
        self.states: Tuple[str, ...] = tuple(states)
        self.initial = initial
        self.transitions: Tuple[Transition, ...] = tuple(transitions)
        self.state_emissions = {state: tuple(emissions)
                                for state, emissions in (state_emissions or {}).items()
                                if tuple(emissions)}
        self.suspendable = suspendable

        self._outgoing = {state: [] for state in self.states}
        self._validate_states()
        for transition in self.transitions:
            self._outgoing[transition.source].append(transition)
        self._outgoing = {state: tuple(ts) for state, ts in self._outgoing.items()}
        self._check_determinism()
        self._check_reachability()

    # ----------------------------------------------------------------------------------------------
    #  Query Methods
    # ----------------------------------------------------------------------------------------------

    def outgoing(self, state: str) -> Tuple[Transition, ...]:
        """Transitions leaving state."""
        return self._outgoing[state]

    def emissions_in(self, state: str) -> Tuple[Emission, ...]:
        """State emissions of state."""
        return self.state_emissions.get(state, ())

    def read_signals(self) -> frozenset:
        """Signals read by any guard in the current tick."""
        return frozenset().union(*(t.guard.signals() for t in self.transitions))

    def pre_signals(self) -> frozenset:
        """Signals read by any guard through pre(...)."""
        return frozenset().union(*(t.guard.pre_signals() for t in self.transitions))

    def all_emissions(self) -> Tuple[Emission, ...]:
        """Every emission template, from transitions and states."""
        emissions = [e for t in self.transitions for e in t.emissions]
        emissions.extend(e for es in self.state_emissions.values() for e in es)
        return tuple(emissions)

    def emitted_signals(self) -> frozenset:
        """Names the automaton may emit."""
        return frozenset(e.signal for e in self.all_emissions())

    def describe(self) -> str:
        """Canonical text form, used for program fingerprints."""
        lines = [f"automaton {self.name} initial={self.initial} suspendable={self.suspendable}"]
        for state in self.states:
            emitted = ",".join(str(e) for e in self.emissions_in(state))
            lines.append(f"  state {state} [{emitted}]")
            for t in self._outgoing[state]:
                emitted = ",".join(str(e) for e in t.emissions)
                lines.append(f"    {t.guard} -> {t.target} [{emitted}]")
        return "\n".join(lines)

    # ----------------------------------------------------------------------------------------------
    #  Validation Methods
    # ----------------------------------------------------------------------------------------------

    def _validate_states(self):
        """Check the state set and every transition endpoint."""
        if len(set(self.states)) != len(self.states):
            raise ValueError(f"Automaton {self.name} declares duplicate states")
        if self.initial not in self._outgoing:
            raise ValueError(f"Automaton {self.name}: initial state {self.initial} not declared")
        for transition in self.transitions:
            for state in (transition.source, transition.target):
                if state not in self._outgoing:
                    raise ValueError(f"Automaton {self.name}: transition uses undeclared state "
                                     f"{state}")
        for state in self.state_emissions:
            if state not in self._outgoing:
                raise ValueError(f"Automaton {self.name}: emissions for undeclared state {state}")

    def _check_determinism(self):
        """At most one guard per state may hold under any valuation."""
        for state, transitions in self._outgoing.items():
            for i, first in enumerate(transitions):
                for second in transitions[i + 1:]:
                    witness = jointly_satisfiable(first.guard, second.guard)
                    if witness is not None:
                        raise NondeterministicAutomaton(
                            f"Automaton {self.name}, state {state}: guards '{first.guard}' and "
                            f"'{second.guard}' both hold under {witness}")

    def _check_reachability(self):
        """Every state must be reachable from the initial state."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.states)
        graph.add_edges_from((t.source, t.target) for t in self.transitions)
        reachable = nx.descendants(graph, self.initial) | {self.initial}
        unreachable = [state for state in self.states if state not in reachable]
        if unreachable:
            raise UnreachableState(f"Automaton {self.name}: unreachable states {unreachable}")

    def __repr__(self):
        return (f"ControlAutomaton({self.name!r}, states={len(self.states)}, "
                f"transitions={len(self.transitions)})")
