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
Flat finite state machines extracted from control programs.

Extraction enumerates the reachable global states breadth first: from every state, each letter of
the input alphabet is applied after restoring the state's snapshot. Letters are visited in
lexicographic order, so state numbering is reproducible and does not depend on the number of
workers expanding a BFS level.
"""

import itertools
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import (Any, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set,
                    Tuple)

import networkx as nx
import psutil

from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.kernel.program import GlobalState, Program
from reactive_dsp.kernel.signals import SignalKind
from reactive_dsp.verification.errors import StateExplosion, UnboundedCounter, UnknownSignal

Letter = Tuple[Tuple[str, Any], ...]
Trace = Tuple[Tuple[Letter, FrozenSet[str]], ...]


# --------------------------------------------------------------------------------------------------
#  Letters
# --------------------------------------------------------------------------------------------------

def letter(*items: str | Tuple[str, Any]) -> Letter:
    """Build a letter from signal names and (name, payload) pairs."""
    pairs = {(item, None) if isinstance(item, str) else tuple(item) for item in items}
    return tuple(sorted(pairs, key=lambda p: (p[0], _text(p[1]))))


def _text(value: Any) -> str:
    return "" if value is None else str(value)


def letter_key(value: Letter) -> Tuple[Tuple[str, str], ...]:
    """Sort key of a letter: lexicographic on (signal, payload text) pairs."""
    return tuple((name, _text(payload)) for name, payload in value)


def letter_items(value: Letter) -> List[str]:
    """Text items of a letter, e.g. ['IP_Addr', 'InitRange=0:1600']."""
    return [name if payload is None else f"{name}={payload}" for name, payload in value]


def format_letter(value: Letter) -> str:
    """Compact text form, e.g. '{IP_Addr,InitRange=0:1600}'."""
    return "{" + ",".join(letter_items(value)) + "}"


def default_alphabet(program: Program,
                     init_range: SampleRange = SampleRange(0, 1600)) -> Tuple[Letter, ...]:
    """
    Power set of the program inputs, the halt signal excepted. Range inputs carry init_range and
    integer inputs 0.
    """
    pairs = []
    for name in sorted(program.inputs - {program.halt_signal}):
        match program.signals[name].kind:
            case SignalKind.PURE:
                pairs.append((name, None))
            case SignalKind.RANGE:
                pairs.append((name, init_range))
            case SignalKind.INTEGER:
                pairs.append((name, 0))
    subsets = itertools.chain.from_iterable(
        itertools.combinations(pairs, size) for size in range(len(pairs) + 1))
    return tuple(sorted((tuple(s) for s in subsets), key=letter_key))


# --------------------------------------------------------------------------------------------------
#  FSM
# --------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class FsmTransition:
    """(s, i, o, s'): from state `source` under `letter`, emit `outputs` and move to `target`."""
    source: int
    letter: Letter
    outputs: FrozenSet[str]
    target: int


@dataclass(frozen=True)
class Fsm:
    """
    A deterministic Mealy machine (I, O, S, s0, T). States are numbered by their position in
    `states`, whose entries label them (global states for extracted machines).

    Raises:
        ValueError: If T is not a total function over states and letters, or refers to unknown
            states or signals.
    """
    inputs: FrozenSet[str]
    outputs: FrozenSet[str]
    alphabet: Tuple[Letter, ...]
    states: Tuple[Hashable, ...]
    transitions: Tuple[FsmTransition, ...]
    initial: int = 0
    _table: Dict[int, Dict[Letter, FsmTransition]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'alphabet', tuple(sorted(self.alphabet, key=letter_key)))
        if not 0 <= self.initial < len(self.states):
            raise ValueError(f"Initial state {self.initial} out of range")
        known = set(self.alphabet)
        for value in self.alphabet:
            undeclared = {name for name, _ in value} - self.inputs
            if undeclared:
                raise ValueError(f"Letter {format_letter(value)} uses non-inputs {undeclared}")
        table: Dict[int, Dict[Letter, FsmTransition]] = {s: {} for s in range(len(self.states))}
        for t in self.transitions:
            if t.source not in table or t.target not in table:
                raise ValueError(f"Transition {t.source}->{t.target} leaves the state set")
            if t.letter not in known:
                raise ValueError(f"Transition letter {format_letter(t.letter)} not in the alphabet")
            if not t.outputs <= self.outputs:
                raise ValueError(f"Transition emits undeclared {sorted(t.outputs - self.outputs)}")
            if t.letter in table[t.source]:
                raise ValueError(f"Two transitions from {t.source} on {format_letter(t.letter)}")
            table[t.source][t.letter] = t
        for state, row in table.items():
            if len(row) != len(self.alphabet):
                raise ValueError(f"State {state} has {len(row)} transitions for "
                                 f"{len(self.alphabet)} letters")
        object.__setattr__(self, '_table', table)

    @property
    def size(self) -> int:
        """|S|."""
        return len(self.states)

    def step(self, state: int, value: Letter) -> FsmTransition:
        """The transition taken from state on a letter."""
        return self._table[state][value]

    def successors(self, state: int) -> List[FsmTransition]:
        """Transitions of a state in alphabet order."""
        row = self._table[state]
        return [row[value] for value in self.alphabet]

    def run(self, letters: Iterable[Letter]) -> List[FrozenSet[str]]:
        """Outputs produced by a letter sequence from the initial state."""
        state, produced = self.initial, []
        for value in letters:
            t = self.step(state, value)
            produced.append(t.outputs)
            state = t.target
        return produced

    def reachable(self) -> List[int]:
        """Reachable states in BFS order from the initial state."""
        order, seen = [self.initial], {self.initial}
        for state in order:
            for t in self.successors(state):
                if t.target not in seen:
                    seen.add(t.target)
                    order.append(t.target)
        return order

    def graph(self) -> nx.DiGraph:
        """State graph, letters dropped."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.size))
        graph.add_edges_from((t.source, t.target) for t in self.transitions)
        return graph


def diameter(fsm: Fsm) -> int:
    """Largest BFS distance from the initial state to a reachable state."""
    return max(nx.single_source_shortest_path_length(fsm.graph(), fsm.initial).values())


def trace_set(fsm: Fsm, depth: int) -> Set[Trace]:
    """Every (letter, outputs) sequence of length at most depth from the initial state."""
    traces: Set[Trace] = {()}
    frontier = deque([((), fsm.initial)])
    while frontier:
        trace, state = frontier.popleft()
        if len(trace) == depth:
            continue
        for t in fsm.successors(state):
            extended = trace + ((t.letter, t.outputs),)
            traces.add(extended)
            frontier.append((extended, t.target))
    return traces


# --------------------------------------------------------------------------------------------------
#  Extraction
# --------------------------------------------------------------------------------------------------

Successor = Tuple[int, int, FrozenSet[str], GlobalState]


def _expand(program: Program, states: Sequence[GlobalState], ids: Sequence[int],
            letters: Sequence[Letter]) -> List[Successor]:
    """Successors of a slice of the frontier, in (state, letter) order."""
    found = []
    for sid in ids:
        state = states[sid]
        for li, value in enumerate(letters):
            if state.halted:
                found.append((sid, li, frozenset(), state))
                continue
            program.restore(state)
            reaction = program.react(dict(value))
            found.append((sid, li, reaction.output_names, program.snapshot()))
    return found


def extract_fsm(program: Program, alphabet: Optional[Iterable[Letter]] = None, *,
                max_states: int = 5_000_000, workers: int = 1,
                logger: Optional[logging.Logger] = None) -> Fsm:
    """
    Enumerate the reachable behaviour of a program from its current global state.

    Args:
        program(Program): A finite-control program; its state is restored afterwards.
        alphabet(Iterable[Letter]): Input letters; default_alphabet(program) when omitted.
        max_states(int): Cap on reachable states.
        workers(int): Threads expanding each BFS level (0 = one per physical core).
        logger(logging.Logger): Optional logger.

    Returns:
        Fsm: Reachable states numbered in BFS order, the starting state being 0.

    Raises:
        UnboundedCounter: If emission payloads are computed by host code.
        UnknownSignal: If a letter names a signal that is not a program input.
        StateExplosion: If more than max_states states are reachable.
    """
    logger = logger or logging.getLogger(__name__)
    if not program.finite_control:
        raise UnboundedCounter("Program payloads are computed by host code; its control state "
                               "space cannot be enumerated")
    letters = tuple(sorted(set(alphabet if alphabet is not None else default_alphabet(program)),
                           key=letter_key))
    if not letters:
        raise ValueError("Extraction needs at least one input letter")
    for value in letters:
        for name, _ in value:
            if name not in program.inputs:
                raise UnknownSignal(f"Letter {format_letter(value)}: {name} is not an input")
    workers = workers or psutil.cpu_count(logical=False) or 1

    saved, saved_tick = program.snapshot(), program.tick
    states: List[GlobalState] = [saved]
    index: Dict[GlobalState, int] = {saved: 0}
    transitions: List[FsmTransition] = []
    frontier = [0]
    clones = [program.clone() for _ in range(workers)] if workers > 1 else [program]
    executor = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        level = 0
        while frontier:
            if executor is None:
                found = _expand(program, states, frontier, letters)
            else:
                chunk = -(-len(frontier) // workers)
                slices = [frontier[i:i + chunk] for i in range(0, len(frontier), chunk)]
                found = [s for part in executor.map(_expand, clones, [states] * len(slices),
                                                    slices, [letters] * len(slices))
                         for s in part]
            frontier = []
            for sid, li, outputs, successor in found:
                target = index.get(successor)
                if target is None:
                    if len(states) >= max_states:
                        raise StateExplosion(f"More than {max_states} reachable states")
                    target = index[successor] = len(states)
                    states.append(successor)
                    frontier.append(target)
                transitions.append(FsmTransition(sid, letters[li], outputs, target))
            level += 1
            logger.debug(f"BFS level {level}: {len(states)} states, {len(frontier)} new")
    finally:
        if executor is not None:
            executor.shutdown()
        program.restore(saved)
        program.tick = saved_tick

    fsm = Fsm(frozenset(program.inputs), frozenset(program.outputs), letters, tuple(states),
              tuple(transitions))
    logger.info(f"Extracted FSM: {fsm.size} states, {len(transitions)} transitions over "
                f"{len(letters)} letters")
    return fsm
