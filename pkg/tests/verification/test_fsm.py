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


import pytest

from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.kernel.automaton import ControlAutomaton, Transition, emit
from reactive_dsp.kernel.guards import TRUE, sig
from reactive_dsp.kernel.program import declare_program
from reactive_dsp.kernel.signals import SignalDirection, SignalKind, pure, valued
from reactive_dsp.scheduling.config import TimingMode
from reactive_dsp.scheduling.drm import build_drm
from reactive_dsp.verification.errors import StateExplosion, UnboundedCounter, UnknownSignal
from reactive_dsp.verification.fsm import (Fsm, FsmTransition, default_alphabet, diameter,
                                           extract_fsm, format_letter, letter, trace_set)
from reactive_dsp.verification.models import control_chain

INPUT = SignalDirection.INPUT


def toggle_program():
    """Flips between OFF and ON on t, emitting 'on' while ON."""
    flips = [Transition('OFF', sig('t'), 'ON'), Transition('ON', sig('t'), 'OFF')]
    toggle = ControlAutomaton('toggle', ['OFF', 'ON'], 'OFF', flips,
                              state_emissions={'ON': [emit('on')]})
    return declare_program([toggle], [pure('t', INPUT), pure('on', SignalDirection.OUTPUT)])


def two_stage():
    """Two-tick control program of a source feeding a sink."""
    return build_drm(control_chain(['a', 'b']), TimingMode.TWO_TICK)


def count_states(program, letters):
    """Reachable global states by depth-first search over snapshots."""
    seen, stack = set(), [program.snapshot()]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        for value in letters:
            program.restore(state)
            program.react(dict(value))
            stack.append(program.snapshot())
    return len(seen)


class TestLetters:
    """Test suite for input letters."""

    def test_sorted_items(self):
        """Letters are sorted (signal, payload) tuples."""
        value = letter(('InitRange', SampleRange(0, 1600)), 'IP_Addr')
        assert value == (('IP_Addr', None), ('InitRange', SampleRange(0, 1600)))
        assert format_letter(value) == "{IP_Addr,InitRange=0:1600}"
        assert format_letter(letter()) == "{}"

    def test_default_alphabet(self):
        """The power set of the inputs, the halt signal excepted."""
        alphabet = default_alphabet(two_stage())
        assert [format_letter(v) for v in alphabet] == \
            ["{}", "{IP_Addr}", "{IP_Addr,InitRange=0:1600}", "{InitRange=0:1600}"]

    def test_integer_inputs(self):
        """Integer inputs take payload 0."""
        automaton = ControlAutomaton('P', ['S'], 'S', [Transition('S', sig('n'), 'S')])
        program = declare_program([automaton], [valued('n', SignalKind.INTEGER, INPUT)])
        assert default_alphabet(program) == ((), (('n', 0),))


class TestFsm:
    """Test suite for the FSM structure."""

    def test_total(self):
        """Every state has one transition per letter."""
        with pytest.raises(ValueError, match="1 transitions for 2 letters"):
            Fsm(frozenset({'x'}), frozenset(), (letter(), letter('x')), ('s',),
                (FsmTransition(0, letter(), frozenset(), 0),))

    def test_unknown_output(self):
        """Transitions only emit declared outputs."""
        with pytest.raises(ValueError, match="undeclared"):
            Fsm(frozenset(), frozenset(), (letter(),), ('s',),
                (FsmTransition(0, letter(), frozenset({'o'}), 0),))

    def test_run(self):
        """run follows the transitions from the initial state."""
        fsm = extract_fsm(toggle_program())
        t = letter('t')
        assert fsm.run([t, letter(), t]) == [frozenset(), frozenset({'on'}), frozenset({'on'})]


class TestExtractFsm:
    """Test suite for FSM extraction."""

    def test_toggle(self):
        """Two states, four transitions."""
        fsm = extract_fsm(toggle_program())
        assert fsm.size == 2
        assert len(fsm.transitions) == 4
        assert fsm.inputs == frozenset({'t'})
        assert fsm.outputs == frozenset({'on'})
        assert diameter(fsm) == 1

    def test_matches_independent_count(self):
        """BFS extraction finds as many states as a depth-first search."""
        program = two_stage()
        letters = default_alphabet(program)
        fsm = extract_fsm(program, letters)
        assert fsm.size == count_states(two_stage(), letters)
        assert fsm.reachable() == list(range(fsm.size))

    def test_workers_do_not_change_numbering(self):
        """State numbering is independent of the worker count."""
        single = extract_fsm(two_stage(), workers=1)
        parallel = extract_fsm(two_stage(), workers=3)
        assert single.states == parallel.states
        assert single.transitions == parallel.transitions

    def test_program_state_restored(self):
        """The program is left where it was."""
        program = two_stage()
        program.react()
        before = program.snapshot()
        extract_fsm(program)
        assert program.snapshot() == before
        assert program.tick == 1

    def test_state_explosion(self):
        """The state cap is enforced."""
        with pytest.raises(StateExplosion, match="More than 3"):
            extract_fsm(two_stage(), max_states=3)

    def test_host_payloads(self):
        """Payloads computed by host code make the state space unbounded."""
        counter = ControlAutomaton('P', ['S'], 'S', [
            Transition('S', TRUE, 'S', (emit('n', compute=lambda values: 1),))])
        program = declare_program([counter], [valued('n', SignalKind.INTEGER,
                                                     SignalDirection.OUTPUT)])
        with pytest.raises(UnboundedCounter, match="host code"):
            extract_fsm(program)

    def test_unknown_letter(self):
        """Letters only use inputs."""
        with pytest.raises(UnknownSignal, match="x is not an input"):
            extract_fsm(toggle_program(), [letter('x')])

    def test_logs_summary(self, mock_logger):
        """The extraction summary goes to the injected logger."""
        extract_fsm(toggle_program(), logger=mock_logger)
        assert "2 states" in mock_logger.info.call_args[0][0]


class TestTraceSet:
    """Test suite for bounded trace sets."""

    def test_counts(self):
        """With two letters there are 2^k traces of length k."""
        traces = trace_set(extract_fsm(toggle_program()), 3)
        assert len(traces) == 1 + 2 + 4 + 8

    def test_brute_force_oracle(self):
        """The FSM reproduces the program's reactions on every short input sequence."""
        program = two_stage()
        fsm = extract_fsm(program)
        for trace in trace_set(fsm, 4):
            replay = two_stage()
            for value, outputs in trace:
                assert replay.react(dict(value)).output_names == outputs
