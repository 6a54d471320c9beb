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

# pylint: disable=protected-access

import numpy as np
import pytest

from reactive_dsp.kernel.automaton import ControlAutomaton, Transition, emit
from reactive_dsp.kernel.config import KernelConfig
from reactive_dsp.kernel.errors import (ConflictingValuedEmission, DuplicateSignal,
                                        FixpointDivergence, IncompatibleSnapshot, NotSuspendable,
                                        NotSuspended, ProgramHalted, UndeclaredInput,
                                        UnknownSignalInGuard)
from reactive_dsp.kernel.guards import TRUE, pre, sig
from reactive_dsp.kernel.program import GlobalState, Program, declare_program
from reactive_dsp.kernel.signals import SignalDirection, SignalKind, pure, valued

INPUT = SignalDirection.INPUT


def toggle():
    """Two-state automaton flipping on input t."""
    return ControlAutomaton('toggle', ['OFF', 'ON'], 'OFF',
                            [Transition('OFF', sig('t'), 'ON'), Transition('ON', sig('t'), 'OFF')])


@pytest.fixture
def toggle_program():
    """A program holding only the toggle."""
    return declare_program([toggle()], [pure('t', INPUT)])


@pytest.fixture
def chain_program():
    """P emits A on GO, Q emits B on A."""
    p = ControlAutomaton('P', ['S'], 'S', [Transition('S', sig('GO'), 'S', (emit('A'),))])
    q = ControlAutomaton('Q', ['S'], 'S', [Transition('S', sig('A'), 'S', (emit('B'),))])
    return declare_program([p, q], [pure('GO', INPUT), pure('A'), pure('B')])


@pytest.fixture
def counter_program():
    """A suspendable automaton cycling through three states, emitting A every tick."""
    counter = ControlAutomaton('counter', ['C0', 'C1', 'C2'], 'C0',
                               [Transition('C0', TRUE, 'C1', (emit('A'),)),
                                Transition('C1', TRUE, 'C2', (emit('A'),)),
                                Transition('C2', TRUE, 'C0', (emit('A'),))],
                               suspendable=True)
    return declare_program([counter], [pure('A', SignalDirection.OUTPUT), pure('take', INPUT),
                                       pure('cancel', INPUT)])


class TestDeclareProgram:
    """Test suite for program declaration checks."""

    def test_toggle_program(self, toggle_program):
        """A toggle and one pure signal give a two-state program at tick 0."""
        assert toggle_program.state_count == 2
        assert toggle_program.tick == 0
        assert toggle_program.state_of('toggle') == 'OFF'
        assert toggle_program.inputs == frozenset({'t'})

    def test_duplicate_signal(self):
        """Two signals with one name are rejected."""
        with pytest.raises(DuplicateSignal, match="t"):
            declare_program([toggle()], [pure('t', INPUT), pure('t')])

    def test_unknown_signal_in_guard(self):
        """Guards may only read declared signals."""
        with pytest.raises(UnknownSignalInGuard, match="undeclared signal t"):
            declare_program([toggle()], [])

    def test_unknown_emitted_signal(self):
        """Emissions must be declared."""
        automaton = ControlAutomaton('P', ['S'], 'S', [Transition('S', TRUE, 'S', (emit('X'),))])
        with pytest.raises(UnknownSignalInGuard, match="emits undeclared signal X"):
            declare_program([automaton], [])

    def test_emitting_input_rejected(self):
        """The program may not drive an input."""
        automaton = ControlAutomaton('P', ['S'], 'S', [Transition('S', TRUE, 'S', (emit('X'),))])
        with pytest.raises(ValueError, match="emits input signal"):
            declare_program([automaton], [pure('X', INPUT)])

    def test_payload_kind_mismatch(self):
        """A valued signal needs a payload form, a pure one must have none."""
        automaton = ControlAutomaton('P', ['S'], 'S', [Transition('S', TRUE, 'S', (emit('V'),))])
        with pytest.raises(ValueError, match="does not match its kind"):
            declare_program([automaton], [valued('V', SignalKind.INTEGER)])

    def test_duplicate_automaton_names(self):
        """Automaton names are unique."""
        with pytest.raises(ValueError, match="unique"):
            declare_program([toggle(), toggle()], [pure('t', INPUT)])

    def test_fingerprint_is_structural(self):
        """Equal structures have equal fingerprints; bindings change it."""
        first = declare_program([toggle()], [pure('t', INPUT)])
        second = declare_program([toggle()], [pure('t', INPUT)])
        assert first.fingerprint() == second.fingerprint()
        assert first.finite_control


class TestReact:
    """Test suite for the synchronous reaction."""

    def test_toggle_flips(self, toggle_program):
        """Input t flips the state and emits nothing."""
        reaction = toggle_program.react({'t'})
        assert reaction.tick == 0
        assert reaction.outputs == frozenset()
        assert reaction.micro_steps == 1
        assert toggle_program.state_of('toggle') == 'ON'
        assert toggle_program.tick == 1

    def test_toggle_holds_without_input(self, toggle_program):
        """Without t the toggle stays."""
        toggle_program.react()
        assert toggle_program.state_of('toggle') == 'OFF'

    def test_chain_in_one_tick(self, chain_program):
        """A and B are both emitted in the same tick over two micro-steps."""
        reaction = chain_program.react({'GO'})
        assert reaction.output_names == frozenset({'A', 'B'})
        assert reaction.micro_steps == 2
        assert reaction.emitted_by('Q') == frozenset({'B'})

    def test_undeclared_input(self, chain_program):
        """Local signals cannot be fed by the environment."""
        with pytest.raises(UndeclaredInput, match="A is not a declared input"):
            chain_program.react({'A'})

    def test_bad_input_payload(self):
        """Inputs carry payloads of their declared kind."""
        program = declare_program([], [valued('N', SignalKind.INTEGER, INPUT)])
        with pytest.raises(UndeclaredInput, match="Invalid payload"):
            program.react({'N': 'x'})

    def test_absence_reaction(self):
        """An automaton reacting to the absence of a signal nobody can emit."""
        p = ControlAutomaton('P', ['S'], 'S', [Transition('S', ~sig('X'), 'S', (emit('Y'),))])
        program = declare_program([p], [pure('X', INPUT), pure('Y')])
        assert program.react().emitted('Y')
        assert not program.react({'X'}).emitted('Y')

    def test_non_constructive_cycle(self):
        """Mutual negative dependency has no constructive solution."""
        p = ControlAutomaton('P', ['S'], 'S', [Transition('S', ~sig('B'), 'S', (emit('A'),))])
        q = ControlAutomaton('Q', ['S'], 'S', [Transition('S', ~sig('A'), 'S', (emit('B'),))])
        program = declare_program([p, q], [pure('A'), pure('B')])
        with pytest.raises(FixpointDivergence, match="wait on each other"):
            program.react()

    def test_micro_step_cap(self):
        """A reaction needing more micro-steps than the cap diverges."""
        p = ControlAutomaton('P', ['S'], 'S', [Transition('S', sig('GO'), 'S', (emit('A'),))])
        q = ControlAutomaton('Q', ['S'], 'S', [Transition('S', sig('A'), 'S', (emit('B'),))])
        program = declare_program([p, q], [pure('GO', INPUT), pure('A'), pure('B')],
                                  config=KernelConfig(max_micro_steps=1))
        with pytest.raises(FixpointDivergence, match="exceeded 1 micro-steps"):
            program.react({'GO'})

    def test_conflicting_valued_emission(self):
        """Unequal payloads on one signal in one tick are an error."""
        p = ControlAutomaton('P', ['S'], 'S', [Transition('S', TRUE, 'S', (emit('V', 1),))])
        q = ControlAutomaton('Q', ['S'], 'S', [Transition('S', TRUE, 'S', (emit('V', 2),))])
        program = declare_program([p, q], [valued('V', SignalKind.INTEGER)])
        with pytest.raises(ConflictingValuedEmission, match="V emitted with payloads"):
            program.react()

    def test_equal_valued_emission_is_idempotent(self):
        """Equal payloads merge into one event."""
        p = ControlAutomaton('P', ['S'], 'S', [Transition('S', TRUE, 'S', (emit('V', 1),))])
        q = ControlAutomaton('Q', ['S'], 'S', [Transition('S', TRUE, 'S', (emit('V', 1),))])
        program = declare_program([p, q], [valued('V', SignalKind.INTEGER)])
        reaction = program.react()
        assert len(reaction.outputs) == 1
        assert reaction.value('V') == 1

    def test_copy_emission(self):
        """?X copies the payload of an input."""
        p = ControlAutomaton('P', ['S'], 'S', [Transition('S', sig('N'), 'S',
                                                          (emit('M', copy_of='N'),))])
        program = declare_program([p], [valued('N', SignalKind.INTEGER, INPUT),
                                        valued('M', SignalKind.INTEGER)])
        assert program.react({'N': 9}).value('M') == 9

    def test_pre_guard(self):
        """pre(A) alternates an emission every other tick."""
        p = ControlAutomaton('P', ['S'], 'S', [Transition('S', ~pre('A'), 'S', (emit('A'),)),
                                                Transition('S', pre('A'), 'S')])
        program = declare_program([p], [pure('A')])
        assert [program.react().emitted('A') for _ in range(4)] == [True, False, True, False]

    def test_state_emissions(self):
        """Moore emissions are emitted while the automaton rests in the state."""
        p = ControlAutomaton('P', ['IDLE', 'BUSY'], 'IDLE',
                             [Transition('IDLE', sig('go'), 'BUSY')],
                             state_emissions={'IDLE': [emit('Ready')]})
        program = declare_program([p], [pure('go', INPUT), pure('Ready')])
        assert program.react().emitted('Ready')
        assert program.react({'go'}).emitted('Ready')
        assert not program.react().emitted('Ready')

    def test_synchrony(self):
        """A transition committed in tick t is invisible to guards of tick t."""
        p = ControlAutomaton('P', ['A', 'B'], 'A', [Transition('A', TRUE, 'B')],
                             state_emissions={'B': [emit('InB')]})
        program = declare_program([p], [pure('InB')])
        assert not program.react().emitted('InB')
        assert program.react().emitted('InB')

    def test_halt_signal(self):
        """The halt input aborts the program; later reactions are refused."""
        program = declare_program([toggle()], [pure('t', INPUT), pure('quit', INPUT)],
                                  halt_signal='quit')
        reaction = program.react({'t', 'quit'})
        assert reaction.outputs == frozenset()
        assert program.state_of('toggle') == 'OFF'
        assert program.halted
        with pytest.raises(ProgramHalted):
            program.react()

    def test_determinism_probes(self, chain_program):
        """Random (state, input) probes repeat identically and respect the micro-step bound."""
        rng = np.random.default_rng(7)
        for _ in range(200):
            inputs = {'GO'} if rng.integers(2) else set()
            state = chain_program.snapshot()
            first = chain_program.react(inputs)
            after = chain_program.snapshot()
            chain_program.restore(state)
            second = chain_program.react(inputs)
            assert first.outputs == second.outputs
            assert first.micro_steps == second.micro_steps
            assert chain_program.snapshot() == after
            assert first.micro_steps <= len(chain_program.signals) + 1


class TestSuspension:
    """Test suite for suspend, resume and suspension bindings."""

    def test_suspended_automaton_is_frozen(self, counter_program):
        """Three suspended ticks leave the state unchanged and emit nothing."""
        counter_program.react()
        counter_program.suspend('counter')
        for _ in range(3):
            reaction = counter_program.react()
            assert reaction.emitted_by('counter') == frozenset()
            assert counter_program.state_of('counter') == 'C1'

    def test_suspend_then_resume(self, counter_program):
        """Suspend and resume before one tick leaves the tick untouched."""
        counter_program.suspend('counter')
        counter_program.resume('counter')
        assert counter_program.react().emitted('A')
        assert counter_program.state_of('counter') == 'C1'

    def test_not_suspendable(self, toggle_program):
        """Only suspendable automata may be suspended."""
        with pytest.raises(NotSuspendable, match="toggle"):
            toggle_program.suspend('toggle')

    def test_resume_not_suspended(self, counter_program):
        """Resuming a running automaton is an error."""
        with pytest.raises(NotSuspended, match="counter"):
            counter_program.resume('counter')

    def test_take_and_cancel_delay_emission(self):
        """Take at tick t and cancel at t+3 delay the emission until t+4."""
        up = ControlAutomaton('up', ['IDLE', 'ARMED'], 'IDLE',
                              [Transition('IDLE', sig('go'), 'ARMED'),
                               Transition('ARMED', TRUE, 'IDLE', (emit('Compute'),))],
                              suspendable=True)
        program = declare_program([up], [pure('go', INPUT), pure('take', INPUT),
                                         pure('cancel', INPUT), pure('Compute')])
        program.bind_suspension('up', 'take', 'cancel')
        program.bind_suspension('up', 'take', 'cancel')
        feed = [{'go', 'take'}, set(), set(), {'cancel'}, set()]
        emitted = [program.react(inputs).emitted('Compute') for inputs in feed]
        assert emitted == [False, False, False, False, True]

    def test_cancel_wins_over_take(self, counter_program):
        """Take and cancel in one tick leave the automaton running."""
        counter_program.bind_suspension('counter', 'take', 'cancel')
        counter_program.react({'take', 'cancel'})
        assert not counter_program.is_suspended('counter')

    def test_binding_requires_declared_signals(self, counter_program):
        """Suspension signals must be declared."""
        with pytest.raises(UnknownSignalInGuard, match="nope"):
            counter_program.bind_suspension('counter', 'nope', 'cancel')


class TestSnapshot:
    """Test suite for snapshot and restore."""

    def test_fresh_snapshot(self, toggle_program):
        """A fresh program is in its initial states."""
        state = toggle_program.snapshot()
        assert state.states == ('OFF',)
        assert state.suspended == (False,)
        assert state.state_of('toggle') == 'OFF'

    def test_restore_is_inverse(self, counter_program):
        """snapshot, restore, snapshot is a fixed point."""
        counter_program.react()
        counter_program.suspend('counter')
        state = counter_program.snapshot()
        counter_program.resume('counter')
        counter_program.react()
        counter_program.restore(state)
        assert counter_program.snapshot() == state

    def test_replay_after_restore(self, chain_program):
        """Restoring and reacting again gives the identical reaction."""
        state = chain_program.snapshot()
        first = chain_program.react({'GO'})
        chain_program.restore(state)
        second = chain_program.react({'GO'})
        assert (second.inputs, second.outputs, second.micro_steps, second.emitters) == \
            (first.inputs, first.outputs, first.micro_steps, first.emitters)

    def test_enumerate_toggle(self, toggle_program):
        """Breadth-first enumeration over {{}, {t}} finds two global states."""
        seen = {toggle_program.snapshot()}
        frontier = list(seen)
        while frontier:
            state = frontier.pop()
            for letter in (set(), {'t'}):
                toggle_program.restore(state)
                toggle_program.react(letter)
                successor = toggle_program.snapshot()
                if successor not in seen:
                    seen.add(successor)
                    frontier.append(successor)
        assert len(seen) == 2

    def test_incompatible_snapshot(self, toggle_program, chain_program):
        """A snapshot of another program is refused."""
        with pytest.raises(IncompatibleSnapshot):
            toggle_program.restore(chain_program.snapshot())
        with pytest.raises(IncompatibleSnapshot, match="unknown to automaton"):
            toggle_program.restore(GlobalState(('NOPE',), (False,)))

    def test_clone_is_independent(self, toggle_program):
        """A clone reacts without touching the original."""
        twin = toggle_program.clone()
        twin.react({'t'})
        assert twin.state_of('toggle') == 'ON'
        assert toggle_program.state_of('toggle') == 'OFF'
        assert isinstance(twin, Program)
