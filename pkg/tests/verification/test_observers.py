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

from reactive_dsp.kernel.automaton import ControlAutomaton, Transition, emit
from reactive_dsp.kernel.guards import sig
from reactive_dsp.kernel.program import declare_program
from reactive_dsp.kernel.signals import SignalDirection, pure
from reactive_dsp.verification.compose import compose
from reactive_dsp.verification.errors import UnknownSignal
from reactive_dsp.verification.observers import (ALIASES, S1_VIOLATED, S2_VIOLATED, S3_VIOLATED,
                                                 ObserverSpec, make_observer_s1,
                                                 make_observer_s2, make_observer_s3,
                                                 make_response_observer)

INPUT = SignalDirection.INPUT


def inputs_program(*names):
    """A program whose only behaviour is to accept the given inputs."""
    idle = ControlAutomaton('idle', ['S'], 'S', [])
    return declare_program([idle], [pure(n, INPUT) for n in names])


def violations(program, letters, signal):
    """Ticks at which signal is emitted when the letters are fed one per tick."""
    return [r.tick for r in (program.react(list(value)) for value in letters) if r.emitted(signal)]


class TestObserverSpec:
    """Test suite for observer descriptions."""

    def test_only_violation_emitted(self):
        """Observers may not emit anything but their violation."""
        noisy = ControlAutomaton('N', ['S'], 'S', [Transition('S', sig('x'), 'S', (emit('y'),))])
        with pytest.raises(ValueError, match="emits \\['y'\\]"):
            ObserverSpec('N', (noisy,), pure('V', SignalDirection.OUTPUT))

    def test_needs_automaton(self):
        """An observer has at least one automaton."""
        with pytest.raises(ValueError, match="no automaton"):
            ObserverSpec('N', (), pure('V', SignalDirection.OUTPUT))

    def test_aliases(self):
        """The violation names have long-form aliases."""
        assert ALIASES[S1_VIOLATED] == 'violated_deadlockfreedom'
        assert ALIASES[S2_VIOLATED] == 'violated_correctness'
        assert ALIASES[S3_VIOLATED] == 'violated_liveness'


class TestObserverS1:
    """Test suite for the deadlock-freedom observer."""

    @pytest.fixture
    def observed(self):
        """S1 over edge u->v of a program driven by its inputs."""
        program = inputs_program('Compute_u2v', 'Ready2Receive_v')
        return compose(program, [make_observer_s1(program, [('u', 'v')])])

    def test_compute_without_ready(self, observed):
        """A compute not preceded by ready-to-receive is a violation."""
        assert violations(observed, [[], ['Compute_u2v']], S1_VIOLATED) == [1]

    def test_compute_after_ready(self, observed):
        """Ready in the previous tick makes the compute legal."""
        letters = [['Ready2Receive_v'], ['Compute_u2v'], ['Compute_u2v']]
        assert violations(observed, letters, S1_VIOLATED) == [2]

    def test_undeclared(self):
        """Edges must have protocol signals."""
        with pytest.raises(UnknownSignal, match="Compute_u2v"):
            make_observer_s1(inputs_program('Ready2Receive_v'), [('u', 'v')])


class TestObserverS2:
    """Test suite for the bounded delivery observer."""

    @pytest.fixture
    def program(self):
        """Trigger go and responses a1, a2."""
        return inputs_program('go', 'a1', 'a2')

    def test_structure(self, program):
        """One countdown per response, bound + 2 states."""
        spec = make_observer_s2(program, 3, 'go', ['a1', 'a2'])
        assert [a.name for a in spec.automata] == ['S2_a1', 'S2_a2']
        assert len(spec.automaton.states) == 5
        assert spec.alias == 'violated_correctness'

    def test_deadline(self, program):
        """Without a response the violation fires bound ticks after the trigger."""
        observed = compose(program, [make_observer_s2(program, 2, 'go', ['a1'])])
        assert violations(observed, [['go'], [], [], [], []], S2_VIOLATED) == [2]

    def test_response_in_time(self, program):
        """A response on the last tick meets the bound."""
        observed = compose(program, [make_observer_s2(program, 2, 'go', ['a1'])])
        assert violations(observed, [['go'], [], ['a1'], []], S2_VIOLATED) == []

    def test_checked_once(self, program):
        """Later triggers are not checked again."""
        observed = compose(program, [make_observer_s2(program, 1, 'go', ['a1'])])
        letters = [['go'], ['a1'], ['go'], [], []]
        assert violations(observed, letters, S2_VIOLATED) == []

    def test_every_response(self, program):
        """Each response has its own deadline."""
        observed = compose(program, [make_observer_s2(program, 2, 'go', ['a1', 'a2'])])
        assert violations(observed, [['go'], ['a1'], [], []], S2_VIOLATED) == [2]

    def test_bad_bound(self, program):
        """The bound is at least one tick."""
        with pytest.raises(ValueError, match=">= 1"):
            make_observer_s2(program, 0, 'go', ['a1'])


class TestObserverS3:
    """Test suite for the bounded liveness observer."""

    @pytest.fixture
    def observed(self):
        """S3 over (is, os) with bound 2."""
        program = inputs_program('is', 'os')
        return compose(program, [make_observer_s3(program, 2, [('is', 'os')])])

    def test_same_tick(self, observed):
        """A response in the same tick does not start a count."""
        assert violations(observed, [['is', 'os'], [], [], []], S3_VIOLATED) == []

    def test_rearms(self, observed):
        """Every request is checked."""
        letters = [['is'], ['os'], ['is'], [], [], ['is'], [], []]
        assert violations(observed, letters, S3_VIOLATED) == [4, 7]

    def test_instance_names(self):
        """One instance per pair, named after the request."""
        program = inputs_program('a', 'b', 'c', 'd')
        spec = make_observer_s3(program, 4, [('a', 'b'), ('c', 'd')])
        assert [a.name for a in spec.automata] == ['S3_a', 'S3_c']
        assert spec.parameters['bound'] == 4


class TestResponseObserver:
    """Test suite for the generic next-tick response observer."""

    @pytest.fixture
    def observed(self):
        """When A and B hold, C must follow unless R."""
        program = inputs_program('A', 'B', 'C', 'R')
        spec = make_response_observer(program, 'RESP', 'A', 'B', 'C', 'R', 'RESP_VIOLATED')
        return compose(program, [spec])

    def test_missing_response(self, observed):
        """No C on the next tick is a violation."""
        assert violations(observed, [['A', 'B'], []], 'RESP_VIOLATED') == [1]

    def test_response(self, observed):
        """C on the next tick satisfies the observer."""
        assert violations(observed, [['A', 'B'], ['C'], []], 'RESP_VIOLATED') == []

    def test_release(self, observed):
        """R releases the obligation."""
        assert violations(observed, [['A', 'B'], ['R'], []], 'RESP_VIOLATED') == []

    def test_rearmed(self, observed):
        """A new A and B while armed renews the obligation."""
        letters = [['A', 'B'], ['A', 'B', 'C'], [], []]
        assert violations(observed, letters, 'RESP_VIOLATED') == [2]
