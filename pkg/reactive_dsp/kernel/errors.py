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

"""Errors raised while declaring or executing synchronous programs."""


class DuplicateSignal(ValueError):
    """Two signals share one name within a program."""


class NondeterministicAutomaton(ValueError):
    """Two transition guards of one state can be true under the same valuation."""


class UnknownSignalInGuard(ValueError):
    """A guard or emission references a signal the program does not declare."""


class UnreachableState(ValueError):
    """An automaton declares a state that no transition path from its initial state reaches."""


class UndeclaredInput(ValueError):
    """A reaction was fed a signal that is not a declared environment input, or a bad payload."""


class FixpointDivergence(RuntimeError):
    """A reaction did not settle within the micro-step cap or has no constructive fixpoint."""


class ConflictingValuedEmission(RuntimeError):
    """One valued signal was emitted twice in a tick with unequal payloads."""


class NotSuspendable(ValueError):
    """Suspension was requested for an automaton not declared suspendable."""


class NotSuspended(RuntimeError):
    """Resume was requested for an automaton that is not suspended."""


class IncompatibleSnapshot(ValueError):
    """A global state was restored into a structurally different program."""


class ProgramHalted(RuntimeError):
    """A reaction was requested after the program's halt signal aborted it."""
