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


class StateExplosion(RuntimeError):
    """FSM extraction reached more states than the configured cap."""


class UnboundedCounter(ValueError):
    """The program computes payloads in host code, so its control state space is not finite."""


class UnknownSignal(ValueError):
    """An observer or a check references a signal the program does not declare."""


class SignalCollision(ValueError):
    """Composed observers declare the same violation signal or automaton name."""


class WitnessMismatch(RuntimeError):
    """A witness cannot be replayed on the given model."""
