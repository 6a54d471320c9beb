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


class InsufficientData(RuntimeError):
    """A window or buffer holds less data than the requested frame."""


class BufferOverrun(RuntimeError):
    """A write would exceed a connector's capacity."""


class StaleRange(RuntimeError):
    """A range was already computed or consumed, or was never estimated."""


class SkipRange(RuntimeError):
    """Raised by a stage operation to drop the current range under the skip policy."""


class TopologyError(ValueError):
    """A topology is malformed."""


class PortAlreadyBound(TopologyError):
    """A port is already bound to a connector."""


class RateMismatch(TopologyError):
    """A connector's rate or sample width differs from the stage declaration."""


class CyclicTopology(TopologyError):
    """The stage graph contains a cycle."""


class DanglingPort(TopologyError):
    """A stage port is left unconnected."""
