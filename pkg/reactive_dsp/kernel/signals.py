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

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from reactive_dsp.dataplane.sample_range import SampleRange


class SignalKind(Enum):
    """Payload kind of a signal, fixed at declaration."""
    PURE = 'pure'
    RANGE = 'range'
    INTEGER = 'integer'


class SignalDirection(Enum):
    """Who may drive a signal: the environment (INPUT) or the program (OUTPUT, LOCAL)."""
    INPUT = 'input'
    OUTPUT = 'output'
    LOCAL = 'local'


@dataclass(frozen=True)
class SignalId:
    """A declared signal."""
    name: str
    kind: SignalKind = SignalKind.PURE
    direction: SignalDirection = SignalDirection.LOCAL

    @property
    def valued(self) -> bool:
        """True unless the signal is pure."""
        return self.kind is not SignalKind.PURE

    def accepts(self, value: Any) -> bool:
        """True if value is a legal payload for this signal (None for pure signals)."""
        match self.kind:
            case SignalKind.PURE:
                return value is None
            case SignalKind.RANGE:
                return isinstance(value, SampleRange)
            case SignalKind.INTEGER:
                return isinstance(value, int) and not isinstance(value, bool)
            case _:
                raise ValueError(f"Unknown signal kind: {self.kind}")


def pure(name: str, direction: SignalDirection = SignalDirection.LOCAL) -> SignalId:
    """Shorthand for a pure signal."""
    return SignalId(name, SignalKind.PURE, direction)


def valued(name: str, kind: SignalKind = SignalKind.RANGE,
           direction: SignalDirection = SignalDirection.LOCAL) -> SignalId:
    """Shorthand for a valued signal."""
    if kind is SignalKind.PURE:
        raise ValueError(f"Valued signal {name} cannot be pure")
    return SignalId(name, kind, direction)


@dataclass(frozen=True)
class SignalEvent:
    """
    One occurrence of a signal within a tick. Equality ignores the tick so that reactions computed
    at different ticks from the same state compare equal.
    """
    name: str
    value: Optional[Any] = None
    tick: int = field(default=0, compare=False)

    def __str__(self):
        return self.name if self.value is None else f"{self.name}={self.value}"


def event(name: str, value: Optional[Any] = None) -> SignalEvent:
    """Shorthand used when feeding inputs to a reaction."""
    return SignalEvent(name, value)
