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
Newline-delimited reaction trace: `tick=<n> in=<sig,...> out=<sig[=value],...> steps=<k>`.
Signals are listed in name order so identical reactions give identical lines.
"""

import re
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Tuple

from reactive_dsp.kernel.program import Reaction
from reactive_dsp.kernel.signals import SignalEvent

_LINE = re.compile(r"^tick=(\d+) in=(\S*) out=(\S*) steps=(\d+)(?: #(.*))?$")


def _events(events: Iterable[SignalEvent]) -> str:
    return ",".join(str(e) for e in sorted(events, key=lambda e: e.name))


def format_reaction(reaction: Reaction, note: Optional[str] = None) -> str:
    """
    One trace line for a reaction.

    Args:
        reaction(Reaction): The reaction to render.
        note(str): Optional annotation appended after a '#'.
    """
    line = (f"tick={reaction.tick} in={_events(reaction.inputs)} out={_events(reaction.outputs)} "
            f"steps={reaction.micro_steps}")
    return f"{line} #{note}" if note else line


def parse_trace_line(line: str) -> Tuple[int, List[str], List[str], int]:
    """
    Split a trace line back into (tick, inputs, outputs, steps); signal entries keep their
    `name[=value]` text.

    Raises:
        ValueError: If the line is not a trace record.
    """
    match = _LINE.match(line.strip())
    if match is None:
        raise ValueError(f"Not a trace line: '{line.strip()}'")
    tick, ins, outs, steps, _ = match.groups()

    def split(text):
        return [s for s in text.split(",") if s]

    return int(tick), split(ins), split(outs), int(steps)


class TraceWriter:
    """
    Appends reactions to a trace file (or any text stream) as they happen.

    Use as a context manager when writing to a path.
    """

    def __init__(self, target: Optional[Path | TextIO] = None):
        self._path = Path(target) if isinstance(target, (str, Path)) else None
        self._stream: Optional[TextIO] = None if self._path else target
        self._owned = False
        self.lines = 0

    def __enter__(self):
        if self._path is not None:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._stream = open(self._path, 'w', encoding='utf-8')
            self._owned = True
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()

    def write(self, reaction: Reaction, note: Optional[str] = None) -> str:
        """Render and write one reaction; returns the line."""
        line = format_reaction(reaction, note)
        if self._stream is not None:
            self._stream.write(line + "\n")
        self.lines += 1
        return line

    def close(self):
        """Close the underlying file if this writer opened it."""
        if self._owned and self._stream is not None:
            self._stream.close()
            self._stream = None
            self._owned = False
