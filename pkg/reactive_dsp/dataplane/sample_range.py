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


@dataclass(frozen=True, order=True)
class SampleRange:
    """
    A window into an unbounded sample stream: the absolute ordinal of its first sample and the
    number of samples it covers. A size of zero is the skip marker: the window at `index` was
    dropped and counts as consumed.
    """
    index: int
    size: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"SampleRange index must be >= 0, got {self.index}")
        if self.size < 0:
            raise ValueError(f"SampleRange size must be >= 0, got {self.size}")

    @classmethod
    def parse(cls, text: str) -> "SampleRange":
        """
        Parse the textual form used by topology files and the command line, e.g. "0 1600" or
        "0:1600" (the trace form).

        Raises:
            ValueError: If the text does not hold exactly two integers.
        """
        parts = text.replace(',', ' ').replace(':', ' ').split()
        if len(parts) != 2:
            raise ValueError(f"Expected '<index> <size>', got '{text}'")
        return cls(int(parts[0]), int(parts[1]))

    @classmethod
    def skip(cls, index: int) -> "SampleRange":
        """The skip marker at index."""
        return cls(index, 0)

    @property
    def end(self) -> int:
        """One past the last sample ordinal."""
        return self.index + self.size

    @property
    def is_skip(self) -> bool:
        """True for the size-zero skip marker."""
        return self.size == 0

    def overlaps(self, other: "SampleRange") -> bool:
        """True if both ranges share at least one sample."""
        return self.index < other.end and other.index < self.end

    def __str__(self):
        return f"{self.index}:{self.size}"
