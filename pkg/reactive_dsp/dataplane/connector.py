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

import threading
from typing import List

import numpy as np

from reactive_dsp.dataplane.errors import BufferOverrun, InsufficientData, StaleRange
from reactive_dsp.dataplane.sample_range import SampleRange


class Connector:
    """
    Byte-addressed ring buffer between one upstream port and one downstream port.

    Cursors are absolute sample ordinals: the producer appends contiguous ranges at the write
    cursor, the consumer reads any range between the cursors and releases ranges in order, moving
    the read cursor. Invariant: 0 <= write_cursor - read_cursor <= capacity.

    Ranges may be written as skipped: the write cursor moves past them without data and the
    consumer must discard rather than read them.

    Note:
        The connector follows a single-producer/single-consumer contract; cursor updates are
        guarded by a lock so the two sides may run on different threads.
    """

    def __init__(self, up: str, down: str, rate: int, sample_width: int, capacity_frames: int = 2,
                 start: int = 0):
        """
        Args:
            up(str): Upstream stage name.
            down(str): Downstream stage name.
            rate(int): Samples per frame.
            sample_width(int): Bytes per sample.
            capacity_frames(int): Capacity in frames.
            start(int): Initial position of both cursors.
        """
        if rate <= 0 or sample_width <= 0:
            raise ValueError(f"Connector {up}->{down}: rate and width must be positive")
        if capacity_frames < 1:
            raise ValueError(f"Connector {up}->{down}: capacity must hold at least one frame")
        self.up = up
        self.down = down
        self.rate = rate
        self.sample_width = sample_width
        self.capacity = capacity_frames * rate
        self.read_cursor = start
        self.write_cursor = start
        self._buffer = np.zeros(self.capacity * sample_width, dtype=np.uint8)
        self._skipped: List[SampleRange] = []
        self._lock = threading.Lock()

    @property
    def name(self) -> str:
        """Edge label."""
        return f"{self.up}->{self.down}"

    @property
    def fill(self) -> int:
        """Samples written but not yet released."""
        return self.write_cursor - self.read_cursor

    @property
    def free(self) -> int:
        """Samples that may still be written."""
        return self.capacity - self.fill

    def _offsets(self, sample_range: SampleRange):
        """Byte slices of the ring covering a range, split at the wrap point."""
        start = (sample_range.index % self.capacity) * self.sample_width
        length = sample_range.size * self.sample_width
        first = min(length, len(self._buffer) - start)
        return (slice(start, start + first), slice(0, length - first))

    def _admit(self, sample_range: SampleRange):
        if sample_range.index != self.write_cursor:
            raise StaleRange(f"Connector {self.name}: write at {sample_range.index} but write "
                             f"cursor is {self.write_cursor}")
        if sample_range.size > self.free:
            raise BufferOverrun(f"Connector {self.name}: {sample_range.size} samples exceed the "
                                f"free capacity {self.free}")

    def write(self, sample_range: SampleRange, data: bytes):
        """
        Append data at the write cursor.

        Raises:
            StaleRange: If the range does not start at the write cursor.
            BufferOverrun: If the range exceeds the free capacity.
            ValueError: If the byte count does not match the range.
        """
        if len(data) != sample_range.size * self.sample_width:
            raise ValueError(f"Connector {self.name}: {len(data)} bytes for range {sample_range} "
                             f"of width {self.sample_width}")
        with self._lock:
            self._admit(sample_range)
            head, tail = self._offsets(sample_range)
            payload = np.frombuffer(data, dtype=np.uint8)
            self._buffer[head] = payload[:head.stop - head.start]
            self._buffer[tail] = payload[head.stop - head.start:]
            self.write_cursor = sample_range.end

    def skip(self, sample_range: SampleRange):
        """Move the write cursor past a range without data."""
        with self._lock:
            self._admit(sample_range)
            self._skipped.append(sample_range)
            self.write_cursor = sample_range.end

    def is_skipped(self, sample_range: SampleRange) -> bool:
        """True if any part of the range was written as skipped."""
        return any(s.overlaps(sample_range) for s in self._skipped)

    def read(self, sample_range: SampleRange) -> bytes:
        """
        Copy the bytes of a range without releasing it.

        Raises:
            StaleRange: If the range was already released or was skipped.
            InsufficientData: If the range has not been fully written.
        """
        with self._lock:
            if sample_range.index < self.read_cursor:
                raise StaleRange(f"Connector {self.name}: range {sample_range} already released")
            if sample_range.end > self.write_cursor:
                raise InsufficientData(f"Connector {self.name}: range {sample_range} not written "
                                       f"(write cursor {self.write_cursor})")
            if self.is_skipped(sample_range):
                raise StaleRange(f"Connector {self.name}: range {sample_range} was skipped")
            head, tail = self._offsets(sample_range)
            return self._buffer[head].tobytes() + self._buffer[tail].tobytes()

    def release(self, sample_range: SampleRange):
        """
        Release a range starting at the read cursor, whether written or skipped.

        Raises:
            StaleRange: If the range does not start at the read cursor.
            InsufficientData: If the range has not been written.
        """
        with self._lock:
            if sample_range.index != self.read_cursor:
                raise StaleRange(f"Connector {self.name}: release at {sample_range.index} but read "
                                 f"cursor is {self.read_cursor}")
            if sample_range.end > self.write_cursor:
                raise InsufficientData(f"Connector {self.name}: range {sample_range} not written")
            self.read_cursor = sample_range.end
            self._skipped = [s for s in self._skipped if s.end > self.read_cursor]

    def __repr__(self):
        return (f"Connector({self.name}, rate={self.rate}, width={self.sample_width}, "
                f"read={self.read_cursor}, write={self.write_cursor})")
