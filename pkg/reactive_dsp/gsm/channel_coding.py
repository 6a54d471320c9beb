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
Channel coding of 260-bit speech blocks into 456-bit frames.

Class 1a bits get 3 CRC parity bits; class 1a, parity, class 1b and 4 zero tail bits go through a
rate 1/2, K=5 convolutional encoder; class 2 bits are appended uncoded. Decoding is hard-decision
Viterbi over the coded section.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from reactive_dsp.gsm.config import CODED_BITS, SPEECH_BITS, ChannelCodeLayout
from reactive_dsp.gsm.errors import UncorrectableFrame, WrongFrameLength

CRC_POLY = np.array([1, 0, 1, 1], dtype=np.uint8)  # D^3 + D + 1, highest degree first


def crc3(bits: np.ndarray) -> np.ndarray:
    """Remainder of bits(D) * D^3 divided by D^3 + D + 1."""
    register = np.concatenate([np.asarray(bits, dtype=np.uint8), np.zeros(3, dtype=np.uint8)])
    for i in range(len(bits)):
        if register[i]:
            register[i:i + 4] ^= CRC_POLY
    return register[-3:].copy()


class ConvolutionalCode:
    """
    Rate 1/2 code with constraint length 5, generators G0 = 1 + D^3 + D^4 and
    G1 = 1 + D + D^3 + D^4. The encoder state holds the last four input bits, newest in bit 3.
    """
    G0 = np.array([1, 0, 0, 1, 1], dtype=np.uint8)
    G1 = np.array([1, 1, 0, 1, 1], dtype=np.uint8)
    STATES = 16

    def __init__(self):
        states = np.arange(self.STATES)
        history = (states[:, None] >> np.array([3, 2, 1, 0])) & 1
        self.outputs = np.zeros((self.STATES, 2, 2), dtype=np.uint8)
        for bit in (0, 1):
            window = np.column_stack([np.full(self.STATES, bit), history])
            self.outputs[:, bit, 0] = (window @ self.G0) % 2
            self.outputs[:, bit, 1] = (window @ self.G1) % 2
        # The two predecessors of every state and the input bit leading into it
        self.inputs = states >> 3
        low = (states & 0b111) << 1
        self.predecessors = np.stack([low, low | 1])
        self._expected = self.outputs[self.predecessors, self.inputs[None, :]]

    def encode(self, bits: np.ndarray) -> np.ndarray:
        """Encode from the zero state; returns c0, c1 interleaved (2 bits per input bit)."""
        bits = np.asarray(bits, dtype=np.uint8)
        c0 = np.convolve(bits, self.G0)[:bits.size] % 2
        c1 = np.convolve(bits, self.G1)[:bits.size] % 2
        return np.column_stack([c0, c1]).ravel().astype(np.uint8)

    def decode(self, coded: np.ndarray) -> np.ndarray:
        """
        Hard-decision Viterbi decoding of a zero-terminated block.

        Returns:
            np.ndarray: The most likely input bits, tail included.
        """
        received = np.asarray(coded, dtype=np.uint8).reshape(-1, 2)
        metric = np.full(self.STATES, np.inf)
        metric[0] = 0.0
        decisions = np.zeros((len(received), self.STATES), dtype=np.uint8)
        for t, pair in enumerate(received):
            candidates = metric[self.predecessors] + (self._expected != pair).sum(axis=-1)
            decisions[t] = np.argmin(candidates, axis=0)
            metric = candidates.min(axis=0)

        bits = np.zeros(len(received), dtype=np.uint8)
        state = 0
        for t in range(len(received) - 1, -1, -1):
            bits[t] = self.inputs[state]
            state = self.predecessors[decisions[t, state], state]
        return bits


class ChannelCoder:
    """Channel encoder/decoder for one code layout."""

    def __init__(self, layout: Optional[ChannelCodeLayout] = None,
                 logger: Optional[logging.Logger] = None):
        self.layout = layout or ChannelCodeLayout()
        self.code = ConvolutionalCode()
        self.logger = logger or logging.getLogger(__name__)

    def encode(self, block: np.ndarray) -> np.ndarray:
        """
        Code a 260-bit block into a 456-bit frame.

        Raises:
            WrongFrameLength: If the block is not 260 bits.
        """
        block = np.asarray(block, dtype=np.uint8)
        if block.shape != (SPEECH_BITS,):
            raise WrongFrameLength(f"Channel encoder needs {SPEECH_BITS} bits, got {block.size}")
        a, b = self.layout.class1a, self.layout.class1a + self.layout.class1b
        protected = np.concatenate([block[:a], crc3(block[:a]), block[a:b],
                                    np.zeros(self.layout.tail, dtype=np.uint8)])
        return np.concatenate([self.code.encode(protected), block[b:]])

    def decode(self, frame: np.ndarray) -> Tuple[np.ndarray, int]:
        """
        Decode a 456-bit frame.

        Returns:
            Tuple[np.ndarray, int]: The 260-bit block and the number of coded bits that differ
            from the re-encoded decision.

        Raises:
            WrongFrameLength: If the frame is not 456 bits.
            UncorrectableFrame: If the decoded parity does not match class 1a.
        """
        frame = np.asarray(frame, dtype=np.uint8)
        if frame.shape != (CODED_BITS,):
            raise WrongFrameLength(f"Channel decoder needs {CODED_BITS} bits, got {frame.size}")
        layout = self.layout
        coded, class2 = frame[:2 * layout.protected], frame[2 * layout.protected:]
        decided = self.code.decode(coded)
        errors = int(np.count_nonzero(self.code.encode(decided) != coded))

        a = layout.class1a
        class1a, parity = decided[:a], decided[a:a + layout.parity]
        class1b = decided[a + layout.parity:a + layout.parity + layout.class1b]
        if not np.array_equal(crc3(class1a), parity):
            raise UncorrectableFrame(f"Parity mismatch after correcting {errors} coded bits")
        if errors:
            self.logger.debug(f"Channel decoder corrected {errors} coded bits")
        return np.concatenate([class1a, class1b, class2]), errors


_DEFAULT = ChannelCoder()


def channel_encode(block: np.ndarray) -> np.ndarray:
    """Code a 260-bit block with the default layout."""
    return _DEFAULT.encode(block)


def channel_decode(frame: np.ndarray) -> Tuple[np.ndarray, int]:
    """Decode a 456-bit frame with the default layout; returns (block, errors)."""
    return _DEFAULT.decode(frame)
