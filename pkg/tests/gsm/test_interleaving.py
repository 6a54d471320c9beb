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

import numpy as np
import pytest

from reactive_dsp.gsm.channel_coding import channel_encode
from reactive_dsp.gsm.config import BURST_BITS, BURSTS, CODED_BITS, SPEECH_BITS
from reactive_dsp.gsm.errors import WrongBurstCount, WrongFrameLength
from reactive_dsp.gsm.interleaving import deinterleave, interleave
from reactive_dsp.gsm.speech import speech_encode


class TestInterleave:
    """Test suite for burst interleaving."""

    def test_first_and_last_bit(self):
        """Bit k lands in burst k mod 8 at position k div 8."""
        for k, burst, position in [(0, 0, 0), (455, 7, 56), (9, 1, 1)]:
            frame = np.zeros(CODED_BITS, dtype=np.uint8)
            frame[k] = 1
            bursts = interleave(frame)
            assert bursts[burst, position] == 1
            assert bursts.sum() == 1

    def test_round_trip(self):
        """Deinterleaving inverts interleaving."""
        rng = np.random.default_rng(3)
        for _ in range(20):
            frame = rng.integers(0, 2, CODED_BITS).astype(np.uint8)
            np.testing.assert_array_equal(deinterleave(interleave(frame)), frame)

    def test_wrong_frame(self):
        """Only whole coded frames are interleaved."""
        with pytest.raises(WrongFrameLength, match="456 bits"):
            interleave(np.zeros(457, dtype=np.uint8))

    def test_wrong_burst_count(self):
        """Deinterleaving needs 8 bursts."""
        with pytest.raises(WrongBurstCount, match="8 bursts"):
            deinterleave(np.zeros((7, BURST_BITS), dtype=np.uint8))


class TestFramingContract:
    """Per-frame sizes of the downlink over many frames."""

    def test_thousand_frames(self):
        """260 bits, then 456 bits, then 8 bursts of 57 bits for every frame."""
        rng = np.random.default_rng(2024)
        pcm = rng.integers(-32768, 32768, size=(1000, 160)).astype(np.int16)
        for i, frame in enumerate(pcm):
            block = speech_encode(frame, i)
            assert block.bits.size == SPEECH_BITS
            coded = channel_encode(block.bits)
            assert coded.size == CODED_BITS
            assert interleave(coded).shape == (BURSTS, BURST_BITS)
