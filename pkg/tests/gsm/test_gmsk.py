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

from reactive_dsp.gsm.errors import BadOversampling, WrongFrameLength
from reactive_dsp.gsm.gmsk import (IqSampleBlock, bit_phase_increments, gaussian_kernel,
                                   gmsk_demodulate, gmsk_modulate)


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(99)


class TestGaussianKernel:
    """Test suite for the frequency pulse."""

    def test_normalised(self):
        """Taps sum to one and are symmetric."""
        kernel = gaussian_kernel(0.3, 8)
        assert kernel.size == 33
        np.testing.assert_allclose(kernel.sum(), 1.0)
        np.testing.assert_allclose(kernel, kernel[::-1])


class TestGmskModulate:
    """Test suite for the modulator."""

    def test_constant_envelope(self, rng):
        """Every sample has unit magnitude."""
        block = gmsk_modulate(rng.integers(0, 2, 1250), oversampling=8)
        assert block.samples.size >= 10 ** 4
        np.testing.assert_allclose(np.abs(block.samples), 1.0, atol=1e-9)

    def test_sample_count(self):
        """Guard bits pad the block on both sides."""
        block = gmsk_modulate(np.ones(10, dtype=np.uint8), oversampling=4, guard_bits=2)
        assert block.samples.size == (10 + 4) * 4
        assert block.bits == 10

    def test_alternating_bits(self):
        """Without smoothing each bit turns the phase by +-pi/2."""
        bits = np.tile([0, 1], 20).astype(np.uint8)
        block = gmsk_modulate(bits, oversampling=8, bt=100.0)
        increments = bit_phase_increments(block.samples, 8)[2:-2]
        np.testing.assert_allclose(increments, np.where(bits == 1, 1.0, -1.0) * np.pi / 2,
                                   atol=1e-9)

    def test_smoothed_increments_alternate(self):
        """With BT = 0.3 the alternating pattern still alternates in sign."""
        bits = np.tile([0, 1], 20).astype(np.uint8)
        increments = bit_phase_increments(gmsk_modulate(bits).samples, 8)[2:-2]
        np.testing.assert_array_equal(increments > 0, bits == 1)
        assert np.all(np.abs(increments) < np.pi / 2)

    def test_bad_oversampling(self):
        """At least 4 samples per bit."""
        with pytest.raises(BadOversampling, match="at least 4"):
            gmsk_modulate(np.ones(4, dtype=np.uint8), oversampling=3)

    def test_empty(self):
        """There must be something to modulate."""
        with pytest.raises(WrongFrameLength, match="at least one bit"):
            gmsk_modulate(np.zeros(0, dtype=np.uint8))


class TestGmskDemodulate:
    """Test suite for the demodulator."""

    def test_loopback(self, rng):
        """Noiseless loopback over 10^5 bits is error free."""
        bits = rng.integers(0, 2, 10 ** 5).astype(np.uint8)
        np.testing.assert_array_equal(gmsk_demodulate(gmsk_modulate(bits)), bits)

    def test_loopback_parameters(self, rng):
        """Loopback holds across oversampling and guard settings."""
        bits = rng.integers(0, 2, 500).astype(np.uint8)
        for oversampling, guard in [(4, 2), (16, 3), (8, 4)]:
            block = gmsk_modulate(bits, oversampling=oversampling, guard_bits=guard)
            np.testing.assert_array_equal(gmsk_demodulate(block), bits)

    def test_single_precision(self, rng):
        """complex64 samples, as written to IQ files, still demodulate."""
        bits = rng.integers(0, 2, 1000).astype(np.uint8)
        block = gmsk_modulate(bits)
        narrowed = IqSampleBlock(block.samples.astype(np.complex64), block.oversampling,
                                 block.guard_bits)
        np.testing.assert_array_equal(gmsk_demodulate(narrowed), bits)

    def test_bad_oversampling(self):
        """The block's oversampling is checked."""
        with pytest.raises(BadOversampling):
            gmsk_demodulate(IqSampleBlock(np.ones(12, dtype=complex), 2, 0))
