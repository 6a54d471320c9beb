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
GMSK baseband modulation with a Gaussian frequency pulse and differential demodulation.

Bits map to symbols 2b - 1 and are padded with `guard_bits` zero bits on each side. The symbol
train is held for `oversampling` samples, smoothed by a Gaussian kernel spanning `pulse_span` bits,
and integrated into a phase advancing pi/2 per bit. The demodulator takes the sign of the phase
advance over every bit period.
"""

from dataclasses import dataclass

import numpy as np
from scipy import signal

from reactive_dsp.gsm.errors import BadOversampling, WrongFrameLength

MIN_OVERSAMPLING = 4


@dataclass(frozen=True)
class IqSampleBlock:
    """Complex baseband samples of one modulated block."""
    samples: np.ndarray
    oversampling: int = 8
    guard_bits: int = 2

    @property
    def bits(self) -> int:
        """Payload bits carried, guard excluded."""
        return self.samples.size // self.oversampling - 2 * self.guard_bits


def _check_oversampling(oversampling: int):
    if oversampling < MIN_OVERSAMPLING:
        raise BadOversampling(f"Oversampling of {oversampling} samples per bit, need at least "
                              f"{MIN_OVERSAMPLING}")


def gaussian_kernel(bt: float, oversampling: int, pulse_span: int = 4) -> np.ndarray:
    """Unit-sum Gaussian smoothing kernel over pulse_span bits."""
    half = pulse_span * oversampling // 2
    t = np.arange(-half, half + 1) / oversampling
    sigma = np.sqrt(np.log(2)) / (2 * np.pi * bt)
    kernel = np.exp(-t ** 2 / (2 * sigma ** 2))
    return kernel / kernel.sum()


def gmsk_modulate(bits: np.ndarray, oversampling: int = 8, bt: float = 0.3, guard_bits: int = 2,
                  pulse_span: int = 4) -> IqSampleBlock:
    """
    Modulate a bit vector.

    Args:
        bits(np.ndarray): Payload bits (0/1).
        oversampling(int): Samples per bit, at least 4.
        bt(float): Bandwidth-time product of the Gaussian filter.
        guard_bits(int): Zero bits added on each side.
        pulse_span(int): Kernel length in bits.

    Returns:
        IqSampleBlock: (len(bits) + 2 * guard_bits) * oversampling unit-magnitude samples.

    Raises:
        BadOversampling: If oversampling is below 4.
        WrongFrameLength: If bits is empty.
    """
    _check_oversampling(oversampling)
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size == 0:
        raise WrongFrameLength("GMSK needs at least one bit")
    guard = np.zeros(guard_bits, dtype=np.uint8)
    symbols = 2.0 * np.concatenate([guard, bits, guard]) - 1.0
    frequency = signal.convolve(np.repeat(symbols, oversampling),
                                gaussian_kernel(bt, oversampling, pulse_span), mode='same')
    phase = np.pi / 2 / oversampling * np.cumsum(frequency)
    return IqSampleBlock(np.exp(1j * phase), oversampling, guard_bits)


def bit_phase_increments(samples: np.ndarray, oversampling: int) -> np.ndarray:
    """Phase advance over each bit period, the phase before the first sample taken as 0."""
    _check_oversampling(oversampling)
    extended = np.concatenate([[1.0 + 0.0j], np.asarray(samples)])
    boundaries = extended[::oversampling]
    return np.angle(boundaries[1:] * np.conj(boundaries[:-1]))


def gmsk_demodulate(block: IqSampleBlock) -> np.ndarray:
    """
    Recover the payload bits of a block.

    Raises:
        BadOversampling: If the block's oversampling is below 4.
    """
    increments = bit_phase_increments(block.samples, block.oversampling)
    decided = (increments > 0).astype(np.uint8)
    return decided[block.guard_bits:decided.size - block.guard_bits]
