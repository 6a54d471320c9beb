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
Burst ciphering: XOR with a keystream from a 64-bit Fibonacci LFSR (taps 64, 63, 61, 60) seeded by
a splitmix64 mix of (key, frame index, burst index). Deciphering is the same operation.
"""

import numpy as np

from reactive_dsp.gsm.config import BURST_BITS, BURSTS
from reactive_dsp.gsm.errors import ShortKeystream, WrongBurstCount

MASK64 = (1 << 64) - 1
ZERO_SEED = 0x5DEECE66D1234567  # replaces an all-zero register
TAPS = (63, 62, 60, 59)


def splitmix64(value: int) -> int:
    """One splitmix64 output for the state value."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def keystream_seed(key: int, frame_index: int, burst_index: int) -> int:
    """Initial LFSR register for one burst."""
    seed = splitmix64(splitmix64(splitmix64(key & MASK64) ^ (frame_index & MASK64)) ^ burst_index)
    return seed or ZERO_SEED


def keystream(key: int, frame_index: int, burst_index: int, length: int = BURST_BITS) -> np.ndarray:
    """
    Keystream bits for one burst, most significant register bit first.

    Args:
        key(int): 64-bit cipher key.
        frame_index(int): Coded frame ordinal.
        burst_index(int): Burst within the frame, 0..7.
        length(int): Bits to produce.

    Returns:
        np.ndarray: uint8 bits.
    """
    state = keystream_seed(key, frame_index, burst_index)
    bits = np.zeros(length, dtype=np.uint8)
    for i in range(length):
        bits[i] = state >> 63
        feedback = 0
        for tap in TAPS:
            feedback ^= (state >> tap) & 1
        state = ((state << 1) | feedback) & MASK64
    return bits


def cipher(burst: np.ndarray, stream: np.ndarray) -> np.ndarray:
    """
    XOR a burst with the leading bits of a keystream.

    Raises:
        ShortKeystream: If the keystream is shorter than the burst.
    """
    burst = np.asarray(burst, dtype=np.uint8)
    stream = np.asarray(stream, dtype=np.uint8)
    if stream.size < burst.size:
        raise ShortKeystream(f"Keystream of {stream.size} bits for a burst of {burst.size} bits")
    return burst ^ stream[:burst.size]


decipher = cipher


def cipher_bursts(bursts: np.ndarray, key: int, frame_index: int) -> np.ndarray:
    """
    Cipher the 8 bursts of one coded frame, each with its own keystream. Self-inverse.

    Raises:
        WrongBurstCount: If the input is not 8 x 57 bits (flat or shaped).
    """
    bursts = np.asarray(bursts, dtype=np.uint8)
    if bursts.size != BURSTS * BURST_BITS:
        raise WrongBurstCount(f"A frame needs {BURSTS} bursts of {BURST_BITS} bits, got "
                              f"{bursts.size} bits")
    shaped = bursts.reshape(BURSTS, BURST_BITS)
    out = np.stack([cipher(b, keystream(key, frame_index, i)) for i, b in enumerate(shaped)])
    return out.reshape(bursts.shape)
