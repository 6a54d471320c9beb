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
Block-diagonal interleaving of a 456-bit coded frame over 8 bursts of 57 bits: coded bit k goes to
burst k mod 8, position k div 8.
"""

import numpy as np

from reactive_dsp.gsm.config import BURST_BITS, BURSTS, CODED_BITS
from reactive_dsp.gsm.errors import WrongBurstCount, WrongFrameLength


def interleave(frame: np.ndarray) -> np.ndarray:
    """
    Spread a coded frame over 8 bursts.

    Returns:
        np.ndarray: Bursts of shape (8, 57).

    Raises:
        WrongFrameLength: If the frame is not 456 bits.
    """
    frame = np.asarray(frame, dtype=np.uint8)
    if frame.shape != (CODED_BITS,):
        raise WrongFrameLength(f"Interleaver needs {CODED_BITS} bits, got {frame.size}")
    return frame.reshape(BURST_BITS, BURSTS).T.copy()


def deinterleave(bursts: np.ndarray) -> np.ndarray:
    """
    Reassemble a coded frame from its 8 bursts.

    Raises:
        WrongBurstCount: If the bursts are not 8 x 57 bits.
    """
    bursts = np.asarray(bursts, dtype=np.uint8)
    if bursts.shape != (BURSTS, BURST_BITS):
        raise WrongBurstCount(f"Deinterleaver needs {BURSTS} bursts of {BURST_BITS} bits, got "
                              f"shape {bursts.shape}")
    return bursts.T.reshape(CODED_BITS).copy()
