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
Framing speech codec: 160 PCM samples (20 ms at 8 kHz) in, 260 bits out.

Each frame is split into 4 sub-frames of 40 samples. Sample pairs are averaged into 20 values, and
the smallest shift e in [0, 13] that brings every value into the 3-bit two's complement range is
chosen. A sub-frame is stored as e (5 bits) followed by the 20 shifted values (3 bits each), most
significant bit first: 4 x 65 = 260 bits. Decoding shifts the values back and repeats each twice.
"""

from dataclasses import dataclass

import numpy as np

from reactive_dsp.gsm.config import SAMPLES_PER_FRAME, SPEECH_BITS
from reactive_dsp.gsm.errors import WrongFrameLength

SUBFRAMES = 4
PAIRS = 20
SHIFT_BITS = 5
CODE_BITS = 3
MAX_SHIFT = 13


@dataclass(frozen=True)
class SpeechBlock:
    """260 speech bits of one 20 ms frame."""
    bits: np.ndarray
    frame_index: int = 0

    def __post_init__(self):
        if self.bits.shape != (SPEECH_BITS,):
            raise WrongFrameLength(f"Speech block {self.frame_index} holds {self.bits.size} bits, "
                                   f"expected {SPEECH_BITS}")


def _to_bits(values: np.ndarray, width: int) -> np.ndarray:
    """MSB-first bits of the low `width` bits of each value."""
    shifts = np.arange(width - 1, -1, -1)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def _from_bits(bits: np.ndarray, width: int) -> np.ndarray:
    weights = 1 << np.arange(width - 1, -1, -1)
    return bits.reshape(-1, width).astype(np.int64) @ weights


def speech_encode(pcm: np.ndarray, frame_index: int = 0) -> SpeechBlock:
    """
    Encode one frame of 160 16-bit samples.

    Raises:
        WrongFrameLength: If pcm does not hold exactly 160 samples.
    """
    pcm = np.asarray(pcm)
    if pcm.shape != (SAMPLES_PER_FRAME,):
        raise WrongFrameLength(f"PCM frame {frame_index} holds {pcm.size} samples, expected "
                               f"{SAMPLES_PER_FRAME}")
    values = pcm.astype(np.int32).reshape(SUBFRAMES, PAIRS, 2).sum(axis=2) >> 1
    parts = []
    for sub in values:
        shift = next(e for e in range(MAX_SHIFT + 1)
                     if np.all(((sub >> e) >= -4) & ((sub >> e) <= 3)))
        parts.append(_to_bits(np.array([shift]), SHIFT_BITS))
        parts.append(_to_bits((sub >> shift) & 0b111, CODE_BITS))
    return SpeechBlock(np.concatenate(parts), frame_index)


def speech_decode(block: SpeechBlock) -> np.ndarray:
    """Decode a block back to 160 int16 samples."""
    samples = []
    for sub in block.bits.reshape(SUBFRAMES, SHIFT_BITS + PAIRS * CODE_BITS):
        shift = int(_from_bits(sub[:SHIFT_BITS], SHIFT_BITS)[0])
        codes = _from_bits(sub[SHIFT_BITS:], CODE_BITS)
        codes = np.where(codes >= 4, codes - 8, codes)
        samples.append(np.repeat(codes << shift, 2))
    return np.concatenate(samples).astype(np.int16)


def encode_frames(pcm: np.ndarray, first_frame: int = 0) -> np.ndarray:
    """
    Encode consecutive frames; returns the concatenated bits.

    Raises:
        WrongFrameLength: If the samples do not split into whole frames.
    """
    pcm = np.asarray(pcm)
    if pcm.size % SAMPLES_PER_FRAME:
        raise WrongFrameLength(f"{pcm.size} samples do not split into {SAMPLES_PER_FRAME}-sample "
                               f"frames")
    frames = pcm.reshape(-1, SAMPLES_PER_FRAME)
    return np.concatenate([speech_encode(f, first_frame + i).bits for i, f in enumerate(frames)])


def decode_frames(bits: np.ndarray) -> np.ndarray:
    """Decode consecutive 260-bit blocks; returns the concatenated samples."""
    blocks = np.asarray(bits, dtype=np.uint8).reshape(-1, SPEECH_BITS)
    return np.concatenate([speech_decode(SpeechBlock(b)) for b in blocks])
