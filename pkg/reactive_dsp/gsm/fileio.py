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
Raw sample files: PCM as little-endian int16 mono at 8 kHz, IQ as interleaved little-endian float32
(I, Q) pairs. Neither format has a header.
"""

from pathlib import Path
from typing import Union

import numpy as np

PCM_DTYPE = np.dtype('<i2')
IQ_DTYPE = np.dtype('<c8')

PathLike = Union[str, Path]


def _read(path: PathLike, dtype: np.dtype, kind: str) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) % dtype.itemsize:
        raise ValueError(f"{kind} file {path} holds {len(data)} bytes, not a multiple of "
                         f"{dtype.itemsize}")
    return np.frombuffer(data, dtype=dtype).copy()


def read_pcm(path: PathLike) -> np.ndarray:
    """
    Read a raw PCM file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the file holds a partial sample.
    """
    return _read(path, PCM_DTYPE, "PCM")


def write_pcm(path: PathLike, samples: np.ndarray):
    """Write samples as raw little-endian int16."""
    Path(path).write_bytes(np.asarray(samples).astype(PCM_DTYPE).tobytes())


def read_iq(path: PathLike) -> np.ndarray:
    """
    Read a raw IQ file as complex64 samples.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the file holds a partial sample.
    """
    return _read(path, IQ_DTYPE, "IQ")


def write_iq(path: PathLike, samples: np.ndarray):
    """Write complex samples as interleaved little-endian float32 pairs."""
    Path(path).write_bytes(np.asarray(samples).astype(IQ_DTYPE).tobytes())
