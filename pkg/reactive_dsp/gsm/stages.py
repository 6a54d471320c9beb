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
Registers the GSM radio-interface operations with the dataplane operation registry. Stage options
are GsmConfig fields; rates must be whole multiples of the operation's frame.
"""

from typing import Callable

import numpy as np
from pydantic import ValidationError

from reactive_dsp.dataplane.config import StageConfig
from reactive_dsp.dataplane.errors import TopologyError
from reactive_dsp.dataplane.operations import register_operation
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.stage import Operation
from reactive_dsp.gsm.channel_coding import ChannelCoder
from reactive_dsp.gsm.cipher import cipher_bursts
from reactive_dsp.gsm.config import BURSTS, CODED_BITS, SAMPLES_PER_FRAME, SPEECH_BITS, GsmConfig
from reactive_dsp.gsm.gmsk import IqSampleBlock, gmsk_demodulate, gmsk_modulate
from reactive_dsp.gsm.interleaving import deinterleave, interleave
from reactive_dsp.gsm.speech import SpeechBlock, speech_decode, speech_encode

PCM = np.dtype('<i2')
BITS = np.dtype(np.uint8)
IQ = np.dtype('<c8')  # interleaved float32 I, Q

Transform = Callable[[np.ndarray, int], np.ndarray]


def gsm_config(stage: StageConfig) -> GsmConfig:
    """The GsmConfig named by a stage's options."""
    try:
        return GsmConfig(**stage.options)
    except ValidationError as e:
        raise TopologyError(f"Stage {stage.name}: invalid options: {e}") from e


def _blockwise(stage: StageConfig, in_unit: int, out_unit: int, in_dtype: np.dtype,
               out_dtype: np.dtype, transform: Transform) -> Operation:
    """
    Wrap a per-block transform as a stage operation.

    The transform receives one block of in_unit samples and its block ordinal in the stream.

    Raises:
        TopologyError: If the stage widths or rates do not fit the blocks.
    """
    if stage.in_width != in_dtype.itemsize or stage.out_width != out_dtype.itemsize:
        raise TopologyError(f"Stage {stage.name}: {stage.operation} needs widths "
                            f"{in_dtype.itemsize} -> {out_dtype.itemsize}, got {stage.in_width} -> "
                            f"{stage.out_width}")
    if in_unit <= 0 or stage.in_rate % in_unit or \
            stage.out_rate != stage.in_rate // in_unit * out_unit:
        raise TopologyError(f"Stage {stage.name}: {stage.operation} maps {in_unit} samples to "
                            f"{out_unit}; rates {stage.in_rate} -> {stage.out_rate} do not fit")

    def operation(sample_range: SampleRange, data: bytes) -> bytes:
        blocks = np.frombuffer(data, dtype=in_dtype).reshape(-1, in_unit)
        first = sample_range.index // in_unit
        out = [transform(block, first + i) for i, block in enumerate(blocks)]
        return np.concatenate(out).astype(out_dtype).tobytes()
    return operation


# --------------------------------------------------------------------------------------------------
#  Downlink
# --------------------------------------------------------------------------------------------------

@register_operation('gsm.speech_encode')
def _speech_encode(stage: StageConfig) -> Operation:
    return _blockwise(stage, SAMPLES_PER_FRAME, SPEECH_BITS, PCM, BITS,
                      lambda pcm, frame: speech_encode(pcm, frame).bits)


@register_operation('gsm.channel_encode')
def _channel_encode(stage: StageConfig) -> Operation:
    coder = ChannelCoder(gsm_config(stage).layout)
    return _blockwise(stage, SPEECH_BITS, CODED_BITS, BITS, BITS,
                      lambda block, _frame: coder.encode(block))


@register_operation('gsm.interleave')
def _interleave(stage: StageConfig) -> Operation:
    return _blockwise(stage, CODED_BITS, CODED_BITS, BITS, BITS,
                      lambda frame, _frame: interleave(frame).ravel())


@register_operation('gsm.cipher')
def _cipher(stage: StageConfig) -> Operation:
    key = gsm_config(stage).cipher_key
    return _blockwise(stage, CODED_BITS, CODED_BITS, BITS, BITS,
                      lambda bursts, frame: cipher_bursts(bursts, key, frame))


@register_operation('gsm.gmsk_modulate')
def _gmsk_modulate(stage: StageConfig) -> Operation:
    config = gsm_config(stage)
    block = (stage.in_rate + 2 * config.guard_bits) * config.oversampling
    return _blockwise(stage, stage.in_rate, block, BITS, IQ,
                      lambda bits, _block: gmsk_modulate(bits, config.oversampling, config.bt,
                                                         config.guard_bits,
                                                         config.pulse_span).samples)


# --------------------------------------------------------------------------------------------------
#  Uplink
# --------------------------------------------------------------------------------------------------

@register_operation('gsm.gmsk_demodulate')
def _gmsk_demodulate(stage: StageConfig) -> Operation:
    config = gsm_config(stage)
    block = (stage.out_rate + 2 * config.guard_bits) * config.oversampling
    return _blockwise(stage, block, stage.out_rate, IQ, BITS,
                      lambda iq, _block: gmsk_demodulate(
                          IqSampleBlock(iq, config.oversampling, config.guard_bits)))


@register_operation('gsm.decipher')
def _decipher(stage: StageConfig) -> Operation:
    return _cipher(stage)


@register_operation('gsm.deinterleave')
def _deinterleave(stage: StageConfig) -> Operation:
    return _blockwise(stage, CODED_BITS, CODED_BITS, BITS, BITS,
                      lambda bursts, _frame: deinterleave(bursts.reshape(BURSTS, -1)))


@register_operation('gsm.channel_decode')
def _channel_decode(stage: StageConfig) -> Operation:
    coder = ChannelCoder(gsm_config(stage).layout)
    return _blockwise(stage, CODED_BITS, SPEECH_BITS, BITS, BITS,
                      lambda frame, _frame: coder.decode(frame)[0])


@register_operation('gsm.speech_decode')
def _speech_decode(stage: StageConfig) -> Operation:
    return _blockwise(stage, SPEECH_BITS, SAMPLES_PER_FRAME, BITS, PCM,
                      lambda bits, frame: speech_decode(SpeechBlock(bits.copy(), frame)))
