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
Builders for the GSM downlink (speech to IQ samples) and uplink (IQ samples to speech) topologies,
and for the rate-only wiring of the reference downlink.
"""

import logging
from typing import Optional, Sequence, Tuple

from reactive_dsp.dataplane.config import EdgeConfig, StageConfig, StageKind, TopologyConfig
from reactive_dsp.dataplane.topology import Topology, build_topology
from reactive_dsp.gsm.config import CODED_BITS, RATES, SAMPLES_PER_FRAME, SPEECH_BITS, GsmConfig

DOWNLINK_STAGES = ['pcm_source', 'speech_coder', 'channel_coder', 'interleaver', 'cipher',
                   'modulator', 'iq_sink']
UPLINK_STAGES = ['iq_source', 'demodulator', 'decipher', 'deinterleaver', 'channel_decoder',
                 'speech_decoder', 'pcm_sink']

DOWNLINK_OPERATIONS = ['passthrough', 'gsm.speech_encode', 'gsm.channel_encode', 'gsm.interleave',
                       'gsm.cipher', 'gsm.gmsk_modulate', 'passthrough']
UPLINK_OPERATIONS = ['passthrough', 'gsm.gmsk_demodulate', 'gsm.decipher', 'gsm.deinterleave',
                     'gsm.channel_decode', 'gsm.speech_decode', 'passthrough']

PCM_WIDTH = 2
BIT_WIDTH = 1
IQ_WIDTH = 8

# (samples, width) carried out of each downlink stage per 20 ms frame, IQ excluded
_DOWNLINK_FRAME = [(SAMPLES_PER_FRAME, PCM_WIDTH), (SPEECH_BITS, BIT_WIDTH),
                   (CODED_BITS, BIT_WIDTH), (CODED_BITS, BIT_WIDTH), (CODED_BITS, BIT_WIDTH)]


def iq_samples_per_item(config: GsmConfig) -> int:
    """IQ samples produced for one item of frames_per_item frames."""
    return (config.frames_per_item * CODED_BITS + 2 * config.guard_bits) * config.oversampling


def _chain(name: str, names: Sequence[str], operations: Sequence[str],
           rates: Sequence[Tuple[int, int]], options: dict, init_size: int) -> TopologyConfig:
    """A linear topology; rates[i] is the (rate, width) of the edge out of stage i."""
    stages = []
    for i, (stage, operation) in enumerate(zip(names, operations)):
        kind = StageKind.SOURCE if i == 0 else \
            StageKind.SINK if i == len(names) - 1 else StageKind.INTERMEDIATE
        in_rate, in_width = rates[i - 1] if i > 0 else rates[0]
        out_rate, out_width = rates[i] if i < len(rates) else (0, in_width)
        stages.append(StageConfig(name=stage, kind=kind, operation=operation, in_rate=in_rate,
                                  out_rate=out_rate, in_width=in_width, out_width=out_width,
                                  options=options if operation.startswith('gsm.') else {}))
    edges = [EdgeConfig(up=up, down=down, rate=rate, width=width)
             for (up, down), (rate, width) in zip(zip(names, names[1:]), rates)]
    return TopologyConfig(name=name, init_range=f"0 {init_size}", stages=stages, edges=edges)


def downlink_config(config: Optional[GsmConfig] = None) -> TopologyConfig:
    """Declarative downlink: pcm_source -> ... -> iq_sink, one item of frames per frame rate."""
    config = config or GsmConfig()
    frames = config.frames_per_item
    rates = [(samples * frames, width) for samples, width in _DOWNLINK_FRAME]
    rates.append((iq_samples_per_item(config), IQ_WIDTH))
    return _chain('gsm_downlink', DOWNLINK_STAGES, DOWNLINK_OPERATIONS, rates,
                  config.model_dump(mode='json'), rates[0][0])


def uplink_config(config: Optional[GsmConfig] = None) -> TopologyConfig:
    """Declarative uplink, the downlink's operations reversed."""
    config = config or GsmConfig()
    frames = config.frames_per_item
    rates = [(iq_samples_per_item(config), IQ_WIDTH)]
    rates.extend((samples * frames, width) for samples, width in reversed(_DOWNLINK_FRAME[1:]))
    rates.append((SAMPLES_PER_FRAME * frames, PCM_WIDTH))
    return _chain('gsm_uplink', UPLINK_STAGES, UPLINK_OPERATIONS, rates,
                  config.model_dump(mode='json'), rates[0][0])


def reference_config() -> TopologyConfig:
    """
    The reference downlink wiring with the RATE1..RATE5 connector rates and 8-byte samples. Stages
    only resample, so the topology exercises rates and scheduling, not GSM processing.
    """
    rates = [(RATES[r], 8) for r in ('RATE1', 'RATE2', 'RATE3', 'RATE4', 'RATE4', 'RATE5')]
    operations = ['passthrough'] + ['rate_convert'] * 5 + ['passthrough']
    return _chain('gsm_reference', DOWNLINK_STAGES, operations, rates, {}, RATES['RATE1'])


def build_downlink(config: Optional[GsmConfig] = None,
                   logger: Optional[logging.Logger] = None) -> Topology:
    """The validated downlink topology."""
    return build_topology(downlink_config(config), logger)


def build_uplink(config: Optional[GsmConfig] = None,
                 logger: Optional[logging.Logger] = None) -> Topology:
    """The validated uplink topology."""
    return build_topology(uplink_config(config), logger)


def build_reference(logger: Optional[logging.Logger] = None) -> Topology:
    """The validated rate-only reference downlink."""
    return build_topology(reference_config(), logger)
