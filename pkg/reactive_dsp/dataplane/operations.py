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
Registry of stage operations addressable by name from topology files. Factories receive the stage
entry (rates, widths, options) and return the operation. Names with a package prefix ("gsm.")
are registered by that package on first use.
"""

import importlib
from typing import Callable, Dict, List

import numpy as np

from reactive_dsp.dataplane.config import StageConfig, StageKind
from reactive_dsp.dataplane.errors import TopologyError
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.stage import Operation, passthrough

OperationFactory = Callable[[StageConfig], Operation]

_REGISTRY: Dict[str, OperationFactory] = {}
_PROVIDERS = {'gsm': 'reactive_dsp.gsm.stages'}


def register_operation(name: str):
    """Decorator registering an operation factory under name."""
    def decorator(factory: OperationFactory) -> OperationFactory:
        if name in _REGISTRY:
            raise ValueError(f"Operation {name} registered twice")
        _REGISTRY[name] = factory
        return factory
    return decorator


def resolve_operation(stage: StageConfig) -> Operation:
    """
    Build the operation of a stage entry.

    Raises:
        TopologyError: If the operation is unknown or does not fit the stage rates.
    """
    name = stage.operation
    prefix = name.split('.', 1)[0]
    if name not in _REGISTRY and prefix in _PROVIDERS:
        importlib.import_module(_PROVIDERS[prefix])
    factory = _REGISTRY.get(name)
    if factory is None:
        raise TopologyError(f"Stage {stage.name}: unknown operation '{name}'")
    return factory(stage)


def registered_operations() -> List[str]:
    """Names currently registered."""
    return sorted(_REGISTRY)


def _frame_bytes(stage: StageConfig):
    in_rate = stage.in_rate or stage.out_rate
    return in_rate * stage.in_width, stage.out_rate * stage.out_width


@register_operation('passthrough')
def _passthrough(stage: StageConfig) -> Operation:
    in_bytes, out_bytes = _frame_bytes(stage)
    if stage.kind is not StageKind.SINK and in_bytes != out_bytes:
        raise TopologyError(f"Stage {stage.name}: passthrough needs equal input and output frame "
                            f"sizes, got {in_bytes} and {out_bytes} bytes")
    return passthrough


@register_operation('discard')
def _discard(stage: StageConfig) -> Operation:
    if stage.kind is not StageKind.SINK:
        raise TopologyError(f"Stage {stage.name}: discard is a sink operation")
    return lambda _range, _data: b""


@register_operation('rate_convert')
def _rate_convert(stage: StageConfig) -> Operation:
    """Nearest-sample resampling from in_rate to out_rate samples per frame, equal widths."""
    if stage.in_width != stage.out_width:
        raise TopologyError(f"Stage {stage.name}: rate_convert keeps the sample width")
    width = stage.in_width

    def convert(sample_range: SampleRange, data: bytes) -> bytes:
        samples = np.frombuffer(data, dtype=np.uint8).reshape(sample_range.size, width)
        size = sample_range.size * stage.out_rate // stage.in_rate
        if size == 0:
            return b""
        picks = np.arange(size, dtype=np.int64) * sample_range.size // size
        return samples[picks].tobytes()
    return convert
