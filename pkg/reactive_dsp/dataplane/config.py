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

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from reactive_dsp.dataplane.sample_range import SampleRange


class StageKind(Enum):
    """Module taxonomy: sources have no input port, sinks no output port."""
    SOURCE = 'source'
    INTERMEDIATE = 'intermediate'
    SINK = 'sink'


class ConnectorConfig(BaseModel):
    """Configuration for ring-buffer connectors."""
    capacity_frames: int = Field(
        default=2,
        ge=2,
        description="Connector capacity in frames of the connector rate (2 = double buffering)")


class StageConfig(BaseModel):
    """One stage of a declarative topology."""
    name: str = Field(description="Unique stage name")
    kind: StageKind = Field(default=StageKind.INTERMEDIATE, description="source|intermediate|sink")
    operation: str = Field(default="passthrough", description="Registered operation name")
    in_rate: int = Field(default=0, ge=0, description="Input samples per frame (0 for sources "
                                                      "means equal to out_rate)")
    out_rate: int = Field(default=0, ge=0, description="Output samples per frame (0 for sinks)")
    in_width: int = Field(default=1, gt=0, description="Bytes per input sample")
    out_width: int = Field(default=1, gt=0, description="Bytes per output sample")
    options: Dict[str, Any] = Field(default_factory=dict,
                                    description="Keyword options passed to the operation factory")


class EdgeConfig(BaseModel):
    """One connector of a declarative topology, in wiring order."""
    up: str = Field(description="Upstream stage name")
    down: str = Field(description="Downstream stage name")
    rate: int = Field(gt=0, description="Samples per frame carried by the connector")
    width: int = Field(default=1, gt=0, description="Bytes per sample")


class TopologyConfig(BaseModel):
    """Declarative topology file."""
    name: str = Field(default="topology", description="Topology name used in reports")
    init_range: str = Field(default="0 1600",
                            description="Initial source window, '<index> <size>'")
    connector: ConnectorConfig = Field(default_factory=ConnectorConfig)
    stages: List[StageConfig] = Field(default_factory=list)
    edges: List[EdgeConfig] = Field(default_factory=list)

    @field_validator('init_range')
    @classmethod
    def _check_init_range(cls, value: str) -> str:
        SampleRange.parse(value)
        return value

    @model_validator(mode='after')
    def _check_names(self) -> "TopologyConfig":
        names = [s.name for s in self.stages]
        if len(set(names)) != len(names):
            raise ValueError("Stage names must be unique")
        for edge in self.edges:
            for name in (edge.up, edge.down):
                if name not in names:
                    raise ValueError(f"Edge references unknown stage {name}")
        return self

    def initial_range(self) -> SampleRange:
        """The parsed init_range."""
        return SampleRange.parse(self.init_range)

    def stage(self, name: str) -> Optional[StageConfig]:
        """Look up a stage entry."""
        return next((s for s in self.stages if s.name == name), None)
