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

from pydantic import BaseModel, Field


class SchedulerKind(Enum):
    """Available schedulers."""
    DRM = 'drm'
    DPM = 'dpm'


class TimingMode(Enum):
    """Ticks a data-reactive stage spends per item."""
    ONE_TICK = 'one_tick'
    TWO_TICK = 'two_tick'


class SchedulerConfig(BaseModel):
    """Configuration of a pipeline run."""
    scheduler: SchedulerKind = Field(default=SchedulerKind.DRM, description="drm|dpm")
    mode: TimingMode = Field(default=TimingMode.TWO_TICK,
                             description="Data-reactive timing: one_tick|two_tick")
    workers: int = Field(
        default=1,
        ge=0,
        description="Compute worker threads (1 = single-threaded, 0 = one per physical core)")
    tick_limit: int = Field(default=100000, gt=0,
                            description="Maximum number of reactions of a run")
