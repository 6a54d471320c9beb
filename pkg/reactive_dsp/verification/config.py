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

from typing import List

from pydantic import BaseModel, Field, field_validator


class VerificationConfig(BaseModel):
    """Configuration of model checking runs."""
    bound: int = Field(default=14, gt=0,
                       description="Tick bound D of the counting observers")
    max_states: int = Field(default=5_000_000, gt=0,
                            description="Reachable-state cap of the FSM extraction")
    observers: List[str] = Field(default_factory=lambda: ['s1', 's2', 's3'],
                                 description="Observers composed with the model: s1, s2, s3")
    workers: int = Field(default=1, ge=0,
                         description="Extraction worker threads (0 = one per physical core)")
    init_range: str = Field(default="0 1600",
                            description="Payload of InitRange in the default input alphabet")
    minimize: bool = Field(default=False,
                           description="Minimise the extracted FSM before checking")

    @field_validator('observers')
    @classmethod
    def _check_observers(cls, value: List[str]) -> List[str]:
        unknown = sorted(set(o.lower() for o in value) - {'s1', 's2', 's3'})
        if unknown:
            raise ValueError(f"Unknown observers {unknown}, expected s1, s2 or s3")
        return [o.lower() for o in value]
