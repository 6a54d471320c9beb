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

from typing import Optional

from pydantic import BaseModel, Field


class KernelConfig(BaseModel):
    """Configuration of the synchronous kernel."""
    max_micro_steps: Optional[int] = Field(
        default=None,
        gt=0,
        description="Cap on the micro-steps of one reaction. None uses the declared signal count "
                    "plus one.")
