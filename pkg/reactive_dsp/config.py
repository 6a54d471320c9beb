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

from pydantic import BaseModel, Field

from reactive_dsp.dataplane.config import ConnectorConfig
from reactive_dsp.gsm.config import GsmConfig
from reactive_dsp.kernel.config import KernelConfig
from reactive_dsp.scheduling.config import SchedulerConfig
from reactive_dsp.utilities.config import FileManagerConfig, LoggingConfig
from reactive_dsp.verification.config import VerificationConfig


class RuntimeConfig(BaseModel):
    """Root configuration for the reactive-dsp command line."""
    connector: ConnectorConfig = Field(default_factory=ConnectorConfig)
    file_manager: FileManagerConfig = Field(default_factory=FileManagerConfig)
    gsm: GsmConfig = Field(default_factory=GsmConfig)
    kernel: KernelConfig = Field(default_factory=KernelConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    scheduler: SchedulerConfig = Field(default_factory=SchedulerConfig)
    verification: VerificationConfig = Field(default_factory=VerificationConfig)
