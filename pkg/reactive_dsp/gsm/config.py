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

from pydantic import BaseModel, Field, model_validator

SAMPLES_PER_FRAME = 160
SPEECH_BITS = 260
CODED_BITS = 456
BURSTS = 8
BURST_BITS = 57

# Connector rates of the reference downlink wiring
RATES = {
    'RATE1': 32000,
    'RATE2': 6600,
    'RATE3': 91200,
    'RATE4': 118400,
    'RATE5': 177600,
}


class ChannelCodeLayout(BaseModel):
    """Split of a 260-bit speech block into protected and unprotected classes."""
    class1a: int = Field(default=50, gt=0, description="Bits covered by the parity check")
    parity: int = Field(default=3, description="CRC bits over class 1a (polynomial D^3 + D + 1)")
    class1b: int = Field(default=132, ge=0, description="Further convolutionally coded bits")
    tail: int = Field(default=4, description="Zero bits flushing the K=5 encoder")
    class2: int = Field(default=78, ge=0, description="Bits sent uncoded")

    @model_validator(mode='after')
    def _check_sizes(self) -> "ChannelCodeLayout":
        if self.parity != 3 or self.tail != 4:
            raise ValueError("The parity polynomial fixes 3 parity bits and K=5 fixes 4 tail bits")
        if self.class1a + self.class1b + self.class2 != SPEECH_BITS:
            raise ValueError(f"Classes must cover {SPEECH_BITS} bits")
        if 2 * self.protected + self.class2 != CODED_BITS:
            raise ValueError(f"Layout codes to {2 * self.protected + self.class2} bits, not "
                             f"{CODED_BITS}")
        return self

    @property
    def protected(self) -> int:
        """Bits entering the convolutional encoder."""
        return self.class1a + self.parity + self.class1b + self.tail


class GsmConfig(BaseModel):
    """Parameters of the GSM radio-interface stages."""
    layout: ChannelCodeLayout = Field(default_factory=ChannelCodeLayout)
    bt: float = Field(default=0.3, gt=0, description="Gaussian filter bandwidth-time product")
    oversampling: int = Field(default=8, gt=0, description="IQ samples per bit")
    guard_bits: int = Field(default=2, ge=0,
                            description="Zero bits modulated on each side of a block")
    pulse_span: int = Field(default=4, gt=0, description="Gaussian pulse length in bits")
    cipher_key: int = Field(default=0, ge=0, lt=2 ** 64, description="64-bit cipher key")
    frames_per_item: int = Field(default=10, gt=0,
                                 description="20 ms speech frames moved per pipeline item")
