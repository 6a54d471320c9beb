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

from reactive_dsp.dataplane.errors import SkipRange


class WrongFrameLength(ValueError):
    """A PCM frame, speech block or coded frame has the wrong number of samples or bits."""


class UncorrectableFrame(SkipRange):
    """Channel decoding left a parity mismatch; the range is dropped under the skip policy."""


class WrongBurstCount(ValueError):
    """Deinterleaving needs exactly 8 bursts of 57 bits."""


class ShortKeystream(ValueError):
    """The keystream is shorter than the burst it should cipher."""


class BadOversampling(ValueError):
    """GMSK needs at least 4 samples per bit."""
