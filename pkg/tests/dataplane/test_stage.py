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

# pylint: disable=protected-access


import pytest

from reactive_dsp.dataplane.config import StageKind
from reactive_dsp.dataplane.connector import Connector
from reactive_dsp.dataplane.errors import BufferOverrun, InsufficientData, SkipRange, StaleRange
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.stage import Stage, StageDescriptor, compute, estimate


@pytest.fixture
def source():
    """PCM source, 1600 samples of 2 bytes per frame."""
    return Stage(StageDescriptor('src', StageKind.SOURCE, out_rate=1600, in_width=2, out_width=2))


@pytest.fixture
def relay():
    """Pass-through stage of 57 one-byte samples."""
    return Stage(StageDescriptor('relay', in_rate=57, out_rate=57))


class TestStageDescriptor:
    """Test suite for stage declarations."""

    def test_source_defaults_in_rate(self):
        """A source in_rate of 0 means out_rate."""
        assert StageDescriptor('s', StageKind.SOURCE, out_rate=10).in_rate == 10

    def test_sink_has_no_output(self):
        """Sinks declare no output rate and no output ports."""
        with pytest.raises(ValueError, match="no output port"):
            StageDescriptor('k', StageKind.SINK, in_rate=10, out_rate=10)
        assert StageDescriptor('k', StageKind.SINK, in_rate=10).out_ports == 0

    def test_intermediate_needs_rates(self):
        """Intermediate stages need both rates."""
        with pytest.raises(ValueError, match="positive in_rate and out_rate"):
            StageDescriptor('x', in_rate=10)

    def test_output_size_law(self):
        """Output size is floor(input * out / in)."""
        descriptor = StageDescriptor('spcoder', in_rate=32000, out_rate=6600)
        assert descriptor.output_size(32000) == 6600
        assert descriptor.output_size(64000) == 13200


class TestEstimate:
    """Test suite for estimating."""

    def test_source_initial_range(self, source):
        """The initial window (0,1600) yields (0,1600)."""
        assert source.estimate(SampleRange(0, 1600)) == SampleRange(0, 1600)

    def test_source_consecutive(self, source):
        """After consuming (0,1600) the next estimate is (1600,1600)."""
        first = source.estimate(SampleRange(0, 1600))
        out = Connector('src', 'x', 1600, 2)
        source.compute(first, None, [out], bytes(3200))
        assert source.estimate(SampleRange(1600, 1600)) == SampleRange(1600, 1600)

    def test_source_disjoint_estimates(self, source):
        """Two estimates on a wide window are disjoint and monotone."""
        first = source.estimate(SampleRange(0, 4800))
        second = source.estimate(SampleRange(0, 4800))
        assert not first.overlaps(second)
        assert second.index == first.end

    def test_source_window_too_small(self, source):
        """A window smaller than a frame is insufficient."""
        with pytest.raises(InsufficientData, match="holds less than 1600"):
            source.estimate(SampleRange(0, 1000))

    def test_source_anchors_at_window(self, source):
        """The first window sets the cursor."""
        assert source.estimate(SampleRange(3200, 1600)) == SampleRange(3200, 1600)

    def test_rate_ratio(self):
        """A 32000 -> 6600 stage maps (0,32000) to (0,6600)."""
        coder = Stage(StageDescriptor('spcoder', in_rate=32000, out_rate=6600, in_width=8,
                                      out_width=8))
        assert estimate(coder, SampleRange(0, 32000)) == SampleRange(0, 6600)

    def test_upstream_smaller_than_frame(self, relay):
        """An upstream range shorter than the frame is refused."""
        with pytest.raises(InsufficientData, match="smaller than the frame"):
            relay.estimate(SampleRange(0, 20))

    def test_consumed_upstream(self, relay):
        """Re-estimating an already planned input is stale."""
        relay.estimate(SampleRange(0, 57))
        with pytest.raises(StaleRange, match="already consumed"):
            relay.estimate(SampleRange(0, 57))

    def test_peek_does_not_reserve(self, relay):
        """peek leaves the stage untouched."""
        assert relay.peek(SampleRange(0, 57)) == SampleRange(0, 57)
        assert relay.pending == ()
        assert relay.estimate(SampleRange(0, 57)) == SampleRange(0, 57)


class TestCompute:
    """Test suite for computing."""

    def test_passthrough(self, relay):
        """A pass-through stage copies its input range."""
        data = bytes(range(57))
        cin, cout = Connector('up', 'relay', 57, 1), Connector('relay', 'down', 57, 1)
        cin.write(SampleRange(0, 57), data)
        planned = relay.estimate(SampleRange(0, 57))
        produced = compute(relay, planned, cin, cout)
        assert produced == SampleRange(0, 57)
        assert cout.read(produced) == data
        assert cin.read_cursor == 57

    def test_recompute_is_stale(self, relay):
        """A range is computed once."""
        cin, cout = Connector('up', 'relay', 57, 1), Connector('relay', 'down', 57, 1)
        cin.write(SampleRange(0, 57), bytes(57))
        planned = relay.estimate(SampleRange(0, 57))
        relay.compute(planned, cin, [cout])
        with pytest.raises(StaleRange, match="already computed"):
            relay.compute(planned, cin, [cout])

    def test_out_of_order(self, relay):
        """Ranges are computed in estimation order."""
        relay.estimate(SampleRange(0, 57))
        second = relay.estimate(SampleRange(57, 57))
        with pytest.raises(StaleRange, match="out of order"):
            relay.compute(second, None, [])

    def test_overrun_keeps_plan(self, relay):
        """A full downstream connector refuses the compute."""
        cin, cout = Connector('up', 'relay', 57, 1), Connector('relay', 'down', 57, 1)
        cout.write(SampleRange(0, 114), bytes(114))
        cin.write(SampleRange(0, 57), bytes(57))
        planned = relay.estimate(SampleRange(0, 57))
        with pytest.raises(BufferOverrun):
            relay.compute(planned, cin, [cout])
        assert relay.pending == (planned,)

    def test_fan_out(self):
        """Every output port receives the produced range."""
        stage = Stage(StageDescriptor('split', in_rate=4, out_rate=4, out_ports=2))
        cin = Connector('up', 'split', 4, 1)
        outs = [Connector('split', 'a', 4, 1), Connector('split', 'b', 4, 1)]
        cin.write(SampleRange(0, 4), b"wxyz")
        stage.compute(stage.estimate(SampleRange(0, 4)), cin, outs)
        assert [c.read(SampleRange(0, 4)) for c in outs] == [b"wxyz", b"wxyz"]

    def test_skip_policy(self, mock_logger):
        """An operation raising SkipRange produces a skip marker downstream."""
        def refuse(_range, _data):
            raise SkipRange("uncorrectable")
        stage = Stage(StageDescriptor('dec', in_rate=4, out_rate=2, compute=refuse), mock_logger)
        sink = Stage(StageDescriptor('sink', StageKind.SINK, in_rate=2))
        cin, mid = Connector('up', 'dec', 4, 1), Connector('dec', 'sink', 2, 1)
        cin.write(SampleRange(0, 4), bytes(4))
        marker = stage.compute(stage.estimate(SampleRange(0, 4)), cin, [mid])
        assert marker == SampleRange.skip(0)
        assert stage.skips == 1
        mock_logger.warning.assert_called_once()
        assert mid.is_skipped(SampleRange(0, 2))

        planned = sink.estimate(marker)
        assert planned.is_skip
        assert sink.compute(planned, mid, []).is_skip
        assert sink.collected == bytearray()
        assert mid.read_cursor == 2

    def test_sink_collects(self):
        """Sinks keep the bytes they consume."""
        sink = Stage(StageDescriptor('sink', StageKind.SINK, in_rate=3))
        cin = Connector('up', 'sink', 3, 1)
        cin.write(SampleRange(0, 3), b"abc")
        sink.compute(sink.estimate(SampleRange(0, 3)), cin, [])
        assert bytes(sink.collected) == b"abc"

    def test_source_needs_data(self, source):
        """Source computes need the stream bytes."""
        planned = source.estimate(SampleRange(0, 1600))
        with pytest.raises(InsufficientData, match="missing or short"):
            source.compute(planned, None, [Connector('src', 'x', 1600, 2)], b"")

    def test_wrong_operation_length(self):
        """Operations must honour the output rate."""
        stage = Stage(StageDescriptor('bad', in_rate=2, out_rate=2, compute=lambda r, d: b"x"))
        cin = Connector('up', 'bad', 2, 1)
        cin.write(SampleRange(0, 2), b"ab")
        with pytest.raises(ValueError, match="returned 1 bytes"):
            stage.compute(stage.estimate(SampleRange(0, 2)), cin, [Connector('bad', 'k', 2, 1)])

    def test_conservation(self):
        """Output samples follow the rate ratio over several frames."""
        stage = Stage(StageDescriptor('half', in_rate=4, out_rate=2,
                                      compute=lambda r, d: d[::2]))
        cin, cout = Connector('up', 'half', 4, 1, 4), Connector('half', 'k', 2, 1, 8)
        for frame in range(3):
            cin.write(SampleRange(4 * frame, 4), bytes(4))
            stage.compute(stage.estimate(SampleRange(4 * frame, 4)), cin, [cout])
        assert (stage.samples_in, stage.samples_out) == (12, 6)
