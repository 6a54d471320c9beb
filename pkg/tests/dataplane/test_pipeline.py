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

import pytest

from reactive_dsp.dataplane.config import StageKind
from reactive_dsp.dataplane.pipeline import Pipeline, SourceStream
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.stage import StageDescriptor
from reactive_dsp.dataplane.topology import Topology


@pytest.fixture
def topology():
    """src (4 samples of 2 bytes) -> relay -> sink."""
    topology = Topology('mini', init_range=SampleRange(0, 4))
    topology.add_stage(StageDescriptor('src', StageKind.SOURCE, out_rate=4, in_width=2,
                                       out_width=2))
    topology.add_stage(StageDescriptor('relay', in_rate=4, out_rate=4, in_width=2, out_width=2))
    topology.add_stage(StageDescriptor('sink', StageKind.SINK, in_rate=4, in_width=2))
    topology.connect('src', 'relay', 4, 2)
    topology.connect('relay', 'sink', 4, 2)
    return topology


def drain(pipeline):
    """Push every source frame through the chain stage by stage."""
    while pipeline.has_frame('src'):
        produced = pipeline.compute('src', pipeline.estimate('src'))
        produced = pipeline.compute('relay', pipeline.estimate('relay', produced))
        pipeline.compute('sink', pipeline.estimate('sink', produced))


class TestSourceStream:
    """Test suite for source streams."""

    def test_window(self):
        """The window runs from the cursor to the stream end."""
        stream = SourceStream(bytes(20), 2)
        assert stream.window(4) == SampleRange(4, 6)
        assert stream.window(30) == SampleRange(30, 0)

    def test_partial_sample(self):
        """Streams hold whole samples."""
        with pytest.raises(ValueError, match="whole number"):
            SourceStream(bytes(3), 2)


class TestPipeline:
    """Test suite for the pipeline runtime."""

    def test_drain_copies_stream(self, topology):
        """Whole frames arrive at the sink; the trailing partial frame is left."""
        data = bytes(range(20))
        pipeline = Pipeline(topology, {'src': data})
        assert pipeline.total_frames('src') == 2
        drain(pipeline)
        assert pipeline.output('sink') == data[:16]
        assert pipeline.sink_items() == [2]
        assert pipeline.counters()['relay'] == {'estimates': 2, 'computes': 2, 'skips': 0}

    def test_pipelines_are_independent(self, topology):
        """Two pipelines over one topology own separate connectors."""
        first = Pipeline(topology, {'src': bytes(8)})
        second = Pipeline(topology, {'src': bytes(range(8))})
        drain(first)
        drain(second)
        assert first.outputs() == {'sink': bytes(8)}
        assert second.outputs() == {'sink': bytes(range(8))}

    def test_unknown_input(self, topology):
        """Streams are only accepted for sources."""
        with pytest.raises(ValueError, match="unknown sources"):
            Pipeline(topology, {'relay': b""})

    def test_source_window_follows_cursor(self, topology):
        """The window moves with the source cursor."""
        pipeline = Pipeline(topology, {'src': bytes(16)})
        assert pipeline.source_window('src') == SampleRange(0, 8)
        pipeline.estimate('src')
        assert pipeline.source_window('src') == SampleRange(4, 4)
