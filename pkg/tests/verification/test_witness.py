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

from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.scheduling.protocol import Bug
from reactive_dsp.verification.emission import EmissionStatus, EmissionVerdict
from reactive_dsp.verification.errors import WitnessMismatch
from reactive_dsp.verification.models import build_model, verify_model
from reactive_dsp.verification.observers import S1_VIOLATED
from reactive_dsp.verification.witness import (WitnessRecord, load_witness, parse_letter,
                                               replay_witness, save_witness, witness_record)


@pytest.fixture(scope='module')
def record():
    """Witness of the early-ack deadlock violation."""
    model = build_model(bug=Bug.EARLY_ACK, observers=['s1'])
    verdict = verify_model(model).verdicts[0]
    return witness_record(verdict, model.program, model.options())


class TestWitnessRecord:
    """Test suite for witness records."""

    def test_content(self, record):
        """The record names the violation, its alias and the model."""
        assert record.signal == S1_VIOLATED
        assert record.alias == 'violated_deadlockfreedom'
        assert record.model['bug'] == 'early_ack'
        assert record.letters[2] == ['IP_Addr', 'InitRange=0:1600']

    def test_never_emitted(self):
        """Never-emitted verdicts have nothing to record."""
        model = build_model(observers=['s1'])
        with pytest.raises(ValueError, match="no witness"):
            witness_record(EmissionVerdict(S1_VIOLATED, EmissionStatus.NEVER_EMITTED),
                           model.program)

    def test_save_load(self, record, tmp_path, mock_logger):
        """Witness files are YAML and load back unchanged."""
        path = tmp_path / "witness" / "s1.yaml"
        save_witness(record, path, mock_logger)
        assert "signal: S1_VIOLATED" in path.read_text()
        assert load_witness(path, mock_logger) == record

    def test_missing_file(self, tmp_path):
        """Loading a missing witness fails clearly."""
        with pytest.raises(FileNotFoundError):
            load_witness(tmp_path / "none.yaml")


class TestParseLetter:
    """Test suite for witness items."""

    def test_payloads(self):
        """Range payloads are parsed back."""
        program = build_model(observers=()).program
        assert parse_letter(program, ['IP_Addr', 'InitRange=0:1600']) == (
            ('IP_Addr', None), ('InitRange', SampleRange(0, 1600)))

    def test_not_an_input(self):
        """Items must be inputs."""
        program = build_model(observers=()).program
        with pytest.raises(WitnessMismatch, match="Fire_cipher is not an input"):
            parse_letter(program, ['Fire_cipher'])

    def test_bad_payload(self):
        """Malformed payloads are reported."""
        program = build_model(observers=()).program
        with pytest.raises(WitnessMismatch, match="malformed"):
            parse_letter(program, ['InitRange=zero'])


class TestReplayWitness:
    """Test suite for witness replay."""

    def test_reproduced(self, record):
        """A fresh build of the same model emits the violation at the last tick."""
        program = build_model(bug=Bug.EARLY_ACK, observers=['s1']).program
        result = replay_witness(program, record)
        assert result.reproduced
        assert result.violation_tick == len(record.letters) - 1

    def test_other_model(self, record):
        """The fingerprint must match."""
        program = build_model(observers=['s1']).program
        with pytest.raises(WitnessMismatch, match="recorded on model"):
            replay_witness(program, record)

    def test_used_program(self, record):
        """Replay starts from tick 0."""
        program = build_model(bug=Bug.EARLY_ACK, observers=['s1']).program
        program.react()
        with pytest.raises(ValueError, match="initial state"):
            replay_witness(program, record)

    def test_not_reproduced(self, record, mock_logger):
        """A truncated witness does not reach the violation."""
        program = build_model(bug=Bug.EARLY_ACK, observers=['s1']).program
        truncated = WitnessRecord(**{**record.model_dump(), 'letters': record.letters[:-1]})
        result = replay_witness(program, truncated, mock_logger)
        assert not result.reproduced
        assert result.violation_tick is None
        mock_logger.warning.assert_called_once()
