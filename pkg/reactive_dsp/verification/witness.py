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

"""
Counterexample witnesses: YAML files recording the violation, the model they were found on and the
input letters, and their replay through the kernel.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.kernel.program import Program, Reaction
from reactive_dsp.kernel.signals import SignalDirection, SignalKind
from reactive_dsp.utilities.config_manager import ConfigManager
from reactive_dsp.verification.emission import EmissionVerdict
from reactive_dsp.verification.errors import WitnessMismatch
from reactive_dsp.verification.fsm import Letter, letter, letter_items


class WitnessRecord(BaseModel):
    """Content of a witness file."""
    signal: str = Field(description="Violation signal emitted at the last tick")
    alias: Optional[str] = Field(default=None, description="Alternative name of the signal")
    fingerprint: str = Field(description="Structural digest of the composed program")
    model: Dict[str, Any] = Field(default_factory=dict,
                                  description="Options that built the model")
    letters: List[List[str]] = Field(default_factory=list,
                                     description="Input items per tick, e.g. 'InitRange=0:1600'")


def witness_record(verdict: EmissionVerdict, program: Program,
                   model: Optional[Dict[str, Any]] = None) -> WitnessRecord:
    """
    Record a possibly-emitted verdict found on a program.

    Raises:
        ValueError: If the verdict has no witness.
    """
    if verdict.witness is None:
        raise ValueError(f"{verdict.signal} is never emitted; there is no witness to record")
    return WitnessRecord(signal=verdict.signal, alias=verdict.alias,
                         fingerprint=program.fingerprint(), model=dict(model or {}),
                         letters=[letter_items(value) for value in verdict.witness])


def save_witness(record: WitnessRecord, path: Path, logger: Optional[logging.Logger] = None):
    """Write a witness file."""
    manager = ConfigManager(path, WitnessRecord)
    manager.attach_logger(logger)
    manager.use(record)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    manager.save()


def load_witness(path: Path, logger: Optional[logging.Logger] = None) -> WitnessRecord:
    """
    Read a witness file.

    Raises:
        FileNotFoundError: If the file does not exist.
    """
    manager = ConfigManager(path, WitnessRecord)
    manager.attach_logger(logger)
    return manager.load()


def parse_letter(program: Program, items: List[str]) -> Letter:
    """
    Turn witness items back into a letter of program inputs.

    Raises:
        WitnessMismatch: If an item is not an input of the program or its payload is malformed.
    """
    pairs = []
    for item in items:
        name, _, text = item.partition('=')
        signal = program.signals.get(name)
        if signal is None or signal.direction is not SignalDirection.INPUT:
            raise WitnessMismatch(f"Witness input {name} is not an input of the model")
        try:
            match signal.kind:
                case SignalKind.PURE:
                    value = None
                case SignalKind.RANGE:
                    value = SampleRange.parse(text)
                case SignalKind.INTEGER:
                    value = int(text)
        except ValueError as e:
            raise WitnessMismatch(f"Witness payload of {name} is malformed: {e}") from e
        pairs.append((name, value))
    return letter(*pairs)


@dataclass
class ReplayResult:
    """Reactions of a replay and whether the last one emitted the recorded violation."""
    reactions: List[Reaction]
    reproduced: bool

    @property
    def violation_tick(self) -> Optional[int]:
        """Tick of the reproduced violation."""
        return self.reactions[-1].tick if self.reproduced else None


def replay_witness(program: Program, record: WitnessRecord,
                   logger: Optional[logging.Logger] = None) -> ReplayResult:
    """
    Feed the witness letters, one per tick, to a program in its initial state.

    Raises:
        WitnessMismatch: If the program is structurally different from the recorded one, or a
            letter does not fit its inputs.
        ValueError: If the program already reacted.
    """
    logger = logger or logging.getLogger(__name__)
    if program.fingerprint() != record.fingerprint:
        raise WitnessMismatch(f"Witness for {record.signal} was recorded on model "
                              f"{record.fingerprint[:12]}, this model is "
                              f"{program.fingerprint()[:12]}")
    if program.tick != 0:
        raise ValueError("Replay needs a program in its initial state")
    reactions = [program.react(dict(parse_letter(program, items))) for items in record.letters]
    reproduced = bool(reactions) and reactions[-1].emitted(record.signal)
    if reproduced:
        logger.info(f"Witness reproduced {record.signal} at tick {reactions[-1].tick}")
    else:
        logger.warning(f"Witness of {record.signal} replayed without the violation")
    return ReplayResult(reactions, reproduced)
