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
Emission status of output signals over an extracted FSM.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

from reactive_dsp.kernel.signals import SignalId
from reactive_dsp.verification.errors import UnknownSignal
from reactive_dsp.verification.fsm import Fsm, Letter, format_letter, letter_items
from reactive_dsp.verification.observers import ALIASES


class EmissionStatus(Enum):
    """Verdict of an emission check."""
    POSSIBLY_EMITTED = 'possibly-emitted'
    NEVER_EMITTED = 'never-emitted'


@dataclass(frozen=True)
class EmissionVerdict:
    """
    Whether a signal can be emitted. A possibly-emitted verdict carries a shortest input sequence
    from the initial state whose last reaction emits the signal.
    """
    signal: str
    status: EmissionStatus
    witness: Optional[Tuple[Letter, ...]] = None

    def __post_init__(self):
        if (self.witness is not None) != (self.status is EmissionStatus.POSSIBLY_EMITTED):
            raise ValueError(f"Verdict on {self.signal}: a witness goes with possibly-emitted only")

    @property
    def emitted(self) -> bool:
        """True for possibly-emitted."""
        return self.status is EmissionStatus.POSSIBLY_EMITTED

    @property
    def alias(self) -> Optional[str]:
        """Alternative name of the signal, if any."""
        return ALIASES.get(self.signal)

    def as_record(self) -> Dict[str, Any]:
        """`{signal, alias, status, witness[]}`; witness letters in text form."""
        return {'signal': self.signal, 'alias': self.alias, 'status': self.status.value,
                'witness': [letter_items(value) for value in self.witness or ()]}

    def __str__(self):
        line = f"{self.signal}: {self.status.value}"
        if self.witness is not None:
            line += f" after {len(self.witness)} ticks " + " ".join(format_letter(v)
                                                                    for v in self.witness)
        return line


def check_emission(fsm: Fsm, signal: str | SignalId,
                   logger: Optional[logging.Logger] = None) -> EmissionVerdict:
    """
    Decide whether any reachable transition emits a signal.

    The search is breadth first with letters in alphabet order, so the witness is the shortest
    input sequence, ties going to the lexicographically smallest one.

    Raises:
        UnknownSignal: If the signal is not an output of the FSM.
    """
    logger = logger or logging.getLogger(__name__)
    name = signal.name if isinstance(signal, SignalId) else signal
    if name not in fsm.outputs:
        raise UnknownSignal(f"{name} is not an output of the FSM")

    parents: Dict[int, Optional[Tuple[int, Letter]]] = {fsm.initial: None}
    queue = deque([fsm.initial])
    while queue:
        state = queue.popleft()
        for t in fsm.successors(state):
            if name in t.outputs:
                witness = [t.letter]
                step = parents[state]
                while step is not None:
                    witness.append(step[1])
                    step = parents[step[0]]
                verdict = EmissionVerdict(name, EmissionStatus.POSSIBLY_EMITTED,
                                          tuple(reversed(witness)))
                logger.info(str(verdict))
                return verdict
            if t.target not in parents:
                parents[t.target] = (state, t.letter)
                queue.append(t.target)
    logger.info(f"{name}: never-emitted over {len(parents)} reachable states")
    return EmissionVerdict(name, EmissionStatus.NEVER_EMITTED)


def check_all(fsm: Fsm, signals: Iterable[str | SignalId],
              logger: Optional[logging.Logger] = None) -> List[EmissionVerdict]:
    """check_emission for several signals, in the given order."""
    return [check_emission(fsm, signal, logger) for signal in signals]
