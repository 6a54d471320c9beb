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

import logging
from typing import Optional, Sequence

from reactive_dsp.kernel.program import Program, declare_program
from reactive_dsp.verification.errors import SignalCollision
from reactive_dsp.verification.observers import ObserverSpec


def compose(program: Program, observers: Sequence[ObserverSpec],
            logger: Optional[logging.Logger] = None) -> Program:
    """
    Synchronous parallel composition of a program with observers.

    The result holds the program's automata, signals, halt signal and suspension bindings plus the
    observer automata and violation outputs, all in their initial states. Without observers the
    program itself is returned.

    Raises:
        SignalCollision: If a violation signal or an observer automaton name is already taken.
    """
    if not observers:
        return program
    automata = list(program.automata)
    signals = list(program.signals.values())
    taken_signals = set(program.signals)
    taken_names = {a.name for a in automata}
    for observer in observers:
        if observer.violation.name in taken_signals:
            raise SignalCollision(f"Observer {observer.name}: signal {observer.violation.name} "
                                  f"is already declared")
        taken_signals.add(observer.violation.name)
        signals.append(observer.violation)
        for automaton in observer.automata:
            if automaton.name in taken_names:
                raise SignalCollision(f"Observer {observer.name}: automaton name {automaton.name} "
                                      f"is already taken")
            taken_names.add(automaton.name)
            automata.append(automaton)

    composed = declare_program(automata, signals, halt_signal=program.halt_signal,
                               config=program.config, logger=logger or program.logger)
    for name, take, cancel in program.suspension_bindings:
        composed.bind_suspension(name, take, cancel)
    return composed
