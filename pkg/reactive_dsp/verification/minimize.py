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
State minimisation by partition refinement. For a deterministic machine the coarsest bisimulation
groups states that produce the same outputs on every letter and move to equivalent states.
"""

import logging
from typing import Dict, Hashable, List, Optional

from reactive_dsp.verification.fsm import Fsm, FsmTransition


def _renumber(order: List[int], signature: Dict[int, Hashable]) -> Dict[int, int]:
    """Block numbers by first appearance in order."""
    blocks: Dict[Hashable, int] = {}
    return {s: blocks.setdefault(signature[s], len(blocks)) for s in order}


def minimize(fsm: Fsm, logger: Optional[logging.Logger] = None) -> Fsm:
    """
    Quotient of the reachable part of an FSM by its coarsest bisimulation.

    Blocks are numbered by the BFS position of their first state, so the initial state's block is
    state 0; each block is labelled by the label of that first state.
    """
    logger = logger or logging.getLogger(__name__)
    order = fsm.reachable()
    block = _renumber(order, {s: tuple(t.outputs for t in fsm.successors(s)) for s in order})
    rounds = 0
    while True:
        rounds += 1
        refined = _renumber(order, {s: (block[s], tuple(block[t.target]
                                                        for t in fsm.successors(s)))
                                    for s in order})
        stable = len(set(refined.values())) == len(set(block.values()))
        block = refined
        if stable:
            break

    first: Dict[int, int] = {}
    for s in order:
        first.setdefault(block[s], s)
    transitions = tuple(FsmTransition(b, t.letter, t.outputs, block[t.target])
                        for b, s in sorted(first.items()) for t in fsm.successors(s))
    quotient = Fsm(fsm.inputs, fsm.outputs, fsm.alphabet,
                   tuple(fsm.states[s] for _, s in sorted(first.items())), transitions)
    logger.info(f"Minimised {fsm.size} states to {quotient.size} in {rounds} refinement rounds")
    return quotient
