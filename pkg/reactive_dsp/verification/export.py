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
Plain-text FSM transition tables.

Header lines start with '.', then one line per transition:
`<state> <in-vector> / <out-vector> <next-state>`, vectors holding one '0'/'1' per input (output)
in the order of the `.inputs` (`.outputs`) header. Range payloads of the alphabet are listed in
`.payload` lines.
"""

from pathlib import Path
from typing import Dict, Iterable, List, TextIO

from reactive_dsp.verification.emission import EmissionVerdict
from reactive_dsp.verification.fsm import Fsm


def transition_table(fsm: Fsm) -> List[str]:
    """Lines of the transition table."""
    inputs, outputs = sorted(fsm.inputs), sorted(fsm.outputs)
    lines = [f".inputs {' '.join(inputs)}", f".outputs {' '.join(outputs)}",
             f".states {fsm.size}", f".initial {fsm.initial}"]
    payloads = sorted({(n, str(v)) for value in fsm.alphabet for n, v in value if v is not None})
    lines.extend(f".payload {name} {text}" for name, text in payloads)
    for state in range(fsm.size):
        for t in fsm.successors(state):
            present = {name for name, _ in t.letter}
            in_vector = "".join('1' if name in present else '0' for name in inputs)
            out_vector = "".join('1' if name in t.outputs else '0' for name in outputs)
            lines.append(f"{t.source} {in_vector} / {out_vector} {t.target}")
    lines.append(".end")
    return lines


def export_fsm(fsm: Fsm, target: Path | TextIO):
    """Write the transition table to a path or text stream."""
    text = "\n".join(transition_table(fsm)) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(text, encoding='utf-8')
    else:
        target.write(text)


def verdict_records(verdicts: Iterable[EmissionVerdict]) -> List[Dict]:
    """Structured `{signal, alias, status, witness[]}` records."""
    return [v.as_record() for v in verdicts]
