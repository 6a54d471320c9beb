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
Guard formulas over signal presence. A guard is evaluated against the current tick's valuation,
which is only partially known while a reaction is being computed, so evaluation is three-valued:
True, False or None (not yet determined). `pre(X)` reads the previous tick and is always known.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, FrozenSet, Optional, Tuple

Atom = Tuple[str, str]  # ('now' | 'pre', signal name)
Lookup = Callable[[Atom], Optional[bool]]


class Guard:
    """Base class of the guard expression tree."""

    def evaluate(self, lookup: Lookup) -> Optional[bool]:
        """Kleene evaluation given the truth of each atom (None = unknown)."""
        raise NotImplementedError

    def atoms(self) -> FrozenSet[Atom]:
        """Every atom the formula reads."""
        raise NotImplementedError

    def signals(self) -> FrozenSet[str]:
        """Names read in the current tick."""
        return frozenset(name for when, name in self.atoms() if when == 'now')

    def pre_signals(self) -> FrozenSet[str]:
        """Names read from the previous tick."""
        return frozenset(name for when, name in self.atoms() if when == 'pre')

    def __and__(self, other: "Guard") -> "Guard":
        return And((self, other))

    def __or__(self, other: "Guard") -> "Guard":
        return Or((self, other))

    def __invert__(self) -> "Guard":
        return Not(self)


@dataclass(frozen=True)
class Const(Guard):
    """Constant guard."""
    value: bool

    def evaluate(self, lookup):
        return self.value

    def atoms(self):
        return frozenset()

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Sig(Guard):
    """Presence of a signal in the current tick."""
    name: str

    def evaluate(self, lookup):
        return lookup(('now', self.name))

    def atoms(self):
        return frozenset({('now', self.name)})

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Pre(Guard):
    """Presence of a signal in the previous tick."""
    name: str

    def evaluate(self, lookup):
        return lookup(('pre', self.name))

    def atoms(self):
        return frozenset({('pre', self.name)})

    def __str__(self):
        return f"pre({self.name})"


@dataclass(frozen=True)
class Not(Guard):
    """Negation."""
    operand: Guard

    def evaluate(self, lookup):
        value = self.operand.evaluate(lookup)
        return None if value is None else not value

    def atoms(self):
        return self.operand.atoms()

    def __str__(self):
        return f"~{self.operand}"


@dataclass(frozen=True)
class And(Guard):
    """Conjunction; False as soon as one operand is False."""
    operands: Tuple[Guard, ...]

    def evaluate(self, lookup):
        result = True
        for operand in self.operands:
            value = operand.evaluate(lookup)
            if value is False:
                return False
            if value is None:
                result = None
        return result

    def atoms(self):
        return frozenset().union(*(operand.atoms() for operand in self.operands))

    def __str__(self):
        return "(" + " & ".join(str(o) for o in self.operands) + ")"


@dataclass(frozen=True)
class Or(Guard):
    """Disjunction; True as soon as one operand is True."""
    operands: Tuple[Guard, ...]

    def evaluate(self, lookup):
        result = False
        for operand in self.operands:
            value = operand.evaluate(lookup)
            if value is True:
                return True
            if value is None:
                result = None
        return result

    def atoms(self):
        return frozenset().union(*(operand.atoms() for operand in self.operands))

    def __str__(self):
        return "(" + " | ".join(str(o) for o in self.operands) + ")"


TRUE = Const(True)
FALSE = Const(False)


def sig(name: str) -> Guard:
    """Guard true when `name` is present in the current tick."""
    return Sig(name)


def pre(name: str) -> Guard:
    """Guard true when `name` was present in the previous tick."""
    return Pre(name)


def all_of(*guards: Guard) -> Guard:
    """Conjunction of any number of guards (TRUE when empty)."""
    guards = tuple(g for g in guards if g != TRUE)
    if not guards:
        return TRUE
    return guards[0] if len(guards) == 1 else And(guards)


def any_of(*guards: Guard) -> Guard:
    """Disjunction of any number of guards (FALSE when empty)."""
    guards = tuple(g for g in guards if g != FALSE)
    if not guards:
        return FALSE
    return guards[0] if len(guards) == 1 else Or(guards)


def jointly_satisfiable(first: Guard, second: Guard) -> Optional[dict]:
    """
    Search for a valuation of the atoms of both guards that makes both true.

    Returns:
        dict | None: A witnessing atom assignment, or None if the guards exclude each other.
    """
    atoms = sorted(first.atoms() | second.atoms())
    for values in itertools.product((False, True), repeat=len(atoms)):
        assignment = dict(zip(atoms, values))
        if first.evaluate(assignment.get) and second.evaluate(assignment.get):
            return assignment
    return None
