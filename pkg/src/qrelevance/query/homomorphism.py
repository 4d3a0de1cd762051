# Copyright 2023 Quarkslab
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Homomorphism search

Backtracking search of homomorphisms from a conjunction of atoms into a fact
index. The atom with the fewest candidate facts is matched first, and the
remaining atoms are split into connected components (over the variables
that are still unbound) which are solved independently. Failed components
are remembered together with the values of their bound variables.
"""

from __future__ import annotations
import sys
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from typing import TypeAlias, TYPE_CHECKING

from qrelevance.model import Configuration, Fact, FactIndex
from qrelevance.query.query import Atom, Constant, Variable

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator
    from qrelevance.model import TypedValue
    from qrelevance.types import Position, RelationName, VariableName

Assignment: TypeAlias = dict["VariableName", "TypedValue"]

Pattern: TypeAlias = "tuple[RelationName, tuple[TypedValue | None, ...]]"
"""
Wildcard fact: an atom matches the pattern if it agrees with every non-None
position. The other positions accept any value of the right domain.
"""


@dataclass(frozen=True)
class Homomorphism:
    """
    Mapping from the variables of one DNF disjunct to typed values. Constants
    are rigid and map to themselves.
    """

    assignment: Mapping[VariableName, TypedValue]
    disjunct: tuple[Atom, ...]

    def apply(self, atom: Atom) -> Fact:
        return atom.ground(self.assignment)

    def image(self) -> frozenset[Fact]:
        """Facts the disjunct is mapped onto"""
        return frozenset(self.apply(a) for a in self.disjunct)

    def check(self, target: Configuration | Iterable[Fact]) -> bool:
        """
        Independent re-check of the witness

        :param target: configuration or fact set
        :return: True if every atom of the disjunct is mapped to a fact of the target
        """

        facts = target.facts if isinstance(target, Configuration) else frozenset(target)
        try:
            return self.image() <= facts
        except KeyError:
            return False

    def to_json(self) -> dict[str, str]:
        return {v: self.assignment[v].token for v in sorted(self.assignment)}


class HomomorphismSearch:
    """
    Search homomorphisms into a fact index, optionally extended with wildcard
    patterns standing for facts that an access may still return.

    :param index: the target facts
    :param patterns: wildcard facts accepted in addition to the indexed ones
    """

    def __init__(self, index: FactIndex, patterns: Iterable[Pattern] = ()):
        self.index = index
        self.patterns = tuple(patterns)
        self.nodes = 0  # Number of atom matchings tried, reset by every call
        self._failures: set[tuple] = set()

    def _bound(
        self, atom: Atom, assignment: Mapping[VariableName, TypedValue]
    ) -> dict[Position, TypedValue]:
        bound: dict[Position, TypedValue] = {}
        for p, t in enumerate(atom.terms):
            if isinstance(t, Constant):
                bound[p] = t.value
            elif t.name in assignment:
                bound[p] = assignment[t.name]
        return bound

    def _match_pattern(
        self,
        atom: Atom,
        values: tuple[TypedValue | None, ...],
        bound: Mapping[Position, TypedValue],
    ) -> Assignment | None:
        option: Assignment = {}
        for p, (t, v) in enumerate(zip(atom.terms, values)):
            if v is None:
                continue
            if p in bound:
                if bound[p] != v:
                    return None
            elif option.setdefault(t.name, v) != v:  # type: ignore[union-attr]
                return None
        return option

    def options(
        self, atom: Atom, assignment: Mapping[VariableName, TypedValue]
    ) -> list[Assignment]:
        """
        Extensions of the assignment that make the atom true, one per matching
        fact or pattern. Variables at pattern wildcards stay unbound.

        :param atom: the atom
        :param assignment: current partial assignment
        :return: list of new bindings, deduplicated
        """

        bound = self._bound(atom, assignment)
        found: list[Assignment] = []
        for fact in self.index.candidates(atom.relation, bound):
            if len(fact.values) != len(atom.terms):
                continue
            option = self._match_pattern(atom, fact.values, bound)
            if option is not None:
                found.append(option)
        for relation, values in self.patterns:
            if relation != atom.relation or len(values) != len(atom.terms):
                continue
            option = self._match_pattern(atom, values, bound)
            if option is not None and option not in found:
                found.append(option)
        return found

    def _ground_holds(self, atom: Atom, assignment: Mapping[VariableName, TypedValue]) -> bool:
        fact = atom.ground(assignment)
        if fact in self.index:
            return True
        bound = dict(enumerate(fact.values))
        return any(
            relation == atom.relation
            and len(values) == len(fact.values)
            and self._match_pattern(atom, values, bound) is not None
            for relation, values in self.patterns
        )

    @staticmethod
    def _open_variables(
        atom: Atom, assignment: Mapping[VariableName, TypedValue]
    ) -> list[VariableName]:
        return [
            t.name for t in atom.terms if isinstance(t, Variable) and t.name not in assignment
        ]

    def _components(
        self, atoms: list[Atom], assignment: Mapping[VariableName, TypedValue]
    ) -> list[list[Atom]]:
        parent: dict[VariableName, VariableName] = {}

        def find(x: VariableName) -> VariableName:
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for atom in atoms:
            names = self._open_variables(atom, assignment)
            for other in names[1:]:
                parent[find(other)] = find(names[0])

        groups: dict[VariableName, list[Atom]] = {}
        for atom in atoms:
            groups.setdefault(find(self._open_variables(atom, assignment)[0]), []).append(atom)
        return list(groups.values())

    def _solve(self, pending: list[Atom], assignment: Assignment) -> Assignment | None:
        open_atoms: list[Atom] = []
        for atom in pending:
            if self._open_variables(atom, assignment):
                open_atoms.append(atom)
            elif not self._ground_holds(atom, assignment):
                return None
        if not open_atoms:
            return assignment
        result = dict(assignment)
        for component in self._components(open_atoms, assignment):
            solved = self._solve_component(component, assignment)
            if solved is None:
                return None
            result.update(solved)
        return result

    def _solve_component(self, atoms: list[Atom], assignment: Assignment) -> Assignment | None:
        names = {v for a in atoms for v in a.variables()}
        bound = tuple(sorted((v, assignment[v]) for v in names if v in assignment))
        key = (frozenset(atoms), bound)
        if key in self._failures:
            return None

        best: tuple[int, list[Assignment]] | None = None
        for i, atom in enumerate(atoms):
            found = self.options(atom, assignment)
            if best is None or len(found) < len(best[1]):
                best = (i, found)
            if not found:
                break
        assert best is not None
        chosen, found = best
        rest = atoms[:chosen] + atoms[chosen + 1 :]
        for option in found:
            self.nodes += 1
            solved = self._solve(rest, {**assignment, **option})
            if solved is not None:
                return solved
        self._failures.add(key)
        return None

    def find(
        self, atoms: Iterable[Atom], fixed: Mapping[VariableName, TypedValue] | None = None
    ) -> Assignment | None:
        """
        Look for one homomorphism of a conjunction of atoms

        :param atoms: the conjunction
        :param fixed: variables whose value is imposed
        :return: an assignment extending `fixed`, or None. Without patterns every
                 variable of `atoms` is assigned.
        """

        atoms = list(dict.fromkeys(atoms))
        self.nodes = 0
        self._failures = set()
        needed = 3 * len(atoms) + 100
        if needed > sys.getrecursionlimit():
            logging.debug(f"Raising the recursion limit to {needed}")
            sys.setrecursionlimit(needed)
        return self._solve(atoms, dict(fixed or {}))

    def all(
        self, atoms: Iterable[Atom], fixed: Mapping[VariableName, TypedValue] | None = None
    ) -> Iterator[Assignment]:
        """
        Enumerate every homomorphism of a conjunction of atoms, in a
        deterministic order

        :param atoms: the conjunction
        :param fixed: variables whose value is imposed
        :return: iterator over the assignments (each one a fresh dict)
        """

        atoms = list(dict.fromkeys(atoms))
        self.nodes = 0
        stack: list[tuple[list[Atom], Assignment]] = [(atoms, dict(fixed or {}))]
        while stack:
            pending, assignment = stack.pop()
            open_atoms: list[Atom] = []
            failed = False
            for atom in pending:
                if self._open_variables(atom, assignment):
                    open_atoms.append(atom)
                elif not self._ground_holds(atom, assignment):
                    failed = True
                    break
            if failed:
                continue
            if not open_atoms:
                yield dict(assignment)
                continue
            chosen = min(
                range(len(open_atoms)), key=lambda i: len(self.options(open_atoms[i], assignment))
            )
            rest = open_atoms[:chosen] + open_atoms[chosen + 1 :]
            # Reversed so that the first option is explored first
            for option in reversed(self.options(open_atoms[chosen], assignment)):
                self.nodes += 1
                stack.append((rest, {**assignment, **option}))
