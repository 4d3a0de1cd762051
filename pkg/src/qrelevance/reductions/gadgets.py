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

"""Boolean gadgets

Truth tables and circuit builders shared by the reductions and the hardness
generators. A circuit is a conjunction of gate atoms over a Boolean domain
whose facts hold the truth table of every gate.
"""

from __future__ import annotations
from itertools import product
from typing import TYPE_CHECKING

from qrelevance.model import Attribute, Fact, Relation, TypedValue
from qrelevance.query import Atom, Constant, Variable

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence
    from qrelevance.model import Configuration
    from qrelevance.query import Term
    from qrelevance.types import DomainName, RelationName

GATES: dict[str, Callable[[int, int], int]] = {
    "And": lambda a, b: a & b,
    "Or": lambda a, b: a | b,
    "Eq": lambda a, b: int(a == b),
}


def bool_values(domain: DomainName) -> tuple[TypedValue, TypedValue]:
    """The values 0 and 1 of a Boolean domain"""
    return TypedValue("0", domain), TypedValue("1", domain)


def bit(value: int, domain: DomainName) -> Constant:
    return Constant(bool_values(domain)[value])


def gate_relation(name: RelationName, domain: DomainName) -> Relation:
    """Ternary relation ``name(a, b, r)`` holding ``r = a op b``"""
    return Relation(name, tuple(Attribute(a, domain) for a in ("a", "b", "r")))


def truth_table(name: RelationName, gate: str, domain: DomainName) -> list[Fact]:
    """
    The four facts of a binary gate

    :param name: relation name used for the gate
    :param gate: one of the keys of :py:data:`GATES`
    :param domain: the Boolean domain
    :return: the facts ``name(a, b, a op b)``
    """

    values = bool_values(domain)
    return [
        Fact(name, (values[a], values[b], values[GATES[gate](a, b)]))
        for a, b in product((0, 1), repeat=2)
    ]


def or_facts(name: RelationName, domain: DomainName) -> list[Fact]:
    """The pairs of a binary `or` relation: at least one of the two bits is set"""
    zero, one = bool_values(domain)
    return [Fact(name, (one, zero)), Fact(name, (zero, one)), Fact(name, (one, one))]


def pad_values(conf: Configuration, domains: Iterable[DomainName]) -> dict[DomainName, TypedValue]:
    """
    One padding value per domain: the smallest known value when the domain is
    not empty in the configuration, ``pad_<domain>`` otherwise
    """

    pads = {}
    for domain in domains:
        known = conf.adom_of(domain)
        pads[domain] = known[0] if known else TypedValue(f"pad_{domain}", domain)
    return pads


class Circuit:
    """
    Builder for a Boolean circuit written as a list of gate atoms. Output
    variables are named ``<label>`` and must be unique inside one circuit.

    :param domain: the Boolean domain
    :param names: relation name of every gate kind, defaults to the gate name
    """

    def __init__(self, domain: DomainName, names: dict[str, RelationName] | None = None):
        self.domain = domain
        self.names = {g: g for g in GATES} | dict(names or {})
        self.atoms: list[Atom] = []
        self._labels: set[str] = set()

    def var(self, label: str) -> Variable:
        if label in self._labels:
            raise ValueError(f"Circuit variable '{label}' defined twice")
        self._labels.add(label)
        return Variable(label)

    def gate(self, gate: str, left: Term, right: Term, out: Term | str) -> Term:
        """
        Add a gate atom

        :param gate: gate kind
        :param left: first operand
        :param right: second operand
        :param out: output term, or the label of a new output variable
        :return: the output term
        """

        if isinstance(out, str):
            out = self.var(out)
        self.atoms.append(Atom(self.names[gate], (left, right, out)))
        return out

    def chain(self, gate: str, terms: Sequence[Term], label: str) -> Term:
        """
        Left fold of a gate over several terms. Intermediate outputs are named
        ``<label>_r<i>`` and the last one ``<label>``; a single term is returned
        unchanged.
        """

        if not terms:
            raise ValueError("Cannot fold a gate over no term")
        acc = terms[0]
        for i, t in enumerate(terms[1:], start=1):
            out = label if i == len(terms) - 1 else f"{label}_r{i}"
            acc = self.gate(gate, acc, t, out)
        return acc

    def lookup(self, relation: RelationName, terms: Sequence[Term], label: str) -> Variable:
        """Add an atom over a fixed table whose last place is a new output variable"""
        out = self.var(label)
        self.atoms.append(Atom(relation, (*terms, out)))
        return out

    def negate(self, term: Term, label: str) -> Term:
        return self.gate("Eq", term, bit(0, self.domain), label)

    def require(self, term: Term, value: int) -> None:
        """Force a term to a constant value"""
        self.gate("Eq", term, bit(value, self.domain), bit(1, self.domain))

    def equal(self, xs: Sequence[Term], ys: Sequence[Term], label: str) -> Term:
        """1 iff the two bit vectors are equal"""
        eqs = [self.gate("Eq", x, y, f"{label}_e{j}") for j, (x, y) in enumerate(zip(xs, ys))]
        return self.chain("And", eqs, label)

    def successor(self, xs: Sequence[Term], ys: Sequence[Term], label: str) -> Term:
        """
        1 iff `ys` encodes the successor of `xs`, both read most significant
        bit first. Position i is the one flipping from 0 to 1: the bits before
        it agree and the bits after it flip from 1 to 0.
        """

        zero, one = bit(0, self.domain), bit(1, self.domain)
        cases = []
        for i in range(len(xs)):
            parts = [self.gate("Eq", xs[k], ys[k], f"{label}_{i}_eq{k}") for k in range(i)]
            parts.append(self.gate("Eq", xs[i], zero, f"{label}_{i}_lo"))
            parts.append(self.gate("Eq", ys[i], one, f"{label}_{i}_hi"))
            for k in range(i + 1, len(xs)):
                parts.append(self.gate("Eq", xs[k], one, f"{label}_{i}_x{k}"))
                parts.append(self.gate("Eq", ys[k], zero, f"{label}_{i}_y{k}"))
            cases.append(self.chain("And", parts, f"{label}_{i}"))
        return self.chain("Or", cases, label)
