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

"""Facts and configurations

A configuration is the part of the hidden instance that is currently known,
together with the constants admitted from the start (the constants of the
queries are assumed to be known).
"""

from __future__ import annotations
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

from qrelevance.model.schema import TypedValue

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping
    from qrelevance.model.schema import Schema
    from qrelevance.types import DomainName, Position, RelationName


@dataclass(frozen=True, order=True)
class Fact:
    relation: RelationName
    values: tuple[TypedValue, ...]

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(v.token for v in self.values)})"


class FactIndex:
    """
    Index of a fact set by relation and by (relation, position, value). Facts are
    stored in sorted order so that every lookup is deterministic.
    """

    def __init__(self, facts: Iterable[Fact]):
        self._facts: set[Fact] = set()
        self._by_relation: dict[RelationName, list[Fact]] = defaultdict(list)
        self._by_position: dict[tuple[RelationName, Position, TypedValue], list[Fact]] = (
            defaultdict(list)
        )
        for fact in sorted(set(facts)):
            self._facts.add(fact)
            self._by_relation[fact.relation].append(fact)
            for p, v in enumerate(fact.values):
                self._by_position[(fact.relation, p, v)].append(fact)

    def __contains__(self, fact: object) -> bool:
        return fact in self._facts

    def __len__(self) -> int:
        return len(self._facts)

    def relation(self, name: RelationName) -> list[Fact]:
        return self._by_relation.get(name, [])

    def candidates(
        self, relation: RelationName, bound: Mapping[Position, TypedValue]
    ) -> list[Fact]:
        """
        Facts of a relation agreeing with the given position values

        :param relation: relation name
        :param bound: position to value constraints
        :return: the matching facts, in sorted order
        """

        if not bound:
            return self.relation(relation)
        smallest = min(
            (self._by_position.get((relation, p, v), []) for p, v in bound.items()), key=len
        )
        return [f for f in smallest if all(f.values[p] == v for p, v in bound.items())]


@dataclass(frozen=True)
class Configuration:
    """
    Immutable configuration. The active domain is made of the values occurring
    in the facts plus the admitted constants.
    """

    facts: frozenset[Fact] = field(default_factory=frozenset)
    constants: frozenset[TypedValue] = field(default_factory=frozenset)

    @cached_property
    def adom(self) -> frozenset[TypedValue]:
        values = set(self.constants)
        for fact in self.facts:
            values.update(fact.values)
        return frozenset(values)

    @cached_property
    def index(self) -> FactIndex:
        return FactIndex(self.facts)

    def adom_of(self, domain: DomainName) -> list[TypedValue]:
        """Sorted active domain values of one domain"""
        return sorted(v for v in self.adom if v.domain == domain)

    def facts_of(self, relation: RelationName) -> list[Fact]:
        return self.index.relation(relation)

    def with_facts(self, facts: Iterable[Fact]) -> Configuration:
        """Returns the configuration extended with the given facts"""
        facts = frozenset(facts)
        if facts <= self.facts:
            return self
        return Configuration(self.facts | facts, self.constants)

    def with_constants(self, values: Iterable[TypedValue]) -> Configuration:
        return Configuration(self.facts, self.constants | frozenset(values))

    def issubset(self, other: Configuration) -> bool:
        return self.facts <= other.facts and self.constants <= other.constants

    def check(self, schema: Schema) -> None:
        """
        Check every fact against the schema

        :param schema: the schema
        :raises TypingError: on the first ill-typed fact
        """

        for fact in sorted(self.facts):
            schema.check_values(fact.relation, fact.values)

    def __contains__(self, fact: object) -> bool:
        return fact in self.facts

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self.facts))

    def __len__(self) -> int:
        return len(self.facts)


def adom(conf: Configuration) -> frozenset[TypedValue]:
    """
    Active domain of a configuration: typed values occurring in its facts plus
    its admitted constants

    :param conf: the configuration
    :return: set of typed values
    """

    return conf.adom
