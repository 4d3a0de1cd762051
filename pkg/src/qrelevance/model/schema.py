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

"""Schemas and access methods

A schema is a set of abstract domains, relations whose attributes are typed by
these domains and a set of access methods. Relations without any access method
are legal: their content is fixed to the one of the initial configuration.
"""

from __future__ import annotations
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import TYPE_CHECKING

from qrelevance.exceptions import SchemaError, TypingError, UnknownMethodError
from qrelevance.types import AccessMode

if TYPE_CHECKING:
    from collections.abc import Iterable
    from qrelevance.types import DomainName, MethodName, Position, RelationName, Token


@dataclass(frozen=True, order=True)
class TypedValue:
    """
    A constant together with its abstract domain. The same token in two
    different domains gives two distinct values.
    """

    token: Token
    domain: DomainName

    def __str__(self) -> str:
        return self.token


@dataclass(frozen=True)
class Attribute:
    name: str
    domain: DomainName


@dataclass(frozen=True)
class Relation:
    """Relation name with its ordered list of typed attributes"""

    name: RelationName
    attributes: tuple[Attribute, ...]

    @property
    def arity(self) -> int:
        return len(self.attributes)

    @property
    def domains(self) -> tuple[DomainName, ...]:
        return tuple(a.domain for a in self.attributes)

    def position(self, attribute: str) -> Position:
        """
        Returns the position of the attribute

        :param attribute: attribute name
        :return: zero-based position
        """

        for i, a in enumerate(self.attributes):
            if a.name == attribute:
                return i
        raise SchemaError(f"Relation {self.name} has no attribute '{attribute}'")

    def __str__(self) -> str:
        return f"{self.name}({', '.join(f'{a.name}:{a.domain}' for a in self.attributes)})"


@dataclass(frozen=True)
class AccessMethod:
    """
    Access method on a relation. An empty input set gives a free access, an
    input set covering all the attributes gives a Boolean access.
    """

    name: MethodName
    relation: RelationName
    inputs: tuple[str, ...]
    mode: AccessMode = AccessMode.dependent

    @property
    def is_dependent(self) -> bool:
        return self.mode == AccessMode.dependent


@dataclass(frozen=True)
class Schema:
    """
    Immutable schema. The constructor checks that names are unique, that every
    attribute domain is declared and that the inputs of every method are
    attributes of its relation.
    """

    domains: tuple[DomainName, ...]
    relations: tuple[Relation, ...]
    methods: tuple[AccessMethod, ...] = field(default=())

    def __post_init__(self):
        if len(set(self.domains)) != len(self.domains):
            raise SchemaError("Duplicate domain name")
        declared = set(self.domains)
        names: set[str] = set()
        for rel in self.relations:
            if rel.name in names:
                raise SchemaError(f"Duplicate relation name '{rel.name}'")
            names.add(rel.name)
            attrs = [a.name for a in rel.attributes]
            if len(set(attrs)) != len(attrs):
                raise SchemaError(f"Duplicate attribute name in relation '{rel.name}'")
            for a in rel.attributes:
                if a.domain not in declared:
                    raise SchemaError(
                        f"Attribute {rel.name}.{a.name} uses the undeclared domain '{a.domain}'"
                    )
        methods: set[str] = set()
        for m in self.methods:
            if m.name in methods:
                raise SchemaError(f"Duplicate access method name '{m.name}'")
            methods.add(m.name)
            if m.relation not in names:
                raise SchemaError(
                    f"Access method '{m.name}' is on the unknown relation '{m.relation}'"
                )
            rel = self.relation(m.relation)
            if len(set(m.inputs)) != len(m.inputs):
                raise SchemaError(f"Duplicate input attribute in access method '{m.name}'")
            for a in m.inputs:
                if a not in attrs_of(rel):
                    raise SchemaError(
                        f"Input attribute '{a}' of '{m.name}' is not an attribute of {m.relation}"
                    )

    @cached_property
    def _relations(self) -> dict[RelationName, Relation]:
        return {r.name: r for r in self.relations}

    @cached_property
    def _methods(self) -> dict[MethodName, AccessMethod]:
        return {m.name: m for m in self.methods}

    @cached_property
    def _positions(self) -> dict[MethodName, tuple[Position, ...]]:
        return {
            m.name: tuple(sorted(self.relation(m.relation).position(a) for a in m.inputs))
            for m in self.methods
        }

    def has_relation(self, name: RelationName) -> bool:
        return name in self._relations

    def relation(self, name: RelationName) -> Relation:
        try:
            return self._relations[name]
        except KeyError:
            raise SchemaError(f"Unknown relation '{name}'") from None

    def method(self, name: MethodName) -> AccessMethod:
        try:
            return self._methods[name]
        except KeyError:
            raise UnknownMethodError(name) from None

    def methods_on(self, relation: RelationName) -> tuple[AccessMethod, ...]:
        """Access methods of a relation in declaration order"""
        return tuple(m for m in self.methods if m.relation == relation)

    def has_method(self, relation: RelationName) -> bool:
        return any(m.relation == relation for m in self.methods)

    def input_positions(self, method: MethodName) -> tuple[Position, ...]:
        """
        Positions of the input attributes of a method, in increasing order.
        Bindings are always given in this order.

        :param method: method name
        :return: sorted tuple of positions
        """

        try:
            return self._positions[method]
        except KeyError:
            raise UnknownMethodError(method) from None

    def output_positions(self, method: MethodName) -> tuple[Position, ...]:
        inputs = self.input_positions(method)
        arity = self.relation(self.method(method).relation).arity
        return tuple(p for p in range(arity) if p not in inputs)

    def is_boolean(self, method: MethodName) -> bool:
        """True if every attribute of the relation is an input of the method"""
        return not self.output_positions(method)

    def is_free(self, method: MethodName) -> bool:
        return not self.method(method).inputs

    @property
    def all_independent(self) -> bool:
        return all(not m.is_dependent for m in self.methods)

    def dependent_positions(self, relation: RelationName) -> set[Position]:
        """Positions that are an input of at least one dependent method of the relation"""
        return {
            p
            for m in self.methods_on(relation)
            if m.is_dependent
            for p in self.input_positions(m.name)
        }

    def check_values(self, relation: RelationName, values: tuple[TypedValue, ...]) -> None:
        """
        Check that a tuple of values fits the signature of a relation

        :param relation: relation name
        :param values: the tuple
        :raises TypingError: on arity or domain mismatch
        """

        rel = self.relation(relation)
        if len(values) != rel.arity:
            raise TypingError(
                f"{relation} has arity {rel.arity}, got {len(values)} value(s)"
            )
        for v, a in zip(values, rel.attributes):
            if v.domain != a.domain:
                raise TypingError(
                    f"Value '{v.token}' of domain {v.domain} used for {relation}.{a.name} "
                    f"of domain {a.domain}"
                )

    def extend(
        self,
        *,
        domains: Iterable[DomainName] = (),
        relations: Iterable[Relation] = (),
        methods: Iterable[AccessMethod] = (),
    ) -> Schema:
        """Returns a new schema with the given declarations appended"""
        return Schema(
            self.domains + tuple(domains),
            self.relations + tuple(relations),
            self.methods + tuple(methods),
        )

    def replace_relation(self, relation: Relation) -> Schema:
        """Returns a new schema where the relation with the same name is replaced"""
        return replace(
            self,
            relations=tuple(relation if r.name == relation.name else r for r in self.relations),
        )

    def names(self) -> set[str]:
        """All domain, relation and method names"""
        return set(self.domains) | set(self._relations) | set(self._methods)


def attrs_of(relation: Relation) -> list[str]:
    return [a.name for a in relation.attributes]
