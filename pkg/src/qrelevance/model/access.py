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

"""Accesses, responses and paths

An access is an access method together with a binding of its input
attributes. A path is a sequence of accesses and responses replayed from an
initial configuration.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from qrelevance.exceptions import QRelevanceError, TypingError
from qrelevance.model.configuration import Configuration, Fact

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping
    from qrelevance.model.schema import Schema, TypedValue
    from qrelevance.types import MethodName, Position, RelationName, Response


@dataclass(frozen=True, order=True)
class Access:
    """
    Access on a method. The binding lists the values of the input attributes
    in increasing position order (see :py:meth:`Schema.input_positions`).
    """

    method: MethodName
    binding: tuple[TypedValue, ...] = ()

    @classmethod
    def from_mapping(
        cls, schema: Schema, method: MethodName, binding: Mapping[str, TypedValue]
    ) -> Access:
        """
        Build an access from an attribute name to value mapping

        :param schema: the schema
        :param method: access method name
        :param binding: mapping from input attribute names to values
        :return: the access
        """

        m = schema.method(method)
        rel = schema.relation(m.relation)
        if set(binding) != set(m.inputs):
            raise TypingError(
                f"The binding of {method} must cover exactly the inputs ({', '.join(m.inputs)})"
            )
        values = tuple(binding[rel.attributes[p].name] for p in schema.input_positions(method))
        access = cls(method, values)
        check_access(access, schema)
        return access

    def binding_map(self, schema: Schema) -> dict[str, TypedValue]:
        """Binding as a mapping from input attribute names to values"""
        rel = schema.relation(schema.method(self.method).relation)
        return {
            rel.attributes[p].name: v
            for p, v in zip(schema.input_positions(self.method), self.binding)
        }

    def pattern(self, schema: Schema) -> dict[Position, TypedValue]:
        """Binding as a mapping from input positions to values"""
        return dict(zip(schema.input_positions(self.method), self.binding))

    def agrees(self, fact: Fact, schema: Schema) -> bool:
        """True if the fact is on the accessed relation and agrees with the binding"""
        if fact.relation != schema.method(self.method).relation:
            return False
        return all(fact.values[p] == v for p, v in self.pattern(schema).items())

    def describe(self, schema: Schema) -> str:
        """Textual form ``R(v, ?) via M`` as used by the command line"""
        m = schema.method(self.method)
        pattern = self.pattern(schema)
        args = [
            pattern[p].token if p in pattern else "?"
            for p in range(schema.relation(m.relation).arity)
        ]
        return f"{m.relation}({', '.join(args)}) via {self.method}"


@dataclass(frozen=True)
class Step:
    access: Access
    response: Response = field(default_factory=frozenset)


@dataclass(frozen=True)
class Path:
    initial: Configuration
    steps: tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def configurations(self) -> Iterator[Configuration]:
        """Yields the initial configuration and the one after every step"""
        conf = self.initial
        yield conf
        for step in self.steps:
            conf = conf.with_facts(step.response)
            yield conf

    @property
    def final(self) -> Configuration:
        """Configuration after replaying every response (no well-formedness check)"""
        facts = set(self.initial.facts)
        for step in self.steps:
            facts.update(step.response)
        return Configuration(frozenset(facts), self.initial.constants)

    def prepend(self, step: Step) -> Path:
        return Path(self.initial, (step,) + self.steps)


@dataclass(frozen=True)
class PathDiagnostic:
    """Result of :py:func:`validate_path`. Falsy when the path is invalid."""

    valid: bool
    step: int | None = None  #: Index of the first failing step
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def check_access(access: Access, schema: Schema) -> None:
    """
    Check that an access type-checks against the schema

    :param access: the access
    :param schema: the schema
    :raises UnknownMethodError: if the method is not declared
    :raises TypingError: if the binding does not fit the input attributes
    """

    positions = schema.input_positions(access.method)
    rel = schema.relation(schema.method(access.method).relation)
    if len(positions) != len(access.binding):
        raise TypingError(
            f"Access on {access.method} expects {len(positions)} binding value(s), "
            f"got {len(access.binding)}"
        )
    for p, v in zip(positions, access.binding):
        if v.domain != rel.attributes[p].domain:
            raise TypingError(
                f"Binding value '{v.token}' of domain {v.domain} used for "
                f"{rel.name}.{rel.attributes[p].name} of domain {rel.attributes[p].domain}"
            )


def check_response(access: Access, response: Iterable[Fact], schema: Schema) -> None:
    """
    Check that every fact of a response fits the accessed relation and agrees
    with the binding

    :raises TypingError: on the first offending fact
    """

    relation = schema.method(access.method).relation
    for fact in sorted(response):
        if fact.relation != relation:
            raise TypingError(f"Response fact {fact} is not on the accessed relation {relation}")
        schema.check_values(fact.relation, fact.values)
        if not access.agrees(fact, schema):
            raise TypingError(f"Response fact {fact} disagrees with the binding of {access.method}")


def is_well_formed(access: Access, conf: Configuration, schema: Schema) -> bool:
    """
    An access is well-formed if its method is independent, or if it is dependent
    and every binding value belongs to the active domain of the configuration.

    :param access: the access
    :param conf: current configuration
    :param schema: the schema
    :return: True if the access may be performed in `conf`
    """

    check_access(access, schema)
    if not schema.method(access.method).is_dependent:
        return True
    adom = conf.adom
    return all(v in adom for v in access.binding)


def apply_response(
    conf: Configuration, access: Access, response: Iterable[Fact], schema: Schema
) -> Configuration:
    """
    Add the response of an access to a configuration. Only the accessed relation
    changes.

    :param conf: current configuration
    :param access: the access
    :param response: the returned facts
    :param schema: the schema
    :return: the new configuration, a superset of `conf`
    :raises TypingError: if a fact disagrees with the binding or the signature
    """

    response = frozenset(response)
    check_access(access, schema)
    check_response(access, response, schema)
    return conf.with_facts(response)


def validate_path(path: Path, schema: Schema) -> PathDiagnostic:
    """
    Check that every access of the path is well-formed at the configuration
    reached so far and that every response agrees with its binding.

    :param path: the path
    :param schema: the schema
    :return: a diagnostic, falsy on the first failing step
    """

    conf = path.initial
    for i, step in enumerate(path.steps):
        try:
            if not is_well_formed(step.access, conf, schema):
                return PathDiagnostic(
                    False, i, f"{step.access.describe(schema)} is not well-formed"
                )
            conf = apply_response(conf, step.access, step.response, schema)
        except QRelevanceError as e:
            return PathDiagnostic(False, i, str(e))
    return PathDiagnostic(True)


def truncate_path(path: Path, schema: Schema) -> Path:
    """
    Drop the first step and keep the longest prefix of the remaining steps whose
    accesses are still well-formed when replayed from the initial configuration.
    Responses are kept verbatim.

    :param path: a non-empty path
    :param schema: the schema
    :return: the truncated path
    """

    if not path.steps:
        raise QRelevanceError("Cannot truncate an empty path")
    conf = path.initial
    kept: list[Step] = []
    for step in path.steps[1:]:
        if not is_well_formed(step.access, conf, schema):
            break
        kept.append(step)
        conf = conf.with_facts(step.response)
    return Path(path.initial, tuple(kept))


def access_for(fact: Fact, method: MethodName, schema: Schema) -> Access:
    """
    Access on `method` whose binding is read off a fact of the accessed relation

    :param fact: the fact
    :param method: access method on the relation of the fact
    :param schema: the schema
    :return: the access, agreeing with `fact`
    """

    return Access(method, tuple(fact.values[p] for p in schema.input_positions(method)))


def producing_method(relation: RelationName, schema: Schema) -> MethodName | None:
    """Preferred method to fetch a fact of a relation: independent first, then declaration order"""
    methods = sorted(schema.methods_on(relation), key=lambda m: m.is_dependent)
    return methods[0].name if methods else None
