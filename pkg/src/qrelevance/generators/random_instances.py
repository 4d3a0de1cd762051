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

"""Random problem instances

Seeded generator of small, always well-typed instances used as fuzzing
substrate by the differential tests and the `fuzz` command.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy

from qrelevance.exceptions import BudgetError
from qrelevance.model import (
    Access,
    AccessMethod,
    Attribute,
    Configuration,
    Fact,
    ProblemInstance,
    Relation,
    Schema,
    TypedValue,
)
from qrelevance.query import Atom, Constant, Variable, conjoin, constants, disjoin
from qrelevance.types import AccessMode, QueryLanguage

if TYPE_CHECKING:
    from qrelevance.query import Query, Term


@dataclass(frozen=True)
class RandomLimits:
    """
    Upper bounds of the random generator. Every count is drawn uniformly
    between its lower bound and the limit.
    """

    relations: int = 3
    arity: int = 3
    domains: int = 2
    methods: int = 2  #: per relation
    facts: int = 4
    atoms: int = 4  #: per query
    values: int = 3  #: tokens per domain
    variables: int = 3  #: variables per domain
    language: QueryLanguage = QueryLanguage.pq
    dependent_ratio: float = 0.5
    constant_ratio: float = 0.1
    target: bool = True

    def validate(self) -> RandomLimits:
        counts = (self.relations, self.arity, self.domains, self.atoms, self.values, self.variables)
        if min(counts) < 1 or self.methods < 0 or self.facts < 0:
            raise BudgetError("Random limits must be positive")
        if not (0 <= self.dependent_ratio <= 1 and 0 <= self.constant_ratio <= 1):
            raise BudgetError("Ratios must be between 0 and 1")
        return self


def _pick(rng: numpy.random.Generator, items: list):
    return items[int(rng.integers(len(items)))]


def _random_query(
    rng: numpy.random.Generator,
    relations: list[Relation],
    values: dict[str, list[TypedValue]],
    limits: RandomLimits,
) -> Query:
    domains = sorted(values)
    subgoals: list[Query] = []
    for _ in range(int(rng.integers(1, limits.atoms + 1))):
        rel = _pick(rng, relations)
        terms: list[Term] = []
        for a in rel.attributes:
            if rng.random() < limits.constant_ratio:
                terms.append(Constant(_pick(rng, values[a.domain])))
            else:
                index = domains.index(a.domain)
                terms.append(Variable(f"v{index}_{int(rng.integers(limits.variables))}"))
        subgoals.append(Atom(rel.name, tuple(terms)))
    if limits.language == QueryLanguage.cq:
        return conjoin(*subgoals)

    def build(items: list[Query]) -> Query:
        if len(items) == 1:
            return items[0]
        cut = int(rng.integers(1, len(items)))
        left, right = build(items[:cut]), build(items[cut:])
        return conjoin(left, right) if rng.random() < 0.5 else disjoin(left, right)

    return build(subgoals)


def gen_random_instance(seed: int, limits: RandomLimits | None = None) -> ProblemInstance:
    """
    Random instance with the queries `Q1` and `Q2` and, when requested, a
    distinguished access on a random method. The same seed and limits always
    give the same instance; query constants are admitted in the configuration.

    :param seed: seed of the numpy generator
    :param limits: generation limits
    :return: a well-typed instance
    """

    limits = (limits or RandomLimits()).validate()
    rng = numpy.random.default_rng(seed)

    domains = [f"D{i}" for i in range(int(rng.integers(1, limits.domains + 1)))]
    values = {d: [TypedValue(str(j), d) for j in range(limits.values)] for d in domains}
    relations = []
    for r in range(int(rng.integers(1, limits.relations + 1))):
        arity = int(rng.integers(1, limits.arity + 1))
        attrs = tuple(Attribute(f"a{p}", _pick(rng, domains)) for p in range(arity))
        relations.append(Relation(f"R{r}", attrs))

    methods = []
    for rel in relations:
        for k in range(int(rng.integers(0, limits.methods + 1))):
            mask = rng.random(rel.arity) < 0.5
            inputs = tuple(a.name for a, chosen in zip(rel.attributes, mask) if chosen)
            mode = (
                AccessMode.dependent
                if rng.random() < limits.dependent_ratio
                else AccessMode.independent
            )
            methods.append(AccessMethod(f"m{rel.name}_{k}", rel.name, inputs, mode))
    schema = Schema(tuple(domains), tuple(relations), tuple(methods))

    facts = set()
    for _ in range(int(rng.integers(0, limits.facts + 1))):
        rel = _pick(rng, relations)
        facts.add(Fact(rel.name, tuple(_pick(rng, values[a.domain]) for a in rel.attributes)))

    q1 = _random_query(rng, relations, values, limits)
    q2 = _random_query(rng, relations, values, limits)
    conf = Configuration(frozenset(facts), frozenset(constants(q1) | constants(q2)))

    target = None
    if limits.target and methods:
        method = _pick(rng, methods)
        rel = schema.relation(method.relation)
        binding = tuple(
            _pick(rng, values[rel.attributes[p].domain])
            for p in schema.input_positions(method.name)
        )
        target = Access(method.name, binding)
    return ProblemInstance(schema, conf, {"Q1": q1, "Q2": q2}, target=target)
