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

"""Containment with one exact method per relation

In this variant every relation has at most one access method, accesses are
exact and the starting point is a set of constants together with the facts of
the relations without access. It is a special case of containment from a
configuration, and a configuration can be folded back into the contained
query when the relations without access have a bounded arity.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import TYPE_CHECKING

from qrelevance.exceptions import SchemaError, UnsupportedFeatureException
from qrelevance.model import (
    AccessMethod,
    Attribute,
    Configuration,
    Fact,
    ProblemInstance,
    Relation,
    Schema,
    attrs_of,
)
from qrelevance.query import Atom, Constant, conjoin, disjoin, map_atoms
from qrelevance.types import AccessMode, QueryLanguage
from qrelevance.utils import fresh_name

if TYPE_CHECKING:
    from collections.abc import Mapping
    from qrelevance.model import TypedValue
    from qrelevance.query import Query
    from qrelevance.types import RelationName


@dataclass(frozen=True)
class CMInstance:
    schema: Schema
    constants: frozenset[TypedValue] = field(default_factory=frozenset)
    #: Facts of the relations without access method
    fixed_facts: frozenset[Fact] = field(default_factory=frozenset)
    queries: Mapping[str, Query] = field(default_factory=dict)


def _check_single_methods(schema: Schema) -> None:
    for r in schema.relations:
        if len(schema.methods_on(r.name)) > 1:
            raise SchemaError(f"Relation {r.name} has more than one access method")


def cm_to_config(cm: CMInstance) -> ProblemInstance:
    """
    Pose a containment question of the one-method variant from a
    configuration holding the constants and the fixed facts. Repeated
    identical accesses of a path can always be merged, so exact accesses give
    the same verdicts as sound ones.

    :param cm: the instance
    :return: problem instance with the same queries
    :raises SchemaError: if a relation has several methods, or a fixed fact is
        on a relation with a method
    """

    _check_single_methods(cm.schema)
    for fact in cm.fixed_facts:
        if cm.schema.has_method(fact.relation):
            raise SchemaError(f"Fixed fact {fact} is on a relation with an access method")
    conf = Configuration(frozenset(cm.fixed_facts), frozenset(cm.constants))
    conf.check(cm.schema)
    return ProblemInstance(cm.schema, conf, dict(cm.queries))


def config_to_cm(
    inst: ProblemInstance,
    q1: str = "Q1",
    q2: str = "Q2",
    *,
    arity_bound: int = 3,
    lang: QueryLanguage = QueryLanguage.pq,
) -> CMInstance:
    """
    Fold the configuration into the contained query. The facts of the
    relations with a method and of the non-monadic relations without one are
    conjoined as ground atoms onto `q1`; the active domain becomes the
    constant set.

    A non-monadic relation `R` without access gets a monadic projection `R_a`
    per attribute, kept as fixed facts, and a dependent Boolean method. Its
    subgoals are guarded by the projections, and the candidate tuples over
    the projections that are not facts of `R` are disjoined onto `q2`.

    :param inst: instance holding both queries
    :param q1: name of the contained query
    :param q2: name of the containing query
    :param arity_bound: largest arity accepted for a relation without access
    :param lang: only positive queries are supported
    :return: the one-method instance
    :raises UnsupportedFeatureException: in CQ mode
    :raises SchemaError: on several methods per relation or a relation without
        access above the arity bound
    """

    if lang != QueryLanguage.pq:
        raise UnsupportedFeatureException("Folding a configuration is only supported for PQs")
    schema, conf = inst.schema, inst.configuration
    _check_single_methods(schema)
    left, right = inst.boolean_query(q1), inst.boolean_query(q2)

    fixed = [r for r in schema.relations if not schema.has_method(r.name)]
    for r in fixed:
        if r.arity > arity_bound:
            raise SchemaError(
                f"Relation {r.name} without access has arity {r.arity} > {arity_bound}"
            )
    wide = [r for r in fixed if r.arity > 1]

    taken = schema.names()
    relations = list(schema.relations)
    methods = list(schema.methods)
    projections: dict[RelationName, list[RelationName]] = {}
    fixed_facts: set[Fact] = set()
    false_atoms: list[Atom] = []
    for r in wide:
        names = []
        for a in r.attributes:
            names.append(fresh_name(f"{r.name}_{a.name}", taken))
            taken.add(names[-1])
            relations.append(Relation(names[-1], (Attribute("v", a.domain),)))
        method = fresh_name(f"m{r.name}", taken)
        taken.add(method)
        methods.append(AccessMethod(method, r.name, tuple(attrs_of(r)), AccessMode.dependent))
        projections[r.name] = names

        known = conf.facts_of(r.name)
        columns = [sorted({f.values[i] for f in known}) for i in range(r.arity)]
        for name, column in zip(names, columns):
            fixed_facts.update(Fact(name, (v,)) for v in column)
        for values in product(*columns):
            if Fact(r.name, values) not in conf:
                false_atoms.append(Atom(r.name, tuple(Constant(v) for v in values)))
    narrow = {r.name for r in fixed} - set(projections)
    fixed_facts.update(f for f in conf.facts if f.relation in narrow)

    def guard(_: int, atom: Atom) -> Query:
        if atom.relation not in projections:
            return atom
        return conjoin(
            atom, *(Atom(n, (t,)) for n, t in zip(projections[atom.relation], atom.terms))
        )

    ground = [
        Atom(f.relation, tuple(Constant(v) for v in f.values))
        for f in conf
        if f.relation not in narrow
    ]
    logging.debug(
        f"Folded {len(ground)} fact(s) into {q1}, {len(false_atoms)} false candidate(s) into {q2}"
    )
    queries = dict(inst.queries)
    queries[q1] = conjoin(map_atoms(left, guard), *ground)
    queries[q2] = disjoin(map_atoms(right, guard), *false_atoms)
    return CMInstance(
        Schema(schema.domains, tuple(relations), tuple(methods)),
        conf.adom,
        frozenset(fixed_facts),
        queries,
    )
