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

"""Immediate relevance

An access is immediately relevant when some response to it turns the
certain answer of the query from false to true.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

from qrelevance.exceptions import UnsupportedFeatureException
from qrelevance.model import FreshValues, apply_response, check_access
from qrelevance.query import (
    FALSE,
    TRUE,
    HomomorphismSearch,
    atoms,
    constants,
    disjoin,
    dnf,
    holds,
    map_atoms,
    simplify,
    substitute,
    variable_domains,
)
from qrelevance.relevance.unify import as_constants, unify_binding
from qrelevance.relevance.verdict import SearchStats, Verdict
from qrelevance.utils import powerset

if TYPE_CHECKING:
    from qrelevance.model import Access, Configuration, Schema
    from qrelevance.query import Query


def decide_ir(schema: Schema, conf: Configuration, q: Query, access: Access) -> Verdict:
    """
    Decide immediate relevance of an access for a Boolean positive query.

    The query must be false on the configuration. A disjunct is then searched
    for a mapping where every subgoal is either a fact of the configuration or
    a fact agreeing with the binding on the accessed relation. Variables left
    free by such a mapping take one fresh value per domain.

    :param schema: the schema
    :param conf: the configuration
    :param q: the query
    :param access: the access
    :return: a verdict, `yes` carrying the witnessing response
    :raises TypingError: if the access is ill-typed
    """

    check_access(access, schema)
    stats = SearchStats()
    if holds(q, conf):
        logging.debug("The query is already certain")
        return Verdict.no(stats)

    relation = schema.method(access.method).relation
    pattern = access.pattern(schema)
    arity = schema.relation(relation).arity
    wildcard = (relation, tuple(pattern.get(p) for p in range(arity)))
    search = HomomorphismSearch(conf.index, [wildcard])
    domains = variable_domains(q, schema)
    fresh = FreshValues(conf.adom | set(access.binding) | constants(q))

    for disjunct in dnf(q):
        if not any(a.relation == relation for a in disjunct):
            continue
        assignment = search.find(disjunct)
        stats.nodes += search.nodes
        if assignment is None:
            continue
        for atom in disjunct:
            for v in atom.variables():
                if v not in assignment:
                    assignment[v] = fresh(domains[v], 0)
        response = frozenset(f for f in (a.ground(assignment) for a in disjunct) if f not in conf)
        assert holds(q, apply_response(conf, access, response, schema))
        return Verdict.yes(response, stats)
    return Verdict.no(stats)


@dataclass(frozen=True)
class IRRewriting:
    """
    First-order sentence ``not negated & positive`` whose truth on a
    configuration decides immediate relevance of a fixed Boolean access
    """

    negated: Query
    positive: Query

    def evaluate(self, conf: Configuration) -> bool:
        return not holds(self.negated, conf) and holds(self.positive, conf)

    def __str__(self) -> str:
        return f"!({self.negated}) & ({self.positive})"


def ir_rewriting(q: Query, access: Access, schema: Schema) -> IRRewriting:
    """
    Rewrite immediate relevance of a Boolean access into a query over the
    configuration. For every non-empty set W of subgoals unifiable with the
    accessed tuple, the binding is substituted into the query and the
    subgoals of W are replaced by `true`. The result may be exponentially
    larger than the query.

    :param q: the query
    :param access: an access whose method has only input attributes
    :param schema: the schema
    :return: the rewriting
    :raises UnsupportedFeatureException: for methods with output attributes
    """

    check_access(access, schema)
    if not schema.is_boolean(access.method):
        raise UnsupportedFeatureException(
            f"No rewriting for {access.method}: the method has output attributes"
        )
    occurrences = [
        i for i, atom in enumerate(atoms(q)) if unify_binding(atom, access, schema) is not None
    ]
    all_atoms = atoms(q)
    disjuncts: list[Query] = []
    for chosen in powerset(occurrences, min_size=1):
        sigma: dict | None = {}
        for i in chosen:
            sigma = unify_binding(all_atoms[i], access, schema, sigma)
            if sigma is None:
                break
        if sigma is None:
            continue
        removed = map_atoms(q, lambda i, a: TRUE if i in chosen else a)
        disjuncts.append(simplify(substitute(removed, as_constants(sigma))))
    positive = disjoin(*disjuncts) if disjuncts else FALSE
    return IRRewriting(q, positive)


def ir_by_rewriting(schema: Schema, conf: Configuration, q: Query, access: Access) -> bool:
    """Immediate relevance through the rewriting, for Boolean accesses"""
    return ir_rewriting(q, access, schema).evaluate(conf)
