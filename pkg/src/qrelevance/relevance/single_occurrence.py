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

"""Long-term relevance when the accessed relation occurs once

Fast path for conjunctive queries with independent methods where the
accessed relation has a single subgoal. The query graph links subgoals
sharing a variable; components already satisfied by the configuration are
irrelevant to the question.
"""

from __future__ import annotations
import logging
from typing import TYPE_CHECKING

import networkx

from qrelevance.exceptions import QueryError, UnsupportedFeatureException
from qrelevance.model import FreshValues, Path, Step, check_access
from qrelevance.query import (
    And,
    HomomorphismSearch,
    atoms,
    constants,
    holds,
    is_cq,
    substitute,
    variable_domains,
)
from qrelevance.relevance.independent import further_steps, materialize
from qrelevance.relevance.unify import as_constants, unify_binding
from qrelevance.relevance.verdict import SearchStats, Verdict

if TYPE_CHECKING:
    from qrelevance.model import Access, Configuration, Schema
    from qrelevance.query import Atom, Query


def query_graph(subgoals: list[Atom]) -> networkx.Graph:
    """
    Graph over subgoal positions with an edge between subgoals sharing a variable

    :param subgoals: the subgoals of a conjunctive query
    :return: undirected graph whose nodes are the indices of `subgoals`
    """

    graph = networkx.Graph()
    graph.add_nodes_from(range(len(subgoals)))
    seen: dict[str, int] = {}
    for i, atom in enumerate(subgoals):
        for v in atom.variables():
            if v in seen:
                graph.add_edge(seen[v], i)
            else:
                seen[v] = i
    return graph


def decide_ltr_single_occurrence(
    schema: Schema, conf: Configuration, q: Query, access: Access
) -> Verdict:
    """
    Decide long-term relevance of an access for a conjunctive query in which
    the accessed relation occurs exactly once.

    The binding is unified with the accessed subgoal, then the components of
    the query graph that are already satisfied in the configuration are
    removed. The access is relevant when the accessed subgoal survives and the
    other surviving subgoals, grounded with fresh values, do not make the
    query true by themselves. Surviving subgoals on relations without any
    access method must be matched in the configuration instead.

    :param schema: the schema, with independent methods only
    :param conf: the configuration
    :param q: a conjunctive query
    :param access: the distinguished access
    :return: the verdict, `yes` carrying the witnessing path
    :raises UnsupportedFeatureException: if a dependent method is declared
    :raises QueryError: if the query is not conjunctive or the accessed relation
        does not occur exactly once
    """

    if not schema.all_independent:
        raise UnsupportedFeatureException("The single-occurrence test needs independent methods")
    if not is_cq(q):
        raise QueryError("The single-occurrence test needs a conjunctive query")
    check_access(access, schema)
    relation = schema.method(access.method).relation
    occurrences = [i for i, a in enumerate(atoms(q)) if a.relation == relation]
    if len(occurrences) != 1:
        raise QueryError(f"Relation {relation} occurs {len(occurrences)} time(s) in the query")

    stats = SearchStats()
    if holds(q, conf):
        return Verdict.no(stats)
    accessed = occurrences[0]
    sigma = unify_binding(atoms(q)[accessed], access, schema)
    if sigma is None:
        logging.debug("The binding does not unify with the accessed subgoal")
        return Verdict.no(stats)

    subgoals = atoms(substitute(q, as_constants(sigma)))
    surviving: list[int] = []
    for component in networkx.connected_components(query_graph(subgoals)):
        stats.nodes += 1
        members = sorted(component)
        if holds(And(tuple(subgoals[i] for i in members)), conf):
            if accessed in members:
                return Verdict.no(stats)
            continue
        surviving.extend(members)

    accessed_atom = subgoals[accessed]
    others = [subgoals[i] for i in sorted(surviving) if i != accessed]
    fixed = [a for a in others if not schema.has_method(a.relation)]
    fetched = [a for a in others if schema.has_method(a.relation)]
    domains = variable_domains(q, schema)
    fresh = FreshValues(conf.adom | set(access.binding) | constants(q))
    # Subgoals on relations without methods can only be matched in the configuration
    for h in HomomorphismSearch(conf.index).all(fixed):
        stats.nodes += 1
        full, facts = materialize([accessed_atom, *fetched], h, domains, fresh)
        first = accessed_atom.ground(full)
        later = [f for f in facts if f != first and f not in conf]
        if first in conf or holds(q, conf.with_facts(later)):
            continue
        path = Path(conf, (Step(access, frozenset([first])), *further_steps(later, schema)))
        return Verdict.yes(path, stats)
    return Verdict.no(stats)
